#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace discsym {

/// Outcome of one randomized property over all cases: worst is the largest
/// violation measure (0 when the property holds exactly), compared with
/// tolerance.
struct PropertyResult {
  std::string name;
  int cases = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  bool pass = true;
};

/// Set-flow properties on random interval unions: equimeasurability,
/// monotonicity, semigroup, interval preservation and the t = infinity limit.
std::vector<PropertyResult> interval_properties(std::uint64_t seed, int cases = 200);

/// Field properties of the CStS on random non-negative Lipschitz fields:
/// equimeasurability, monotonicity, commutativity with min(., c), fixed points,
/// Cavalieri, L1 continuity in t, L1 nonexpansivity, Hardy-Littlewood,
/// Lipschitz preservation, support containment, the sup bound L R t and energy
/// monotonicity.
std::vector<PropertyResult> field_properties(std::uint64_t seed, int cases = 20, int n = 65);

bool all_pass(const std::vector<PropertyResult>& results);

}  // namespace discsym
