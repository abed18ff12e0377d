#pragma once

#include <vector>

#include "discsym/grid_field.hpp"
#include "discsym/polygon.hpp"

namespace discsym {

/// Piecewise-constant approximation w_k of a smooth vorticity sample: the
/// range of omega0 is cut into k bands at regular levels, every band is split
/// into the faces bounded by its level curves, and each face carries the band
/// midpoint.
struct StepApproximation {
  int k = 0;
  std::vector<double> levels;  ///< band edges, levels.front() = min, levels.back() = max
  MultiScalePatch terms;
  double sup_error = 0.0;  ///< max |w_k - omega0| over nodes of the open disc
  double bound = 0.0;      ///< (2 / k) |omega0|_inf
};

/// Throws RegularityError when a band admits no regular level, and
/// NumericalError if the sup-error bound fails.
StepApproximation step_approximation(const GridField& omega0, int k);

/// w_k sampled at the grid nodes.
GridField sample_step(const StepApproximation& s, int n);

}  // namespace discsym
