#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "discsym/grid_field.hpp"
#include "discsym/interval_flow.hpp"

namespace discsym {

/// Piecewise-linear function of x1 on one grid row, zero outside [x.front(),
/// x.back()].
struct RowFunction {
  std::vector<double> x;
  std::vector<double> v;

  double operator()(double at) const;
  double integral() const;
  /// Exact length of {v > c}.
  double measure_above(double c) const;
  /// Exact integral of (v')^2.
  double slope_energy() const;
};

/// Exact integrals over the union of both breakpoint sets.
double integrate_product(const RowFunction& a, const RowFunction& b);
double integrate_abs_difference(const RowFunction& a, const RowFunction& b);
double integrate_squared_difference(const RowFunction& a, const RowFunction& b);

/// Rows of a grid field as piecewise-linear functions through the nodes.
std::vector<RowFunction> row_functions(const GridField& u);

/// Semi-discrete integrals of row families: h * sum over rows.
double row_integral(const std::vector<RowFunction>& rows, double h);
double row_inner_product(const std::vector<RowFunction>& a, const std::vector<RowFunction>& b,
                         double h);
double row_l1_distance(const std::vector<RowFunction>& a, const std::vector<RowFunction>& b,
                       double h);
/// Exact x1 part plus row differences for the x2 part:
/// h sum_j int |d1 v_j|^2 + h sum_j int ((v_{j+1} - v_j) / h)^2.
double semi_discrete_energy(const std::vector<RowFunction>& rows, double h);

/// Continuous Steiner symmetrization in x1 of a non-negative grid field, with
/// the row structure precomputed so that many times t can be evaluated.
///
/// Each row is the piecewise-linear interpolant of its nodes. Super-level sets
/// are taken at every distinct node value plus a uniform ladder of `levels`
/// values, flowed with flow_set, and u^t is rebuilt from the flowed sets. The
/// rebuild is exact for the row interpolant: linear between levels where no
/// merge occurred, and by bisection on the level where one did.
class CstsEngine {
 public:
  static constexpr int kDefaultLevels = 256;

  /// Throws DomainError if u has a negative value.
  explicit CstsEngine(const GridField& u, int levels = kDefaultLevels);
  ~CstsEngine();
  CstsEngine(CstsEngine&&) noexcept;
  CstsEngine& operator=(CstsEngine&&) noexcept;

  int n() const;
  /// u^t at the grid nodes. t = kInfiniteTime gives the Steiner symmetrization.
  GridField field(double t) const;
  /// u^t along every row, with breakpoints at all flowed level-set endpoints.
  std::vector<RowFunction> rows(double t) const;
  /// Flow of the level-set {u > c} on row j (c clamped to the level ladder).
  FlowTrace trace(int row, double level, double t) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

GridField csts_field(const GridField& u, double t, int levels = CstsEngine::kDefaultLevels);
GridField steiner_field(const GridField& u);
/// Rotates by -direction, symmetrizes in x1, rotates back.
GridField csts_field_rotated(const GridField& u, double direction, double t,
                             int levels = CstsEngine::kDefaultLevels);

/// h^2 sum |grad_h u|^2 with central differences over the masked nodes.
double dirichlet_energy(const GridField& u);

/// (int u^t v^t, int u v), both as exact row integrals of the row interpolants.
std::pair<double, double> hardy_littlewood_check(const GridField& u, const GridField& v, double t);

}  // namespace discsym
