#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "discsym/grid_field.hpp"
#include "discsym/polygon.hpp"

namespace discsym {

enum class Regime { superharmonic, subharmonic, window };
std::string to_string(Regime r);

/// Uniformly rotating piecewise-constant vorticity sum alpha_i 1_{D_i} at
/// angular velocity omega.
struct RotatingPatchProblem {
  MultiScalePatch patch;
  double omega = 0.0;
  /// Set for plain patches (all weights 1); enables the geometric classify stage.
  std::optional<PatchSpec> plain;

  static RotatingPatchProblem from_patch(const PatchSpec& patch, double omega);
  static RotatingPatchProblem from_multiscale(MultiScalePatch patch, double omega);

  /// G[omega - 2 Omega] is superharmonic iff 2 Omega <= min(0, lambda) and
  /// subharmonic iff 2 Omega >= max(0, Lambda), since the vorticity vanishes
  /// off the patch.
  Regime regime() const;
};

/// Smooth vorticity sample with angular velocity omega.
struct RotatingSmoothProblem {
  GridField omega0;
  double omega = 0.0;
  /// Omega <= inf omega0 / 2 or Omega >= sup omega0 / 2, else window.
  Regime regime() const;
};

enum class OSmallVerdict { o_small, theta, inconclusive };
std::string to_string(OSmallVerdict v);

struct OSmallPolicy {
  double fixed_point_floor = 1e-12;  ///< max |q| below this is a fixed point
  double ratio_floor = 1e-4;         ///< o(t) needs the smallest ratio below this
  double theta_floor = 1e-7;         ///< Theta(t) needs every ratio above this
  double decay = 0.7;               ///< required drop over three dyadic steps
  /// Energy checks raise the fixed-point floor to this times h^2 E(v), the
  /// size of the discretization ripple on plateaus of radial fields.
  double fixed_point_relative = 1e-2;
};

/// Sampled q(t) on a decreasing t-grid with ratios q(t)/t.
struct OSmallReport {
  std::vector<double> t;
  std::vector<double> q;
  std::vector<double> ratio;
  double slope = 0.0;  ///< least-squares slope of log|q| against log t
  double fixed_point_floor = 0.0;  ///< floor actually applied to max |q|
  OSmallVerdict verdict = OSmallVerdict::inconclusive;
  /// Extra per-t series, e.g. the unsigned integral of lemma_key2_check.
  std::vector<double> aux;
};

/// t = 2^-from, ..., 2^-to.
std::vector<double> dyadic_t_grid(int from = 3, int to = 10);
/// Drops t values with lipschitz * radius * t below 3 * recon_tol.
std::vector<double> clamp_t_grid(std::vector<double> grid, double lipschitz, double radius,
                                 double recon_tol);
/// Builds the report and applies the verdict rule: o(t) when max |q| is below
/// the fixed-point floor, or when each of the last three ratios is at most
/// decay times the ratio three steps earlier and the smallest ratio is below
/// ratio_floor; Theta(t) when every ratio exceeds theta_floor.
OSmallReport make_osmall_report(std::vector<double> t, std::vector<double> q,
                                const OSmallPolicy& policy = {});

struct WorkingField {
  GridField field;
  /// Right-hand side -Lap field, i.e. +-(omega - 2 Omega) sampled as cell fractions.
  GridField rhs;
  Regime regime;
  /// +1 for u, -1 for psi = -u.
  int sign = 1;
};

/// u = G[omega - 2 Omega]; psi = -u in the subharmonic regime. In the window
/// regime returns u unchanged.
WorkingField build_relative_stream(const RotatingPatchProblem& problem, int n);
WorkingField build_relative_stream(const RotatingSmoothProblem& problem);

/// E(v) - E(v^t) along direction, where v is the working field of the problem
/// rotated by -direction (re-solved, not resampled) and E is the
/// semi-discrete Dirichlet energy of the row interpolants. The fixed-point
/// floor is max(fixed_point_floor, fixed_point_relative h^2 E(v)).
OSmallReport energy_stationarity(const RotatingPatchProblem& problem, int n, double direction,
                                 const std::vector<double>& t_grid, const OSmallPolicy& policy = {});
OSmallReport energy_stationarity(const RotatingSmoothProblem& problem, double direction,
                                 const std::vector<double>& t_grid, const OSmallPolicy& policy = {});
/// Same quantity for a given non-negative field symmetrized in x1.
OSmallReport energy_stationarity(const GridField& v, const std::vector<double>& t_grid,
                                 const OSmallPolicy& policy = {});

/// int_V |u^t - u| over the plateau V = {|u - c| <= 1e-9 max(1, c)}, as exact
/// row integrals, with u^t the symmetrization in x1.
OSmallReport lemma_key1_check(const GridField& u, double c, const std::vector<double>& t_grid,
                              const OSmallPolicy& policy = {});

/// int_V (u^t - u) over V = int(curve), as exact row integrals; aux holds
/// int_V |u^t - u|. Requires u = c on the curve, u > c inside, and regular
/// values c + (sup u - c) 2^-j, j = 2, 3, 4.
OSmallReport lemma_key2_check(const GridField& u, const JordanPolygon& curve, double c,
                              const std::vector<double>& t_grid, const OSmallPolicy& policy = {});

struct StageResult {
  std::string name;
  std::string status;  ///< "pass", "fail" or "skipped"
  std::vector<std::pair<std::string, double>> values;
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<OSmallReport> reports;
};

enum class Verdict { consistent_radial, inconsistent, window_untested };
std::string to_string(Verdict v);

struct VerdictRecord {
  Regime regime = Regime::window;
  std::vector<StageResult> stages;
  Verdict verdict = Verdict::window_untested;
  /// Name of the first failing stage for inconsistent verdicts.
  std::string failed_stage;
};

struct RigidityConfig {
  int n = 257;
  int directions = 16;
  std::vector<double> t_grid = dyadic_t_grid();
  OSmallPolicy policy;
  double residual_tol = 1e-6;        ///< boundary condition deviation (patch case)
  double smooth_residual_tol = 1e-4;  ///< level-curve deviation (smooth case, grid-limited)
  double superharmonic_tol = 1e-9;   ///< -Lap of the working field must exceed -tol
  double radial_tol = 1e-6;          ///< value tolerance in radial_verdict
  int step_k = 8;                    ///< step approximation used for the split of I(t)
};

VerdictRecord verify_patch_rigidity(const RotatingPatchProblem& problem, const RigidityConfig& config);
VerdictRecord verify_smooth_rigidity(const RotatingSmoothProblem& problem, const RigidityConfig& config);

/// |int_D (u^t - u) - sum_i (int_{V_0^i} (u^t - u) - sum_j int_{V_j^i} (u^t - u))|
/// with node sums and u^t the symmetrization in x1.
double split_decomposition_integral(const GridField& u, const PatchSpec& patch, double t);

}  // namespace discsym
