#pragma once

#include <string>
#include <vector>

#include "discsym/grid_field.hpp"
#include "discsym/point.hpp"

namespace discsym {

struct SymmetryReport {
  double direction = 0.0;
  std::size_t pairs = 0;
  double max_mismatch = 0.0;
  /// Location of the worst pair, in original coordinates.
  Point2 worst{};
  bool pass = true;
  /// No admissible sample point: the pass is vacuous.
  bool degenerate = false;
};

/// In the frame rotated by direction, pairs every node y with 0 < u(y) < sup u
/// and d1 u(y) > 0 (both above 1e-3 of their maxima, and 3h away from the unit
/// circle) with the first crossing y~ of the level u(y) to its right along the
/// row, and measures |d2 u(y) - d2 u(y~)| + |d1 u(y) + d1 u(y~)|. Passes when
/// the worst mismatch is at most tol.
SymmetryReport check_direction(const GridField& u, double direction, double tol);

/// check_direction at n_dirs angles uniformly spaced in [0, 2 pi).
std::vector<SymmetryReport> check_all_directions(const GridField& u, int n_dirs, double tol);
bool all_pass(const std::vector<SymmetryReport>& reports);

/// 2 h times the discrete Lipschitz constant of grad u away from the unit circle.
double default_symmetry_tolerance(const GridField& u);

struct AnnulusComponent {
  Point2 center{};
  double inner_radius = 0.0;  ///< r_k; 0 when the core is a single point
  double outer_radius = 0.0;  ///< R_k
  /// Tabulated profile U_k: radii increasing, values decreasing.
  std::vector<double> radii;
  std::vector<double> values;
  double fit_residual = 0.0;
  double level_low = 0.0;   ///< level of the outer edge
  double level_high = 0.0;  ///< U_k(r_k)
};

struct AnnularDecomposition {
  std::vector<AnnulusComponent> components;
  /// Measure of {0 < u < sup u, |grad u| <= 1e-6 sup u}.
  double residual_measure = 0.0;
};

/// Circles fitted to level curves on a ladder of levels, clustered into
/// concentric runs. tol bounds the circle-fit residual (a length).
/// Throws PreconditionError when a level curve is not a circle within tol, or
/// when a profile is not strictly decreasing or the core
/// condition u >= U_k(r_k) fails.
AnnularDecomposition decompose(const GridField& u, double tol, int ladder = 16);

struct RadialVerdict {
  bool radial = false;
  std::string reason;
};

/// Superharmonic radiality check: int grad u . grad phi >= -tol for every grid
/// hat function phi, a single annular
/// component centered at the origin reaching the unit circle, and strict radial
/// decrease below the top plateau {u >= sup u - max(tol, h^2 sup u / 4)}.
/// Throws PreconditionError if rhs < -tol somewhere.
RadialVerdict radial_verdict(const GridField& u, const GridField& rhs, double tol);

}  // namespace discsym
