#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "discsym/polygon.hpp"

namespace discsym {

/// m-fold boundary r(theta) = b (1 + sum_j a_j cos(j m theta)).
struct FourierBoundary {
  static constexpr int kMaxModes = 64;

  double b = 0.5;
  int m = 1;
  std::vector<double> a;

  FourierBoundary() = default;
  /// Throws GeometryError unless 0 < r < 1 everywhere; DomainError for bad b,
  /// m or more than kMaxModes coefficients.
  FourierBoundary(double b, int m, std::vector<double> a);

  int modes() const { return static_cast<int>(a.size()); }
  double radius(double theta) const;
  /// Vertices at theta = phase + 2 pi k / count.
  JordanPolygon polygon(std::size_t count, double phase = 0.0) const;
};

struct BranchPoint {
  double omega = 0.0;
  FourierBoundary boundary;
  double residual_norm = 0.0;
  double amplitude = 0.0;  ///< |a_1|
  int iterations = 0;
};

/// Smallest admissible n_theta, 8 J m.
int min_theta_nodes(const FourierBoundary& boundary);

/// Projections onto cos(j m theta), j = 1..J, of the mean-free boundary
/// functional Psi = G[1_D] + (omega/2) r^2 sampled at theta_k = phase + 2 pi k /
/// n_theta. The patch is the 16 n_theta-gon through r(theta).
std::vector<double> vstate_residual(const FourierBoundary& boundary, double omega, int n_theta,
                                    double phase = 0.0);

/// (cos, sin) projections of the same mean-free functional onto frequencies
/// 1..max_frequency.
std::vector<std::pair<double, double>> residual_spectrum(const FourierBoundary& boundary,
                                                         double omega, int n_theta,
                                                         int max_frequency);

struct NewtonOptions {
  double tol = 1e-8;          ///< Euclidean norm of the residual
  int max_iterations = 40;
  double fd_step = 1e-6;      ///< forward-difference step, relative to max(1, |x|)
  double min_rcond = 1e-10;   ///< smallest allowed sigma_min / sigma_max of the Jacobian
  int n_theta = 0;            ///< 0 selects min_theta_nodes
};

struct Pin {
  int mode = 1;  ///< 1-based coefficient index
  double amplitude = 0.0;
};

/// Newton iteration on vstate_residual with a forward-difference Jacobian.
/// Without a pin the unknowns are a with omega fixed; with a pin a_mode is
/// fixed and omega joins the unknowns. Throws BifurcationProximityError on a
/// numerically singular Jacobian and NumericalError (listing the residual
/// trace) when the iteration fails to converge.
BranchPoint newton_solve(const FourierBoundary& start, double omega, std::optional<Pin> pin = {},
                         const NewtonOptions& options = {});

/// Jacobian of the fundamental-mode coefficient with respect to a_1 at the
/// circle r = b. The residual is affine in omega, so this is A + omega B.
struct FundamentalMode {
  double A = 0.0;
  double B = 0.0;
  double at(double omega) const { return A + omega * B; }
};
FundamentalMode fundamental_mode(double b, int m, const NewtonOptions& options = {});

/// Bifurcation candidates of the m-fold branch off the disc of radius b:
/// sign changes and near-zeros of the fundamental-mode Jacobian at steps + 1
/// equally spaced omega values in [lo, hi], refined by bisection.
std::vector<double> bifurcation_scan(double b, int m, std::pair<double, double> omega_range,
                                     int steps, const NewtonOptions& options = {});

/// Amplitude-pinned continuation: a_1 grows by step per point, (omega, a_2..a_J)
/// re-solved from the previous point. The list starts with the seed and stops
/// early on geometry or convergence failure, or when omega leaves (0, 1/2);
/// the reason is written to stop_reason.
std::vector<BranchPoint> continue_branch(const BranchPoint& seed, double step, int count,
                                         std::string* stop_reason = nullptr,
                                         const NewtonOptions& options = {});

}  // namespace discsym
