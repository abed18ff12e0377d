#include "discsym/vstate_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "discsym/disc_potential.hpp"
#include "discsym/errors.hpp"
#include "discsym/parallel.hpp"

namespace discsym {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Mean-free Psi at the evaluation nodes.
std::vector<double> boundary_functional(const FourierBoundary& f, double omega, int n_theta,
                                        double phase) {
  if (n_theta < min_theta_nodes(f)) {
    std::ostringstream msg;
    msg << "vstate_residual: n_theta = " << n_theta << " is below 8 J m = " << min_theta_nodes(f);
    throw DomainError(msg.str());
  }
  const PatchSpec patch({PatchComponent(f.polygon(16 * static_cast<std::size_t>(n_theta), phase))});
  std::vector<double> psi(n_theta);
  parallel_for(static_cast<std::size_t>(n_theta), [&](std::size_t k) {
    const double theta = phase + kTwoPi * static_cast<double>(k) / n_theta;
    const double r = f.radius(theta);
    const Point2 x{r * std::cos(theta), r * std::sin(theta)};
    psi[k] = stream_boundary(patch, x) + 0.5 * omega * r * r;
  });
  double mean = 0.0;
  for (double v : psi) mean += v;
  mean /= n_theta;
  for (double& v : psi) v -= mean;
  return psi;
}

double project(const std::vector<double>& psi, double frequency, double phase, bool sine) {
  const int n = static_cast<int>(psi.size());
  double s = 0.0;
  for (int k = 0; k < n; ++k) {
    const double arg = frequency * (phase + kTwoPi * k / n);
    s += psi[k] * (sine ? std::sin(arg) : std::cos(arg));
  }
  return 2.0 * s / n;
}

struct System {
  FourierBoundary base;
  std::optional<Pin> pin;
  double omega;
  int n_theta;

  // Unknowns: a without pin; (omega, a_j for j != pin) with pin.
  Eigen::VectorXd pack(const FourierBoundary& f, double om) const {
    const int J = f.modes();
    Eigen::VectorXd x(J);
    if (!pin) {
      for (int j = 0; j < J; ++j) x[j] = f.a[j];
      return x;
    }
    x[0] = om;
    for (int j = 0, k = 1; j < J; ++j)
      if (j != pin->mode - 1) x[k++] = f.a[j];
    return x;
  }

  std::pair<FourierBoundary, double> unpack(const Eigen::VectorXd& x) const {
    std::vector<double> a(base.a.size());
    double om = omega;
    if (!pin) {
      for (std::size_t j = 0; j < a.size(); ++j) a[j] = x[static_cast<Eigen::Index>(j)];
    } else {
      om = x[0];
      for (int j = 0, k = 1; j < static_cast<int>(a.size()); ++j)
        a[j] = j == pin->mode - 1 ? pin->amplitude : x[k++];
    }
    return {FourierBoundary(base.b, base.m, std::move(a)), om};
  }

  Eigen::VectorXd residual(const Eigen::VectorXd& x) const {
    const auto [f, om] = unpack(x);
    const auto c = vstate_residual(f, om, n_theta);
    return Eigen::Map<const Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  }
};

}  // namespace

FourierBoundary::FourierBoundary(double b_, int m_, std::vector<double> a_)
    : b(b_), m(m_), a(std::move(a_)) {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("FourierBoundary: base radius must lie in (0, 1)");
  if (m < 1) throw DomainError("FourierBoundary: fold m must be >= 1");
  if (a.empty() || static_cast<int>(a.size()) > kMaxModes)
    throw DomainError("FourierBoundary: need between 1 and 64 coefficients");
  for (double c : a)
    if (!std::isfinite(c)) throw DomainError("FourierBoundary: non-finite coefficient");
  const int samples = 16 * modes() * m + 64;
  for (int k = 0; k < samples; ++k) {
    const double r = radius(kTwoPi * k / samples);
    if (!(r > 0.0 && r < 1.0)) {
      std::ostringstream msg;
      msg << "FourierBoundary: r = " << r << " at theta = " << kTwoPi * k / samples
          << " leaves (0, 1)";
      throw GeometryError(msg.str());
    }
  }
}

double FourierBoundary::radius(double theta) const {
  double s = 1.0;
  for (int j = 0; j < modes(); ++j) s += a[j] * std::cos((j + 1) * m * theta);
  return b * s;
}

JordanPolygon FourierBoundary::polygon(std::size_t count, double phase) const {
  std::vector<Point2> v(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double theta = phase + kTwoPi * static_cast<double>(k) / static_cast<double>(count);
    const double r = radius(theta);
    v[k] = {r * std::cos(theta), r * std::sin(theta)};
  }
  return JordanPolygon(std::move(v));
}

int min_theta_nodes(const FourierBoundary& boundary) { return 8 * boundary.modes() * boundary.m; }

std::vector<double> vstate_residual(const FourierBoundary& boundary, double omega, int n_theta,
                                    double phase) {
  const auto psi = boundary_functional(boundary, omega, n_theta, phase);
  std::vector<double> c(boundary.modes());
  for (int j = 0; j < boundary.modes(); ++j)
    c[j] = project(psi, static_cast<double>((j + 1) * boundary.m), phase, false);
  return c;
}

std::vector<std::pair<double, double>> residual_spectrum(const FourierBoundary& boundary,
                                                         double omega, int n_theta,
                                                         int max_frequency) {
  const auto psi = boundary_functional(boundary, omega, n_theta, 0.0);
  std::vector<std::pair<double, double>> out;
  for (int k = 1; k <= max_frequency; ++k)
    out.emplace_back(project(psi, k, 0.0, false), project(psi, k, 0.0, true));
  return out;
}

BranchPoint newton_solve(const FourierBoundary& start, double omega, std::optional<Pin> pin,
                         const NewtonOptions& opt) {
  if (pin && (pin->mode < 1 || pin->mode > start.modes()))
    throw DomainError("newton_solve: pinned mode out of range");
  System sys{start, pin, omega, opt.n_theta > 0 ? opt.n_theta : min_theta_nodes(start)};
  if (pin) {
    std::vector<double> a = start.a;
    a[pin->mode - 1] = pin->amplitude;
    sys.base = FourierBoundary(start.b, start.m, std::move(a));
  }
  Eigen::VectorXd x = sys.pack(sys.base, omega);
  Eigen::VectorXd F = sys.residual(x);
  std::vector<double> trace{F.norm()};
  const Eigen::Index J = x.size();

  for (int it = 0; it <= opt.max_iterations; ++it) {
    if (F.norm() <= opt.tol) {
      auto [f, om] = sys.unpack(x);
      BranchPoint p;
      p.omega = om;
      p.amplitude = std::abs(f.a[0]);
      p.boundary = std::move(f);
      p.residual_norm = F.norm();
      p.iterations = it;
      return p;
    }
    if (it == opt.max_iterations) break;

    Eigen::MatrixXd Jac(J, J);
    for (Eigen::Index c = 0; c < J; ++c) {
      Eigen::VectorXd xp = x;
      const double dx = opt.fd_step * std::max(1.0, std::abs(x[c]));
      xp[c] += dx;
      Jac.col(c) = (sys.residual(xp) - F) / dx;
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(Jac, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (!(s[J - 1] > opt.min_rcond * s[0])) {
      std::ostringstream msg;
      msg << "newton_solve: Jacobian numerically singular (sigma_min / sigma_max = "
          << s[J - 1] / s[0] << ") at omega = " << sys.unpack(x).second;
      throw BifurcationProximityError(msg.str());
    }
    const Eigen::VectorXd dx = svd.solve(-F);

    double lambda = 1.0;
    bool accepted = false;
    for (int half = 0; half < 12 && !accepted; ++half, lambda *= 0.5) {
      const Eigen::VectorXd trial = x + lambda * dx;
      try {
        const Eigen::VectorXd Ft = sys.residual(trial);
        if (Ft.norm() < F.norm()) {
          x = trial;
          F = Ft;
          accepted = true;
        }
      } catch (const GeometryError&) {
      }
    }
    trace.push_back(F.norm());
    if (!accepted) break;
  }
  std::ostringstream msg;
  msg << "newton_solve: no convergence at omega = " << sys.unpack(x).second << "; residual trace";
  for (double r : trace) msg << ' ' << r;
  throw NumericalError(msg.str());
}

FundamentalMode fundamental_mode(double b, int m, const NewtonOptions& opt) {
  const FourierBoundary circle(b, m, {0.0});
  const int n_theta = opt.n_theta > 0 ? opt.n_theta : min_theta_nodes(circle);
  const double d = opt.fd_step;
  const FourierBoundary bumped(b, m, {d});
  auto c1 = [&](const FourierBoundary& f, double om) { return vstate_residual(f, om, n_theta)[0]; };
  const double a0 = c1(circle, 0.0), a1 = c1(bumped, 0.0);
  const double b0 = c1(circle, 1.0), b1 = c1(bumped, 1.0);
  FundamentalMode fm;
  fm.A = (a1 - a0) / d;
  fm.B = ((b1 - b0) - (a1 - a0)) / d;
  return fm;
}

std::vector<double> bifurcation_scan(double b, int m, std::pair<double, double> range, int steps,
                                     const NewtonOptions& opt) {
  if (!(b > 0.0 && b < 1.0)) throw DomainError("bifurcation_scan: base radius must lie in (0, 1)");
  if (m < 1) throw DomainError("bifurcation_scan: fold m must be >= 1");
  if (steps < 1 || !(range.first < range.second))
    throw DomainError("bifurcation_scan: need steps >= 1 and a non-empty range");
  const FundamentalMode fm = fundamental_mode(b, m, opt);
  const double zero = 1e-12 * (std::abs(fm.A) + std::abs(fm.B));
  std::vector<double> grid(steps + 1), val(steps + 1);
  for (int i = 0; i <= steps; ++i) {
    grid[i] = range.first + (range.second - range.first) * i / steps;
    val[i] = fm.at(grid[i]);
  }
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) {
    if (std::abs(val[i]) <= zero) {
      if (out.empty() || out.back() != grid[i]) out.push_back(grid[i]);
      continue;
    }
    if (i == steps || std::abs(val[i + 1]) <= zero || (val[i] > 0) == (val[i + 1] > 0)) continue;
    double lo = grid[i], hi = grid[i + 1];
    for (int k = 0; k < 200 && hi - lo > 1e-15; ++k) {
      const double mid = 0.5 * (lo + hi);
      if ((fm.at(mid) > 0) == (val[i] > 0))
        lo = mid;
      else
        hi = mid;
    }
    out.push_back(0.5 * (lo + hi));
  }
  return out;
}

std::vector<BranchPoint> continue_branch(const BranchPoint& seed, double step, int count,
                                         std::string* stop_reason, const NewtonOptions& opt) {
  if (count < 0) throw DomainError("continue_branch: count must be >= 0");
  if (seed.residual_norm > opt.tol || seed.amplitude <= 0.0)
    throw PreconditionError("continue_branch: seed must be converged and non-radial");
  std::vector<BranchPoint> out{seed};
  const double sign = seed.boundary.a[0] < 0.0 ? -1.0 : 1.0;
  auto stop = [&](std::string why) {
    if (stop_reason) *stop_reason = std::move(why);
    return out;
  };
  for (int k = 1; k <= count; ++k) {
    const BranchPoint& prev = out.back();
    const double amp = sign * (seed.amplitude + k * step);
    try {
      std::vector<double> a = prev.boundary.a;
      a[0] = amp;
      const FourierBoundary guess(prev.boundary.b, prev.boundary.m, std::move(a));
      BranchPoint p = newton_solve(guess, prev.omega, Pin{1, amp}, opt);
      if (!(p.omega > 0.0 && p.omega < 0.5)) {
        std::ostringstream msg;
        msg << "omega " << p.omega << " left (0, 1/2) at amplitude " << std::abs(amp);
        return stop(msg.str());
      }
      out.push_back(std::move(p));
    } catch (const GeometryError& e) {
      return stop(std::string("geometry: ") + e.what());
    } catch (const NumericalError& e) {
      return stop(std::string("numerical: ") + e.what());
    }
  }
  return stop("");
}

}  // namespace discsym
