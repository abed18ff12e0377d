#include "discsym/symmetry_analysis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "discsym/errors.hpp"
#include "discsym/level_sets.hpp"
#include "discsym/parallel.hpp"

namespace discsym {

namespace {

struct Gradients {
  std::vector<double> d1, d2;
};

Gradients node_gradients(const GridField& u) {
  const int n = u.n();
  const double h = u.h();
  Gradients g{std::vector<double>(u.size(), 0.0), std::vector<double>(u.size(), 0.0)};
  auto at = [&](int i, int j) { return i < 0 || j < 0 || i >= n || j >= n ? 0.0 : u.at(i, j); };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      g.d1[u.index(i, j)] = (at(i + 1, j) - at(i - 1, j)) / (2 * h);
      g.d2[u.index(i, j)] = (at(i, j + 1) - at(i, j - 1)) / (2 * h);
    }
  return g;
}

// Sample points need values and slopes above this fraction of their maxima.
constexpr double kAdmissible = 1e-3;

}  // namespace

double default_symmetry_tolerance(const GridField& u) {
  const auto g = node_gradients(u);
  const int n = u.n();
  double lip = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!u.interior(i, j) || norm(u.node(i, j)) > 1.0 - 3.0 * u.h()) continue;
      for (auto [a, b] : {std::pair{i + 1, j}, std::pair{i, j + 1}}) {
        if (!u.inside(a, b)) continue;
        const double dx = g.d1[u.index(a, b)] - g.d1[u.index(i, j)];
        const double dy = g.d2[u.index(a, b)] - g.d2[u.index(i, j)];
        lip = std::max(lip, std::hypot(dx, dy) / u.h());
      }
    }
  return 2.0 * u.h() * lip;
}

SymmetryReport check_direction(const GridField& u, double direction, double tol) {
  const int n = u.n();
  const double h = u.h();
  const auto g = node_gradients(u);
  const GridField g1(n, g.d1), g2(n, g.d2);
  const Point2 e1 = rotate({1.0, 0.0}, direction);
  const Point2 e2 = rotate({0.0, 1.0}, direction);
  // Frame gradient at a physical point, from the interpolated node gradients.
  auto frame_gradient = [&](Point2 y) {
    const Point2 grad{g1.interpolate(y), g2.interpolate(y)};
    return Point2{dot(grad, e1), dot(grad, e2)};
  };
  const GridField w = direction == 0.0 ? u : rotate_field(u, -direction);
  const double sup = w.max_value();
  double gmax = 0.0;
  for (std::size_t k = 0; k < g.d1.size(); ++k) gmax = std::max(gmax, std::hypot(g.d1[k], g.d2[k]));
  const double edge = 1.0 - 3.0 * h;
  SymmetryReport rep;
  rep.direction = direction;
  for (int j = 1; j + 1 < n; ++j)
    for (int i = 1; i + 1 < n; ++i) {
      const Point2 xi = w.node(i, j);
      if (norm(xi) > edge) continue;
      const double v = w.at(i, j);
      if (!(v > kAdmissible * sup && v < (1.0 - kAdmissible) * sup)) continue;
      const Point2 y = rotate(xi, direction);
      const Point2 gy = frame_gradient(y);
      if (!(gy.x1 > kAdmissible * gmax)) continue;
      int k = i + 1;
      while (k < n && w.at(k, j) > v) ++k;
      if (k >= n || k == i + 1) continue;
      const double a = w.at(k - 1, j);
      const double b = w.at(k, j);
      const double s = (a - v) / (a - b);
      const Point2 xt{w.node_coord(k - 1) + s * h, xi.x2};
      if (norm(xt) > edge) continue;
      const Point2 gt = frame_gradient(rotate(xt, direction));
      const double mismatch = std::abs(gy.x2 - gt.x2) + std::abs(gy.x1 + gt.x1);
      ++rep.pairs;
      if (mismatch > rep.max_mismatch) {
        rep.max_mismatch = mismatch;
        rep.worst = y;
      }
    }
  rep.degenerate = rep.pairs == 0;
  rep.pass = rep.max_mismatch <= tol;
  return rep;
}

std::vector<SymmetryReport> check_all_directions(const GridField& u, int n_dirs, double tol) {
  if (n_dirs < 8) throw DomainError("check_all_directions: need at least 8 directions");
  std::vector<SymmetryReport> out(n_dirs);
  parallel_for(static_cast<std::size_t>(n_dirs), [&](std::size_t k) {
    out[k] = check_direction(u, 2.0 * kPi * static_cast<double>(k) / n_dirs, tol);
  });
  return out;
}

bool all_pass(const std::vector<SymmetryReport>& reports) {
  return std::all_of(reports.begin(), reports.end(), [](const auto& r) { return r.pass; });
}

// ---------------------------------------------------------------------------

namespace {

struct Circle {
  Point2 center;
  double radius;
  double residual;
};

Circle fit_circle(const std::vector<Point2>& pts) {
  Eigen::MatrixXd A(pts.size(), 3);
  Eigen::VectorXd b(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    A(k, 0) = pts[k].x1;
    A(k, 1) = pts[k].x2;
    A(k, 2) = 1.0;
    b[k] = -norm2(pts[k]);
  }
  const Eigen::Vector3d s = A.colPivHouseholderQr().solve(b);
  Point2 c{-0.5 * s[0], -0.5 * s[1]};
  double r = std::sqrt(std::max(0.0, norm2(c) - s[2]));
  // One Gauss-Newton step on the geometric distances.
  Eigen::MatrixXd J(pts.size(), 3);
  Eigen::VectorXd res(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Point2 d = pts[k] - c;
    const double len = std::max(norm(d), 1e-300);
    J(k, 0) = -d.x1 / len;
    J(k, 1) = -d.x2 / len;
    J(k, 2) = -1.0;
    res[k] = len - r;
  }
  const Eigen::Vector3d step = J.colPivHouseholderQr().solve(-res);
  c = {c.x1 + step[0], c.x2 + step[1]};
  r += step[2];
  double worst = 0.0;
  for (const auto& p : pts) worst = std::max(worst, std::abs(norm(p - c) - r));
  return {c, r, worst};
}

bool inside_curve(const std::vector<Point2>& poly, Point2 p) {
  bool in = false;
  for (std::size_t k = 0, m = poly.size(); k < m; ++k) {
    const Point2 a = poly[k];
    const Point2 b = poly[(k + 1) % m];
    if ((a.x2 > p.x2) != (b.x2 > p.x2)) {
      const double x = a.x1 + (p.x2 - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2);
      if (p.x1 < x) in = !in;
    }
  }
  return in;
}

// Relative value tolerance for the top plateau of a component.
constexpr double kFlatLevel = 1e-8;

struct Run {
  std::vector<int> levels;  // ladder indices
  std::vector<Circle> circles;
  std::vector<std::vector<Point2>> curves;
};

}  // namespace

AnnularDecomposition decompose(const GridField& u, double tol, int ladder) {
  AnnularDecomposition out;
  const double sup = u.max_value();
  if (!(sup > 0.0)) return out;
  const double h = u.h();
  const double match = std::max(2.0 * h, tol);
  const double flat = kFlatLevel * sup;
  std::vector<double> c(ladder + 2);
  for (int k = 0; k <= ladder + 1; ++k) c[k] = sup * k / (ladder + 1);

  std::vector<Run> runs;
  for (int k = 1; k <= ladder; ++k) {
    for (const auto& curve : level_curves(u, c[k])) {
      if (curve.signed_area() <= 0.0)
        throw PreconditionError("decompose: level " + std::to_string(c[k]) +
                                " has a hole, so u is not annular there");
      const Circle fit = fit_circle(curve.points);
      if (fit.residual > tol) {
        std::ostringstream msg;
        msg << "decompose: level " << c[k] << " is not a circle (residual " << fit.residual << ")";
        throw PreconditionError(msg.str());
      }
      Run* home = nullptr;
      for (auto& r : runs)
        if (r.levels.back() == k - 1 && norm(r.circles.back().center - fit.center) <= match &&
            inside_curve(r.curves.back(), curve.points.front()))
          home = &r;
      if (!home) {
        runs.emplace_back();
        home = &runs.back();
      }
      home->levels.push_back(k);
      home->circles.push_back(fit);
      home->curves.push_back(curve.points);
    }
  }

  const auto g = node_gradients(u);
  for (int j = 0; j < u.n(); ++j)
    for (int i = 0; i < u.n(); ++i) {
      const double v = u.at(i, j);
      const std::size_t p = u.index(i, j);
      if (v > 0 && v < sup && std::hypot(g.d1[p], g.d2[p]) <= 1e-6 * sup)
        out.residual_measure += h * h;
    }

  for (const auto& r : runs) {
    AnnulusComponent a;
    double cx = 0, cy = 0, res = 0;
    for (const auto& ci : r.circles) {
      cx += ci.center.x1;
      cy += ci.center.x2;
      res = std::max(res, ci.residual);
    }
    a.center = {cx / r.circles.size(), cy / r.circles.size()};
    a.fit_residual = res;
    const int lo = r.levels.front();
    a.level_low = c[lo - 1];
    // Outer edge: the level curve just above level_low around this run.
    a.outer_radius = r.circles[0].radius;
    const double edge_level = a.level_low + 1e-6 * (c[lo] - a.level_low);
    double best = INFINITY;
    for (const auto& curve : level_curves(u, edge_level)) {
      if (curve.signed_area() <= 0.0 || !inside_curve(curve.points, r.curves[0].front())) continue;
      const Circle fit = fit_circle(curve.points);
      const double d = norm(fit.center - r.circles[0].center);
      if (fit.residual <= std::max(tol, 2.0 * h) && d < best) {
        best = d;
        a.outer_radius = std::max(fit.radius, r.circles[0].radius);
      }
    }

    // Core: the plateau {u > M - flat} inside the innermost curve.
    const auto& inner = r.curves.back();
    double M = 0.0, plateau = 0.0;
    for (int j = 0; j < u.n(); ++j)
      for (int i = 0; i < u.n(); ++i)
        if (inside_curve(inner, u.node(i, j))) M = std::max(M, u.at(i, j));
    for (int j = 0; j < u.n(); ++j)
      for (int i = 0; i < u.n(); ++i)
        if (u.at(i, j) > M - flat && inside_curve(inner, u.node(i, j))) plateau += h * h;
    a.inner_radius = plateau >= kPi * 9.0 * h * h ? std::sqrt(plateau / kPi) : 0.0;
    a.level_high = M;

    a.radii.push_back(a.inner_radius);
    a.values.push_back(M);
    for (std::size_t m = r.circles.size(); m-- > 0;) {
      if (r.circles[m].radius <= a.radii.back()) continue;
      a.radii.push_back(r.circles[m].radius);
      a.values.push_back(c[r.levels[m]]);
    }
    if (a.outer_radius > a.radii.back()) {
      a.radii.push_back(a.outer_radius);
      a.values.push_back(a.level_low);
    }
    for (std::size_t m = 1; m < a.values.size(); ++m)
      if (!(a.values[m] < a.values[m - 1]))
        throw PreconditionError("decompose: profile is not strictly decreasing");
    for (int j = 0; j < u.n(); ++j)
      for (int i = 0; i < u.n(); ++i)
        if (norm(u.node(i, j) - a.center) < a.inner_radius - h && u.at(i, j) < M - flat)
          throw PreconditionError("decompose: core condition u >= U(r) fails");
    out.components.push_back(std::move(a));
  }
  return out;
}

RadialVerdict radial_verdict(const GridField& u, const GridField& rhs, double tol) {
  if (!u.same_grid(rhs)) throw DomainError("radial_verdict: grid mismatch");
  for (int j = 0; j < rhs.n(); ++j)
    for (int i = 0; i < rhs.n(); ++i)
      if (rhs.inside(i, j) && rhs.at(i, j) < -tol) {
        std::ostringstream msg;
        msg << "radial_verdict: -Lap u = " << rhs.at(i, j) << " < 0 at (" << rhs.node(i, j).x1
            << ", " << rhs.node(i, j).x2 << ")";
        throw PreconditionError(msg.str());
      }
  const int n = u.n();
  const double h = u.h();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (u.interior(i, j) && -five_point_laplacian(u, i, j) * h * h < -tol)
        return {false, "not weakly superharmonic: int grad u . grad phi < 0 for a hat function"};

  AnnularDecomposition dec;
  try {
    dec = decompose(u, 2.0 * h);
  } catch (const PreconditionError& e) {
    return {false, e.what()};
  }
  if (dec.components.size() != 1)
    return {false, "annular decomposition has " + std::to_string(dec.components.size()) +
                       " components"};
  const auto& a = dec.components.front();
  const double slack = 2.0 * h;
  if (norm(a.center) > slack) return {false, "annulus is not centered at the origin"};
  if (std::abs(a.outer_radius - 1.0) > 2.0 * slack)
    return {false, "outer radius " + std::to_string(a.outer_radius) + " differs from 1"};

  // Strict radial decrease off the top plateau: compare radial bins two apart.
  const double sup = u.max_value();
  // Discrete plateaus ripple at O(h^2 sup).
  const double plateau = std::max(tol, 0.25 * h * h * sup);
  const int bins = n;
  std::vector<double> lo(bins, INFINITY), hi(bins, -INFINITY);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!u.inside(i, j) || u.at(i, j) >= sup - plateau) continue;
      const int b = std::min(bins - 1, static_cast<int>(norm(u.node(i, j)) / h));
      lo[b] = std::min(lo[b], u.at(i, j));
      hi[b] = std::max(hi[b], u.at(i, j));
    }
  for (int b = 0; b + 2 < bins; ++b)
    if (std::isfinite(lo[b]) && std::isfinite(hi[b + 2]) && !(lo[b] > hi[b + 2] - tol))
      return {false, "not radially decreasing near r = " + std::to_string(b * h)};
  return {true, "radially decreasing about the origin"};
}

}  // namespace discsym
