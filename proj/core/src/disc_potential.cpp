#include "discsym/disc_potential.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <string>

#include "discsym/errors.hpp"

namespace discsym {

namespace {

constexpr double kInvTwoPi = 1.0 / (2.0 * kPi);

void require_in_disc(Point2 p, const char* what) {
  if (!std::isfinite(p.x1) || !std::isfinite(p.x2) || norm2(p) > 1.0 + 1e-12)
    throw DomainError(std::string(what) + ": point outside the closed unit disc");
}

// |x/|x| - |x| y|^2 written without dividing by |x|.
double reflected_distance2(Point2 x, Point2 y) {
  return std::max(0.0, 1.0 - 2.0 * dot(x, y) + norm2(x) * norm2(y));
}

}  // namespace

double green_regular(Point2 x, Point2 y) {
  require_in_disc(x, "green_regular");
  require_in_disc(y, "green_regular");
  const double d2 = reflected_distance2(x, y);
  if (d2 == 0.0) throw SingularityError("green_regular: x and y coincide on the unit circle");
  return -0.25 * std::log(d2) / kPi;
}

double green(Point2 x, Point2 y) {
  require_in_disc(x, "green");
  require_in_disc(y, "green");
  const double r2 = norm2(x - y);
  if (r2 == 0.0) throw SingularityError("green: coincident points");
  const double d2 = reflected_distance2(x, y);
  // Both logarithms together: (1/4pi) ln(d2 / r2).
  return 0.25 * std::log(d2 / r2) / kPi;
}

double stream_radial(double r, Point2 x) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("stream_radial: radius must lie in (0, 1]");
  require_in_disc(x, "stream_radial");
  const double s2 = norm2(x);
  if (s2 < r * r) return 0.25 * (r * r + 2.0 * r * r * std::log(1.0 / r) - s2);
  return 0.25 * r * r * std::log(1.0 / std::max(s2, 1e-300));
}

// ---------------------------------------------------------------------------
// Shortley-Weller Poisson solver

struct DiscPoisson::Impl {
  std::vector<int> unknown;  // node index -> unknown index, -1 if Dirichlet/outside
  Eigen::SparseMatrix<double> matrix;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
};

namespace {

struct Arm {
  double length;
  bool inside;  // neighbour node is a free unknown
  int i, j;
};

bool on_circle(int n, int i, int j) {
  const long a = 2L * i - (n - 1);
  const long b = 2L * j - (n - 1);
  const long m = n - 1;
  return a * a + b * b == m * m;
}

// Four arms of the stencil at masked node (i, j).
std::array<Arm, 4> arms(const GridField& g, int i, int j) {
  const double h = g.h();
  const double floor_len = 1e-8 * h;
  const Point2 x = g.node(i, j);
  const double cx = std::sqrt(std::max(0.0, 1.0 - x.x2 * x.x2));
  const double cy = std::sqrt(std::max(0.0, 1.0 - x.x1 * x.x1));
  const int n = g.n();
  auto arm = [&](int di, int dj, double to_circle) -> Arm {
    const int a = i + di;
    const int b = j + dj;
    if (a >= 0 && a < n && b >= 0 && b < n && g.inside(a, b))
      return {h, !on_circle(n, a, b), a, b};
    return {std::clamp(to_circle, floor_len, h), false, a, b};
  };
  return {arm(1, 0, cx - x.x1), arm(-1, 0, cx + x.x1), arm(0, 1, cy - x.x2),
          arm(0, -1, cy + x.x2)};
}

// Stencil weights for the negated Laplacian: diag and per-arm off-diagonal.
void weights(const std::array<Arm, 4>& a, double& diag, std::array<double, 4>& off) {
  const double sx = a[0].length + a[1].length;
  const double sy = a[2].length + a[3].length;
  off[0] = 2.0 / (sx * a[0].length);
  off[1] = 2.0 / (sx * a[1].length);
  off[2] = 2.0 / (sy * a[2].length);
  off[3] = 2.0 / (sy * a[3].length);
  diag = off[0] + off[1] + off[2] + off[3];
}

}  // namespace

DiscPoisson::DiscPoisson(int n) : n_(n), impl_(std::make_unique<Impl>()) {
  const GridField g(n);
  auto& unknown = impl_->unknown;
  unknown.assign(static_cast<std::size_t>(n) * n, -1);
  int count = 0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (g.inside(i, j) && !on_circle(n, i, j)) unknown[g.index(i, j)] = count++;

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(count) * 5);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int row = unknown[g.index(i, j)];
      if (row < 0) continue;
      const auto a = arms(g, i, j);
      double diag;
      std::array<double, 4> off;
      weights(a, diag, off);
      trips.emplace_back(row, row, diag);
      for (int k = 0; k < 4; ++k)
        if (a[k].inside) trips.emplace_back(row, unknown[g.index(a[k].i, a[k].j)], -off[k]);
    }
  impl_->matrix.resize(count, count);
  impl_->matrix.setFromTriplets(trips.begin(), trips.end());
  impl_->matrix.makeCompressed();
  impl_->lu.analyzePattern(impl_->matrix);
  impl_->lu.factorize(impl_->matrix);
  if (impl_->lu.info() != Eigen::Success)
    throw NumericalError("DiscPoisson: factorization failed for n = " + std::to_string(n));
}

DiscPoisson::~DiscPoisson() = default;

std::shared_ptr<const DiscPoisson> DiscPoisson::get(int n) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const DiscPoisson>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const DiscPoisson>(n);
  return slot;
}

GridField DiscPoisson::solve(const GridField& rhs) const {
  if (rhs.n() != n_) throw DomainError("DiscPoisson::solve: grid size mismatch");
  const auto& unknown = impl_->unknown;
  Eigen::VectorXd b(impl_->matrix.rows());
  for (std::size_t k = 0; k < unknown.size(); ++k)
    if (unknown[k] >= 0) b[unknown[k]] = rhs.values()[k];
  GridField out(n_);
  const double bnorm = b.norm();
  if (bnorm == 0.0) return out;
  const Eigen::VectorXd x = impl_->lu.solve(b);
  const double rel = (impl_->matrix * x - b).norm() / bnorm;
  if (!(rel <= 1e-10))
    throw NumericalError("DiscPoisson: relative residual " + std::to_string(rel) +
                         " exceeds 1e-10");
  for (std::size_t k = 0; k < unknown.size(); ++k)
    if (unknown[k] >= 0) out.values()[k] = x[unknown[k]];
  return out;
}

double DiscPoisson::apply(const GridField& u, int i, int j) const {
  if (!u.inside(i, j) || on_circle(n_, i, j)) return 0.0;
  const auto a = arms(u, i, j);
  double diag;
  std::array<double, 4> off;
  weights(a, diag, off);
  double v = diag * u.at(i, j);
  for (int k = 0; k < 4; ++k)
    if (a[k].inside) v -= off[k] * u.at(a[k].i, a[k].j);
  return v;
}

// ---------------------------------------------------------------------------
// Area fractions

namespace {

double shoelace(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) a += cross(poly[k], poly[(k + 1) % poly.size()]);
  return 0.5 * a;
}

std::vector<Point2> clip(const std::vector<Point2>& poly, int axis, double bound, bool below) {
  std::vector<Point2> out;
  if (poly.empty()) return out;
  auto c = [axis](Point2 p) { return axis == 0 ? p.x1 : p.x2; };
  auto in = [&](Point2 p) { return below ? c(p) <= bound : c(p) >= bound; };
  Point2 prev = poly.back();
  bool prev_in = in(prev);
  for (Point2 cur : poly) {
    const bool cur_in = in(cur);
    if (cur_in != prev_in) {
      Point2 q = prev + ((bound - c(prev)) / (c(cur) - c(prev))) * (cur - prev);
      (axis == 0 ? q.x1 : q.x2) = bound;
      out.push_back(q);
    }
    if (cur_in) out.push_back(cur);
    prev = cur;
    prev_in = cur_in;
  }
  return out;
}

// Covered fraction of every dual cell by the interior of one curve.
std::vector<double> curve_fraction(const JordanPolygon& curve, const GridField& g) {
  const int n = g.n();
  const double h = g.h();
  std::vector<double> frac(static_cast<std::size_t>(n) * n, 0.0);
  std::vector<unsigned char> cut(frac.size(), 0);
  auto cell_lo = [&](double v) { return std::clamp(static_cast<int>(std::floor((v + 1.0) / h + 0.5 - 1e-9)), 0, n - 1); };
  auto cell_hi = [&](double v) { return std::clamp(static_cast<int>(std::floor((v + 1.0) / h + 0.5 + 1e-9)), 0, n - 1); };
  const auto verts = curve.vertices();
  const std::size_t m = verts.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Point2 a = verts[k];
    const Point2 b = verts[(k + 1) % m];
    const int i0 = cell_lo(std::min(a.x1, b.x1)), i1 = cell_hi(std::max(a.x1, b.x1));
    const int j0 = cell_lo(std::min(a.x2, b.x2)), j1 = cell_hi(std::max(a.x2, b.x2));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) cut[g.index(i, j)] = 1;
  }
  const Box bb = curve.bounds();
  const int jb0 = cell_lo(bb.x2_min), jb1 = cell_hi(bb.x2_max);
  const std::vector<Point2> poly(verts.begin(), verts.end());
  std::vector<double> xs;
  for (int j = jb0; j <= jb1; ++j) {
    const double y = g.node_coord(j);
    // Parity fill for cells no edge touches.
    xs.clear();
    for (std::size_t k = 0; k < m; ++k) {
      const Point2 a = verts[k];
      const Point2 b = verts[(k + 1) % m];
      if ((a.x2 > y) != (b.x2 > y)) xs.push_back(a.x1 + (y - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2));
    }
    std::sort(xs.begin(), xs.end());
    std::size_t p = 0;
    bool any_cut = false;
    for (int i = 0; i < n; ++i) {
      const double x = g.node_coord(i);
      while (p < xs.size() && xs[p] < x) ++p;
      if (cut[g.index(i, j)]) {
        any_cut = true;
        continue;
      }
      if (p % 2 == 1) frac[g.index(i, j)] = 1.0;
    }
    if (!any_cut) continue;
    const auto strip = clip(clip(poly, 1, y - 0.5 * h, false), 1, y + 0.5 * h, true);
    for (int i = 0; i < n; ++i) {
      if (!cut[g.index(i, j)]) continue;
      const double x = g.node_coord(i);
      const auto cell = clip(clip(strip, 0, x - 0.5 * h, false), 0, x + 0.5 * h, true);
      frac[g.index(i, j)] = std::clamp(shoelace(cell) / (h * h), 0.0, 1.0);
    }
  }
  return frac;
}

void add_component(const PatchComponent& c, double alpha, const GridField& g,
                   std::vector<double>& acc) {
  const auto outer = curve_fraction(c.outer, g);
  for (std::size_t k = 0; k < acc.size(); ++k) acc[k] += alpha * outer[k];
  for (const auto& hole : c.holes) {
    const auto f = curve_fraction(hole, g);
    for (std::size_t k = 0; k < acc.size(); ++k) acc[k] -= alpha * f[k];
  }
}

void require_open_disc(const PatchComponent& c) {
  for (const auto& v : c.outer.vertices())
    if (norm2(v) >= 1.0) throw DomainError("stream_patch: patch not contained in the open disc");
}

}  // namespace

GridField patch_indicator(const PatchSpec& patch, int n) {
  const GridField g(n);
  std::vector<double> acc(g.size(), 0.0);
  for (const auto& c : patch.components()) {
    require_open_disc(c);
    add_component(c, 1.0, g, acc);
  }
  return GridField(n, std::move(acc));
}

GridField patch_indicator(const MultiScalePatch& patch, int n) {
  const GridField g(n);
  std::vector<double> acc(g.size(), 0.0);
  for (const auto& t : patch.terms()) add_component(t.component, t.alpha, g, acc);
  return GridField(n, std::move(acc));
}

GridField stream_grid(const GridField& omega) { return DiscPoisson::get(omega.n())->solve(omega); }

GridField stream_patch(const PatchSpec& patch, int n) {
  if (patch.empty()) return GridField(n);
  return stream_grid(patch_indicator(patch, n));
}

GridField stream_patch(const MultiScalePatch& patch, int n) {
  if (patch.empty()) return GridField(n);
  return stream_grid(patch_indicator(patch, n));
}

// ---------------------------------------------------------------------------
// Closed-form boundary integral

namespace {

// Antiderivative of (1/4) ln(s^2 + d^2) - 1/4 in s.
double log_antiderivative(double s, double d) {
  const double q = s * s + d * d;
  const double slog = q > 0.0 ? s * std::log(q) : 0.0;
  return 0.25 * (slog - 2.0 * s + 2.0 * d * std::atan(s / d)) - 0.25 * s;
}

// Integral of ln|y - x| over the interior of a counter-clockwise polygon.
double log_integral(const JordanPolygon& curve, Point2 x) {
  const auto verts = curve.vertices();
  const std::size_t m = verts.size();
  double total = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const Point2 a = verts[k];
    const Point2 b = verts[(k + 1) % m];
    const double len = norm(b - a);
    if (len == 0.0) continue;
    const Point2 t = (1.0 / len) * (b - a);
    const double d = cross(a - x, t);
    if (d == 0.0) continue;
    const double sa = dot(a - x, t);
    total += d * (log_antiderivative(sa + len, d) - log_antiderivative(sa, d));
  }
  return total;
}

double component_log_integral(const PatchComponent& c, Point2 x) {
  double v = log_integral(c.outer, x);
  for (const auto& hole : c.holes) v -= log_integral(hole, x);
  return v;
}

struct ComponentMoments {
  double m0 = 0, m1 = 0, m2 = 0, m11 = 0, m12 = 0, m22 = 0;
  void add(const JordanPolygon::Moments& m, double sign) {
    m0 += sign * m.m0;
    m1 += sign * m.m1;
    m2 += sign * m.m2;
    m11 += sign * m.m11;
    m12 += sign * m.m12;
    m22 += sign * m.m22;
  }
};

// Integral of G(x, .) over one component.
double component_stream(const PatchComponent& c, Point2 x) {
  const double near = -kInvTwoPi * component_log_integral(c, x);
  const double s = norm(x);
  if (s == 0.0) return near;
  if (s < 1e-4) {
    ComponentMoments mm;
    mm.add(c.outer.moments(), 1.0);
    for (const auto& hole : c.holes) mm.add(hole.moments(), -1.0);
    const Point2 e = (1.0 / s) * x;
    const double p1 = e.x1 * mm.m1 + e.x2 * mm.m2;
    const double p2 = e.x1 * e.x1 * mm.m11 + 2.0 * e.x1 * e.x2 * mm.m12 + e.x2 * e.x2 * mm.m22;
    const double log_reflected = -s * p1 + s * s * (0.5 * (mm.m11 + mm.m22) - p2);
    return near + kInvTwoPi * log_reflected;
  }
  const Point2 xs = (1.0 / (s * s)) * x;
  double area = c.outer.area();
  for (const auto& hole : c.holes) area -= hole.area();
  return near + kInvTwoPi * (area * std::log(s) + component_log_integral(c, xs));
}

}  // namespace

double stream_boundary(const PatchSpec& patch, Point2 x) {
  require_in_disc(x, "stream_boundary");
  double v = 0.0;
  for (const auto& c : patch.components()) v += component_stream(c, x);
  if (!std::isfinite(v)) throw NumericalError("stream_boundary: non-finite result");
  return v;
}

double stream_boundary(const MultiScalePatch& patch, Point2 x) {
  require_in_disc(x, "stream_boundary");
  double v = 0.0;
  for (const auto& t : patch.terms()) v += t.alpha * component_stream(t.component, x);
  if (!std::isfinite(v)) throw NumericalError("stream_boundary: non-finite result");
  return v;
}

// ---------------------------------------------------------------------------

GridField relative_stream(const GridField& u, double omega) {
  GridField out = u;
  const int n = u.n();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (u.inside(i, j)) out.at(i, j) += 0.5 * omega * (norm2(u.node(i, j)) - 1.0);
  return out;
}

VectorField velocity(const GridField& u) {
  const int n = u.n();
  const double h = u.h();
  VectorField v{GridField(n), GridField(n)};
  auto ok = [&](int i, int j) { return i >= 0 && i < n && j >= 0 && j < n && u.inside(i, j); };
  auto diff = [&](int i, int j, int di, int dj) {
    const bool fwd = ok(i + di, j + dj);
    const bool bwd = ok(i - di, j - dj);
    if (fwd && bwd) return (u.at(i + di, j + dj) - u.at(i - di, j - dj)) / (2.0 * h);
    if (fwd) return (u.at(i + di, j + dj) - u.at(i, j)) / h;
    if (bwd) return (u.at(i, j) - u.at(i - di, j - dj)) / h;
    return 0.0;
  };
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!u.inside(i, j)) continue;
      v.v1.at(i, j) = diff(i, j, 0, 1);
      v.v2.at(i, j) = -diff(i, j, 1, 0);
    }
  return v;
}

}  // namespace discsym
