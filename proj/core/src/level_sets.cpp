#include "discsym/level_sets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>

#include "discsym/errors.hpp"

namespace discsym {

double LevelCurve::signed_area() const {
  double a = 0.0;
  for (std::size_t k = 0; k < points.size(); ++k)
    a += cross(points[k], points[(k + 1) % points.size()]);
  return 0.5 * a;
}

std::vector<LevelCurve> level_curves(const GridField& f, double level) {
  if (level == 0.0) throw RegularityError("level_curves: level 0 is critical for the zero extension");
  const int n = f.n();
  auto hid = [n](int i, int j) { return 2 * (j * n + i); };
  auto vid = [n](int i, int j) { return 2 * (j * n + i) + 1; };
  const std::size_t ids = 2 * static_cast<std::size_t>(n) * n;
  std::vector<int> next(ids, -1);
  std::vector<Point2> point(ids);
  auto above = [&](int i, int j) { return f.at(i, j) > level; };
  // Interpolated from the node above the level, so mirrored fields give
  // mirrored crossings.
  auto crossing = [&](int i0, int j0, int i1, int j1) {
    if (!above(i0, j0)) {
      std::swap(i0, i1);
      std::swap(j0, j1);
    }
    const double a = f.at(i0, j0);
    const double b = f.at(i1, j1);
    const double s = (level - a) / (b - a);
    const Point2 p = f.node(i0, j0);
    const Point2 q = f.node(i1, j1);
    return p + s * (q - p);
  };

  for (int j = 0; j + 1 < n; ++j)
    for (int i = 0; i + 1 < n; ++i) {
      // Corners and edges in counter-clockwise order.
      const std::array<std::array<int, 2>, 4> c{{{i, j}, {i + 1, j}, {i + 1, j + 1}, {i, j + 1}}};
      const std::array<int, 4> edge{hid(i, j), vid(i + 1, j), hid(i, j + 1), vid(i, j)};
      std::array<bool, 4> in;
      for (int k = 0; k < 4; ++k) in[k] = above(c[k][0], c[k][1]);
      std::array<int, 4> exits{}, entries{};
      int n_exit = 0, n_entry = 0;
      std::array<int, 4> order{};
      int n_cross = 0;
      for (int k = 0; k < 4; ++k) {
        const int l = (k + 1) % 4;
        if (in[k] == in[l]) continue;
        point[edge[k]] = crossing(c[k][0], c[k][1], c[l][0], c[l][1]);
        order[n_cross++] = k;
        if (in[k]) exits[n_exit++] = k;
        else entries[n_entry++] = k;
      }
      if (n_cross == 2) {
        next[edge[exits[0]]] = edge[entries[0]];
      } else if (n_cross == 4) {
        const double centre = 0.25 * (f.at(i, j) + f.at(i + 1, j) + f.at(i + 1, j + 1) + f.at(i, j + 1));
        const bool centre_in = centre > level;
        for (int p = 0; p < 4; ++p) {
          const int k = order[p];
          if (!in[k]) continue;
          const int partner = centre_in ? order[(p + 1) % 4] : order[(p + 3) % 4];
          next[edge[k]] = edge[partner];
        }
      }
    }

  std::vector<LevelCurve> curves;
  std::vector<unsigned char> seen(ids, 0);
  for (std::size_t start = 0; start < ids; ++start) {
    if (next[start] < 0 || seen[start]) continue;
    LevelCurve curve;
    int id = static_cast<int>(start);
    while (!seen[id]) {
      seen[id] = 1;
      const Point2 p = point[id];
      if (curve.points.empty() || !(curve.points.back() == p)) curve.points.push_back(p);
      id = next[id];
      if (id < 0) throw NumericalError("level_curves: open contour");
    }
    while (curve.points.size() > 1 && curve.points.front() == curve.points.back())
      curve.points.pop_back();
    if (curve.points.size() >= 3) curves.push_back(std::move(curve));
  }
  return curves;
}

Point2 gradient_at(const GridField& f, Point2 p) {
  const int n = f.n();
  const double h = f.h();
  auto d = [&](int i, int j, int axis) {
    const int di = axis == 0 ? 1 : 0;
    const int dj = axis == 1 ? 1 : 0;
    const int i0 = std::max(i - di, 0), i1 = std::min(i + di, n - 1);
    const int j0 = std::max(j - dj, 0), j1 = std::min(j + dj, n - 1);
    const double span = (axis == 0 ? i1 - i0 : j1 - j0) * h;
    return (f.at(i1, j1) - f.at(i0, j0)) / span;
  };
  const double gx = (p.x1 + 1.0) / h;
  const double gy = (p.x2 + 1.0) / h;
  const int i = std::clamp(static_cast<int>(std::floor(gx)), 0, n - 2);
  const int j = std::clamp(static_cast<int>(std::floor(gy)), 0, n - 2);
  const double s = std::clamp(gx - i, 0.0, 1.0);
  const double t = std::clamp(gy - j, 0.0, 1.0);
  Point2 g;
  for (int axis = 0; axis < 2; ++axis) {
    const double v = (1 - s) * (1 - t) * d(i, j, axis) + s * (1 - t) * d(i + 1, j, axis) +
                     (1 - s) * t * d(i, j + 1, axis) + s * t * d(i + 1, j + 1, axis);
    (axis == 0 ? g.x1 : g.x2) = v;
  }
  return g;
}

double second_derivative_bound(const GridField& f) {
  const int n = f.n();
  const double h2 = f.h() * f.h();
  double m = 0.0;
  for (int j = 1; j + 1 < n; ++j)
    for (int i = 1; i + 1 < n; ++i) {
      if (!f.interior(i, j) || !f.inside(i - 1, j - 1) || !f.inside(i + 1, j - 1) ||
          !f.inside(i - 1, j + 1) || !f.inside(i + 1, j + 1))
        continue;
      const double xx = f.at(i + 1, j) - 2 * f.at(i, j) + f.at(i - 1, j);
      const double yy = f.at(i, j + 1) - 2 * f.at(i, j) + f.at(i, j - 1);
      const double xy =
          0.25 * (f.at(i + 1, j + 1) - f.at(i - 1, j + 1) - f.at(i + 1, j - 1) + f.at(i - 1, j - 1));
      m = std::max({m, std::abs(xx), std::abs(yy), std::abs(xy)});
    }
  return m / h2;
}

double regularity_threshold(const GridField& f) { return 2.0 * f.h() * second_derivative_bound(f); }

}  // namespace discsym
