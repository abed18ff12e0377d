#include "discsym/step_approximation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "discsym/errors.hpp"
#include "discsym/level_sets.hpp"

namespace discsym {

namespace {

struct Curve {
  JordanPolygon polygon;
  int level = 0;       // index into levels
  bool upper_inside;   // {omega0 > level} lies inside
};

bool artifact(const LevelCurve& c, double h) {
  for (const auto& p : c.points)
    if (norm(p) <= 1.0 - 2.0 * h) return false;
  return true;
}

std::vector<Point2> densify(std::vector<Point2> pts) {
  while (pts.size() < JordanPolygon::kMinVertices) {
    std::vector<Point2> out;
    out.reserve(2 * pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const Point2 a = pts[k];
      const Point2 b = pts[(k + 1) % pts.size()];
      out.push_back(a);
      out.push_back({0.5 * (a.x1 + b.x1), 0.5 * (a.x2 + b.x2)});
    }
    pts = std::move(out);
  }
  return pts;
}

// Curves of omega0 at level, or nullopt when the level is not regular.
std::optional<std::vector<LevelCurve>> regular_curves(const GridField& w, double level,
                                                      double threshold, double scale) {
  if (std::abs(level) <= 1e-12 * scale) return std::nullopt;
  std::vector<LevelCurve> kept;
  for (auto& c : level_curves(w, level)) {
    if (artifact(c, w.h())) continue;
    for (const auto& p : c.points)
      if (!(norm(gradient_at(w, p)) > threshold)) return std::nullopt;
    kept.push_back(std::move(c));
  }
  return kept;
}

int band_of(const std::vector<double>& levels, double v) {
  const int k = static_cast<int>(levels.size()) - 1;
  int b = static_cast<int>(std::upper_bound(levels.begin() + 1, levels.end() - 1, v) -
                           (levels.begin() + 1));
  return std::clamp(b, 0, k - 1);
}

}  // namespace

StepApproximation step_approximation(const GridField& w, int k) {
  if (k < 1) throw DomainError("step_approximation: k must be positive");
  const int n = w.n();
  double lo = INFINITY, hi = -INFINITY;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (w.inside(i, j)) {
        lo = std::min(lo, w.at(i, j));
        hi = std::max(hi, w.at(i, j));
      }
  const double scale = std::max(std::abs(lo), std::abs(hi));
  if (!(hi - lo > 1e-12 * std::max(1.0, scale)))
    throw RegularityError("step_approximation: omega0 is constant, no level is regular");

  const double width = (hi - lo) / k;
  const double threshold = regularity_threshold(w);

  StepApproximation out;
  out.k = k;
  out.levels.push_back(lo);
  std::vector<Curve> curves;
  for (int b = 1; b < k; ++b) {
    const double base = lo + b * width;
    std::optional<std::vector<LevelCurve>> found;
    double level = base;
    for (int step = 0; step <= 4 && !found; ++step)
      for (int s : {1, -1}) {
        level = base + s * step * width / 16.0;
        found = regular_curves(w, level, threshold, scale);
        if (found || step == 0) break;
      }
    if (!found) {
      std::ostringstream msg;
      msg << "step_approximation: band " << b << " of " << k << " has no regular level within "
          << width / 4.0 << " of " << base;
      throw RegularityError(msg.str());
    }
    out.levels.push_back(level);
    for (auto& c : *found) {
      const bool upper = c.signed_area() > 0.0;
      curves.push_back({JordanPolygon(densify(std::move(c.points))), b, upper});
    }
  }
  out.levels.push_back(hi);

  // Nesting tree: parent is the smallest curve containing a vertex.
  const int m = static_cast<int>(curves.size());
  std::vector<int> parent(m, -1);
  for (int a = 0; a < m; ++a) {
    double best = INFINITY;
    const Point2 p = curves[a].polygon.vertex(0);
    for (int c = 0; c < m; ++c) {
      if (c == a || curves[c].polygon.area() <= curves[a].polygon.area()) continue;
      if (curves[c].polygon.contains(p) && curves[c].polygon.area() < best) {
        best = curves[c].polygon.area();
        parent[a] = c;
      }
    }
  }

  auto alpha = [&](int band) { return 0.5 * (out.levels[band] + out.levels[band + 1]); };
  std::vector<MultiScalePatch::Term> terms;
  auto add_face = [&](const JordanPolygon& outer, int face, int band) {
    const double a = alpha(band);
    if (a == 0.0) return;
    std::vector<JordanPolygon> holes;
    for (int c = 0; c < m; ++c)
      if (parent[c] == face) holes.push_back(curves[c].polygon);
    terms.push_back({a, PatchComponent(outer, std::move(holes))});
  };

  int root_band = -1;
  for (int c = 0; c < m && root_band < 0; ++c)
    if (parent[c] == -1) root_band = curves[c].upper_inside ? curves[c].level - 1 : curves[c].level;
  if (root_band < 0) {
    double v = 0.0;
    for (int j = 0; j < n && root_band < 0; ++j)
      for (int i = 0; i < n; ++i)
        if (w.inside(i, j)) {
          v = w.at(i, j);
          root_band = band_of(out.levels, v);
          break;
        }
  }
  add_face(JordanPolygon::circle({0.0, 0.0}, 1.0, 4 * static_cast<std::size_t>(n)), -1, root_band);
  for (int c = 0; c < m; ++c)
    add_face(curves[c].polygon, c, curves[c].upper_inside ? curves[c].level : curves[c].level - 1);
  out.terms = MultiScalePatch(std::move(terms));

  out.bound = 2.0 / k * scale;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Point2 x = w.node(i, j);
      if (!w.inside(i, j) || norm2(x) >= 1.0) continue;
      out.sup_error = std::max(out.sup_error, std::abs(w.at(i, j) - out.terms.value(x)));
    }
  if (out.sup_error > out.bound) {
    std::ostringstream msg;
    msg << "step_approximation: sup error " << out.sup_error << " exceeds " << out.bound;
    throw NumericalError(msg.str());
  }
  return out;
}

GridField sample_step(const StepApproximation& s, int n) {
  return GridField::sample(n, [&](Point2 x) { return s.terms.value(x); });
}

}  // namespace discsym
