#include "discsym/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "discsym/errors.hpp"

namespace discsym {

namespace {

constexpr double kOnEdge = 1e-14;

int orientation(Point2 a, Point2 b, Point2 c) {
  const double v = cross(b - a, c - a);
  return (v > 0) - (v < 0);
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
  return std::min(a.x1, b.x1) <= p.x1 && p.x1 <= std::max(a.x1, b.x1) &&
         std::min(a.x2, b.x2) <= p.x2 && p.x2 <= std::max(a.x2, b.x2);
}

// Closed-segment intersection, including touching and collinear overlap.
bool segments_meet(Point2 a, Point2 b, Point2 c, Point2 d) {
  const int o1 = orientation(a, b, c);
  const int o2 = orientation(a, b, d);
  const int o3 = orientation(c, d, a);
  const int o4 = orientation(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

double segment_distance(Point2 a, Point2 b, Point2 p) {
  const Point2 ab = b - a;
  const double len2 = norm2(ab);
  double s = len2 > 0 ? dot(p - a, ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return norm(p - (a + s * ab));
}

struct Segment {
  Point2 a, b;
  int curve;
  std::size_t index;
};

// Uniform bucket grid over segments; calls visit(s, t) for candidate pairs
// that share a bucket. Pairs may be reported more than once.
template <class Visit>
bool any_bucket_pair(const std::vector<Segment>& segs, Visit&& visit) {
  if (segs.size() < 2) return false;
  double x0 = INFINITY, y0 = INFINITY, x1 = -INFINITY, y1 = -INFINITY;
  for (const auto& s : segs) {
    x0 = std::min({x0, s.a.x1, s.b.x1});
    x1 = std::max({x1, s.a.x1, s.b.x1});
    y0 = std::min({y0, s.a.x2, s.b.x2});
    y1 = std::max({y1, s.a.x2, s.b.x2});
  }
  const int dim = std::clamp(static_cast<int>(std::sqrt(static_cast<double>(segs.size()))), 1, 512);
  const double wx = std::max(x1 - x0, 1e-12) / dim;
  const double wy = std::max(y1 - y0, 1e-12) / dim;
  std::vector<std::vector<std::size_t>> cells(static_cast<std::size_t>(dim) * dim);
  auto cell_of = [&](double v, double lo, double w) {
    return std::clamp(static_cast<int>((v - lo) / w), 0, dim - 1);
  };
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const auto& s = segs[k];
    const int i0 = cell_of(std::min(s.a.x1, s.b.x1), x0, wx);
    const int i1 = cell_of(std::max(s.a.x1, s.b.x1), x0, wx);
    const int j0 = cell_of(std::min(s.a.x2, s.b.x2), y0, wy);
    const int j1 = cell_of(std::max(s.a.x2, s.b.x2), y0, wy);
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) cells[static_cast<std::size_t>(j) * dim + i].push_back(k);
  }
  for (const auto& cell : cells)
    for (std::size_t p = 0; p < cell.size(); ++p)
      for (std::size_t q = p + 1; q < cell.size(); ++q)
        if (visit(segs[cell[p]], segs[cell[q]])) return true;
  return false;
}

std::vector<Point2> clip_half_plane(const std::vector<Point2>& poly, int axis, double bound,
                                    bool keep_below) {
  std::vector<Point2> out;
  if (poly.empty()) return out;
  out.reserve(poly.size() + 4);
  auto coord = [axis](Point2 p) { return axis == 0 ? p.x1 : p.x2; };
  auto inside = [&](Point2 p) { return keep_below ? coord(p) <= bound : coord(p) >= bound; };
  Point2 prev = poly.back();
  bool prev_in = inside(prev);
  for (Point2 cur : poly) {
    const bool cur_in = inside(cur);
    if (cur_in != prev_in) {
      const double s = (bound - coord(prev)) / (coord(cur) - coord(prev));
      Point2 q = prev + s * (cur - prev);
      if (axis == 0) q.x1 = bound; else q.x2 = bound;
      out.push_back(q);
    }
    if (cur_in) out.push_back(cur);
    prev = cur;
    prev_in = cur_in;
  }
  return out;
}

double shoelace(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t k = 0; k < poly.size(); ++k) a += cross(poly[k], poly[(k + 1) % poly.size()]);
  return 0.5 * a;
}

}  // namespace

JordanPolygon::JordanPolygon(std::vector<Point2> vertices, bool) : vertices_(std::move(vertices)) {
  finish();
}

JordanPolygon::JordanPolygon(std::vector<Point2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < kMinVertices)
    throw GeometryError("JordanPolygon: need at least " + std::to_string(kMinVertices) +
                        " vertices, got " + std::to_string(vertices_.size()));
  for (const auto& v : vertices_) {
    if (!std::isfinite(v.x1) || !std::isfinite(v.x2))
      throw GeometryError("JordanPolygon: non-finite vertex");
    if (norm2(v) > 1.0 + 1e-12) throw GeometryError("JordanPolygon: vertex outside the closed disc");
  }
  for (std::size_t k = 0; k < vertices_.size(); ++k)
    if (vertices_[k] == vertices_[(k + 1) % vertices_.size()])
      throw GeometryError("JordanPolygon: repeated vertex " + std::to_string(k));
  if (shoelace(vertices_) < 0) std::reverse(vertices_.begin(), vertices_.end());
  finish();
  if (area_ <= 0) throw GeometryError("JordanPolygon: degenerate (zero area)");

  const std::size_t n = vertices_.size();
  std::vector<Segment> segs;
  segs.reserve(n);
  for (std::size_t k = 0; k < n; ++k) segs.push_back({vertices_[k], vertex(k + 1), 0, k});
  const bool crossing = any_bucket_pair(segs, [n](const Segment& s, const Segment& t) {
    const std::size_t d = s.index > t.index ? s.index - t.index : t.index - s.index;
    if (d == 1 || d == n - 1) {
      // Adjacent edges share one vertex; they must not fold back onto each other.
      const Point2 shared = (s.index + 1) % n == t.index ? s.b : s.a;
      const Point2 p = shared == s.a ? s.b : s.a;
      const Point2 q = shared == t.a ? t.b : t.a;
      return orientation(shared, p, q) == 0 && dot(p - shared, q - shared) > 0;
    }
    return segments_meet(s.a, s.b, t.a, t.b);
  });
  if (crossing) throw GeometryError("JordanPolygon: curve is not simple");
}

void JordanPolygon::finish() {
  const std::size_t n = vertices_.size();
  area_ = shoelace(vertices_);
  arclength_.assign(n + 1, 0.0);
  bounds_ = {INFINITY, INFINITY, -INFINITY, -INFINITY};
  for (std::size_t k = 0; k < n; ++k) {
    arclength_[k + 1] = arclength_[k] + norm(vertex(k + 1) - vertices_[k]);
    bounds_.x1_min = std::min(bounds_.x1_min, vertices_[k].x1);
    bounds_.x1_max = std::max(bounds_.x1_max, vertices_[k].x1);
    bounds_.x2_min = std::min(bounds_.x2_min, vertices_[k].x2);
    bounds_.x2_max = std::max(bounds_.x2_max, vertices_[k].x2);
  }
}

JordanPolygon JordanPolygon::circle(Point2 center, double radius, std::size_t count) {
  std::vector<Point2> v(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(count);
    v[k] = {center.x1 + radius * std::cos(a), center.x2 + radius * std::sin(a)};
  }
  return JordanPolygon(std::move(v));
}

JordanPolygon JordanPolygon::ellipse(Point2 center, double semi_a, double semi_b,
                                     std::size_t count, double tilt) {
  std::vector<Point2> v(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double a = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(count);
    v[k] = center + rotate({semi_a * std::cos(a), semi_b * std::sin(a)}, tilt);
  }
  return JordanPolygon(std::move(v));
}

int JordanPolygon::winding_number(Point2 p) const {
  int wn = 0;
  const std::size_t n = vertices_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point2 a = vertices_[k];
    const Point2 b = vertex(k + 1);
    if (a.x2 <= p.x2) {
      if (b.x2 > p.x2 && cross(b - a, p - a) > 0) ++wn;
    } else if (b.x2 <= p.x2 && cross(b - a, p - a) < 0) {
      --wn;
    }
  }
  return wn;
}

bool JordanPolygon::crossing_parity(Point2 p) const {
  bool in = false;
  const std::size_t n = vertices_.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Point2 a = vertices_[k];
    const Point2 b = vertex(k + 1);
    if ((a.x2 > p.x2) != (b.x2 > p.x2)) {
      const double x = a.x1 + (p.x2 - a.x2) * (b.x1 - a.x1) / (b.x2 - a.x2);
      if (p.x1 < x) in = !in;
    }
  }
  return in;
}

bool JordanPolygon::contains(Point2 p) const {
  if (p.x1 < bounds_.x1_min || p.x1 > bounds_.x1_max || p.x2 < bounds_.x2_min ||
      p.x2 > bounds_.x2_max)
    return false;
  if (winding_number(p) == 0) return false;
  return distance_to_boundary(p) > kOnEdge;
}

double JordanPolygon::distance_to_boundary(Point2 p) const {
  double d = INFINITY;
  for (std::size_t k = 0; k < vertices_.size(); ++k)
    d = std::min(d, segment_distance(vertices_[k], vertex(k + 1), p));
  return d;
}

Point2 JordanPolygon::at_arclength(double s) const {
  const double total = perimeter();
  s = std::fmod(s, total);
  if (s < 0) s += total;
  const auto it = std::upper_bound(arclength_.begin(), arclength_.end(), s);
  const std::size_t k = std::min<std::size_t>(it - arclength_.begin() - 1, vertices_.size() - 1);
  const double len = arclength_[k + 1] - arclength_[k];
  const double f = len > 0 ? (s - arclength_[k]) / len : 0.0;
  return vertices_[k] + f * (vertex(k + 1) - vertices_[k]);
}

std::vector<Point2> JordanPolygon::samples(int samples_per_edge) const {
  std::vector<Point2> out;
  out.reserve(vertices_.size() * static_cast<std::size_t>(std::max(samples_per_edge, 1)));
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    const Point2 a = vertices_[k];
    const Point2 b = vertex(k + 1);
    for (int s = 0; s < samples_per_edge; ++s)
      out.push_back(a + (static_cast<double>(s) / samples_per_edge) * (b - a));
  }
  return out;
}

double JordanPolygon::clipped_area(const Box& box) const {
  if (box.x1_max <= bounds_.x1_min || box.x1_min >= bounds_.x1_max ||
      box.x2_max <= bounds_.x2_min || box.x2_min >= bounds_.x2_max)
    return 0.0;
  std::vector<Point2> poly(vertices_.begin(), vertices_.end());
  poly = clip_half_plane(poly, 1, box.x2_min, false);
  poly = clip_half_plane(poly, 1, box.x2_max, true);
  poly = clip_half_plane(poly, 0, box.x1_min, false);
  poly = clip_half_plane(poly, 0, box.x1_max, true);
  return std::max(0.0, shoelace(poly));
}

JordanPolygon::Moments JordanPolygon::moments() const {
  Moments m{0, 0, 0, 0, 0, 0};
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    const Point2 a = vertices_[k];
    const Point2 b = vertex(k + 1);
    const double c = cross(a, b);
    m.m0 += c / 2.0;
    m.m1 += (a.x1 + b.x1) * c / 6.0;
    m.m2 += (a.x2 + b.x2) * c / 6.0;
    m.m11 += (a.x1 * a.x1 + a.x1 * b.x1 + b.x1 * b.x1) * c / 12.0;
    m.m22 += (a.x2 * a.x2 + a.x2 * b.x2 + b.x2 * b.x2) * c / 12.0;
    m.m12 += (a.x1 * b.x2 + 2 * a.x1 * a.x2 + 2 * b.x1 * b.x2 + b.x1 * a.x2) * c / 24.0;
  }
  return m;
}

JordanPolygon JordanPolygon::rotated(double angle) const {
  std::vector<Point2> v(vertices_.size());
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = rotate(vertices_[k], angle);
  return JordanPolygon(std::move(v), true);
}

JordanPolygon JordanPolygon::refined() const {
  std::vector<Point2> v;
  v.reserve(2 * vertices_.size());
  for (std::size_t k = 0; k < vertices_.size(); ++k) {
    v.push_back(vertices_[k]);
    v.push_back(0.5 * (vertices_[k] + vertex(k + 1)));
  }
  return JordanPolygon(std::move(v), true);
}

bool JordanPolygon::edges_meet(const JordanPolygon& other) const {
  const Box a = bounds_;
  const Box b = other.bounds_;
  if (a.x1_max < b.x1_min || b.x1_max < a.x1_min || a.x2_max < b.x2_min || b.x2_max < a.x2_min)
    return false;
  std::vector<Segment> segs;
  segs.reserve(size() + other.size());
  for (std::size_t k = 0; k < size(); ++k) segs.push_back({vertices_[k], vertex(k + 1), 0, k});
  for (std::size_t k = 0; k < other.size(); ++k)
    segs.push_back({other.vertices_[k], other.vertex(k + 1), 1, k});
  return any_bucket_pair(segs, [](const Segment& s, const Segment& t) {
    return s.curve != t.curve && segments_meet(s.a, s.b, t.a, t.b);
  });
}

// ---------------------------------------------------------------------------

namespace {
// For disjoint simple curves, nesting is decided by any single vertex.
bool curve_inside(const JordanPolygon& inner, const JordanPolygon& outer) {
  return outer.winding_number(inner.vertex(0)) != 0;
}
}  // namespace

PatchComponent::PatchComponent(JordanPolygon outer_curve, std::vector<JordanPolygon> hole_curves)
    : outer(std::move(outer_curve)), holes(std::move(hole_curves)) {
  for (std::size_t k = 0; k < holes.size(); ++k) {
    if (holes[k].edges_meet(outer) || !curve_inside(holes[k], outer))
      throw GeometryError("PatchComponent: hole " + std::to_string(k) +
                          " is not strictly inside the outer curve");
    for (std::size_t l = 0; l < k; ++l)
      if (holes[k].edges_meet(holes[l]) || curve_inside(holes[k], holes[l]) ||
          curve_inside(holes[l], holes[k]))
        throw GeometryError("PatchComponent: holes " + std::to_string(l) + " and " +
                            std::to_string(k) + " overlap");
  }
}

bool PatchComponent::contains(Point2 p) const {
  if (!outer.contains(p)) return false;
  for (const auto& hole : holes) {
    if (hole.winding_number(p) != 0) return false;
    if (hole.distance_to_boundary(p) <= kOnEdge) return false;
  }
  return true;
}

double PatchComponent::area() const {
  double a = outer.area();
  for (const auto& hole : holes) a -= hole.area();
  return a;
}

std::vector<const JordanPolygon*> PatchComponent::curves() const {
  std::vector<const JordanPolygon*> out{&outer};
  for (const auto& hole : holes) out.push_back(&hole);
  return out;
}

PatchSpec::PatchSpec(std::vector<PatchComponent> components) : components_(std::move(components)) {
  for (std::size_t k = 0; k < components_.size(); ++k) {
    for (const auto& v : components_[k].outer.vertices())
      if (norm2(v) >= 1.0)
        throw GeometryError("PatchSpec: component " + std::to_string(k) +
                            " is not contained in the open disc");
    for (std::size_t l = 0; l < k; ++l) {
      const auto& a = components_[k];
      const auto& b = components_[l];
      for (const auto* ca : a.curves())
        for (const auto* cb : b.curves())
          if (ca->edges_meet(*cb))
            throw GeometryError("PatchSpec: components " + std::to_string(l) + " and " +
                                std::to_string(k) + " touch");
      // Nested components must sit inside a hole of the other.
      auto nested_ok = [](const PatchComponent& in, const PatchComponent& out) {
        if (!curve_inside(in.outer, out.outer)) return true;
        for (const auto& hole : out.holes)
          if (curve_inside(in.outer, hole)) return true;
        return false;
      };
      if (!nested_ok(a, b) || !nested_ok(b, a))
        throw GeometryError("PatchSpec: components " + std::to_string(l) + " and " +
                            std::to_string(k) + " overlap");
    }
  }
}

double PatchSpec::area() const {
  double a = 0.0;
  for (const auto& c : components_) a += c.area();
  return a;
}

std::size_t PatchSpec::curve_count() const {
  std::size_t n = 0;
  for (const auto& c : components_) n += 1 + c.holes.size();
  return n;
}

std::vector<const JordanPolygon*> PatchSpec::curves() const {
  std::vector<const JordanPolygon*> out;
  for (const auto& c : components_)
    for (const auto* p : c.curves()) out.push_back(p);
  return out;
}

PatchSpec PatchSpec::rotated(double angle) const {
  std::vector<PatchComponent> comps;
  for (const auto& c : components_) {
    std::vector<JordanPolygon> holes;
    for (const auto& h : c.holes) holes.push_back(h.rotated(angle));
    comps.emplace_back(c.outer.rotated(angle), std::move(holes));
  }
  PatchSpec out;
  out.components_ = std::move(comps);
  return out;
}

PatchSpec PatchSpec::refined() const {
  std::vector<PatchComponent> comps;
  for (const auto& c : components_) {
    std::vector<JordanPolygon> holes;
    for (const auto& h : c.holes) holes.push_back(h.refined());
    comps.emplace_back(c.outer.refined(), std::move(holes));
  }
  PatchSpec out;
  out.components_ = std::move(comps);
  return out;
}

PatchSpec PatchSpec::disc(Point2 center, double radius, std::size_t count) {
  return PatchSpec({PatchComponent(JordanPolygon::circle(center, radius, count))});
}

PatchSpec PatchSpec::annulus(Point2 center, double inner, double outer, std::size_t count) {
  return PatchSpec({PatchComponent(JordanPolygon::circle(center, outer, count),
                                   {JordanPolygon::circle(center, inner, count)})});
}

bool contains(const PatchSpec& patch, Point2 x) {
  for (const auto& c : patch.components())
    if (c.contains(x)) return true;
  return false;
}

MultiScalePatch::MultiScalePatch(std::vector<Term> terms) : terms_(std::move(terms)) {
  for (std::size_t k = 0; k < terms_.size(); ++k)
    if (terms_[k].alpha == 0.0 || !std::isfinite(terms_[k].alpha))
      throw DomainError("MultiScalePatch: weight " + std::to_string(k) + " must be finite and nonzero");
}

MultiScalePatch MultiScalePatch::from_patch(const PatchSpec& patch) {
  std::vector<Term> terms;
  for (const auto& c : patch.components()) terms.push_back({1.0, c});
  return MultiScalePatch(std::move(terms));
}

double MultiScalePatch::lambda() const {
  double m = INFINITY;
  for (const auto& t : terms_) m = std::min(m, t.alpha);
  return m;
}

double MultiScalePatch::Lambda() const {
  double m = -INFINITY;
  for (const auto& t : terms_) m = std::max(m, t.alpha);
  return m;
}

double MultiScalePatch::value(Point2 x) const {
  double v = 0.0;
  for (const auto& t : terms_)
    if (t.component.contains(x)) v += t.alpha;
  return v;
}

}  // namespace discsym
