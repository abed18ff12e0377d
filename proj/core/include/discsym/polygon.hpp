#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "discsym/point.hpp"

namespace discsym {

struct Box {
  double x1_min, x2_min, x1_max, x2_max;
};

/// Simple closed polygon, stored counter-clockwise, inside the closed unit
/// disc. Used for every Jordan curve of a patch boundary.
class JordanPolygon {
 public:
  static constexpr std::size_t kMinVertices = 8;

  /// Reorients clockwise input. Throws GeometryError if fewer than
  /// kMinVertices vertices, self-intersecting, or leaving the closed disc.
  explicit JordanPolygon(std::vector<Point2> vertices);

  /// Regular polygon with vertices on the circle |x - center| = radius.
  static JordanPolygon circle(Point2 center, double radius, std::size_t count);
  static JordanPolygon ellipse(Point2 center, double semi_a, double semi_b, std::size_t count,
                               double tilt = 0.0);

  std::span<const Point2> vertices() const { return vertices_; }
  std::size_t size() const { return vertices_.size(); }
  Point2 vertex(std::size_t k) const { return vertices_[k % vertices_.size()]; }

  double area() const { return area_; }
  double perimeter() const { return arclength_.back(); }
  Box bounds() const { return bounds_; }

  /// Winding number of the curve around p (p not on the curve).
  int winding_number(Point2 p) const;
  /// Even-odd crossing parity; agrees with winding_number != 0 for simple curves.
  bool crossing_parity(Point2 p) const;
  /// Strict interior; points within 1e-14 of an edge count as outside.
  bool contains(Point2 p) const;
  double distance_to_boundary(Point2 p) const;

  /// Point at arc length s (mod perimeter) from vertex 0.
  Point2 at_arclength(double s) const;
  /// samples_per_edge points per edge, starting at each vertex.
  std::vector<Point2> samples(int samples_per_edge) const;

  /// Area of the polygon interior intersected with an axis-aligned box.
  double clipped_area(const Box& box) const;

  /// Integrals of 1, y1, y2, y1^2, y1 y2, y2^2 over the interior.
  struct Moments {
    double m0, m1, m2, m11, m12, m22;
  };
  Moments moments() const;

  JordanPolygon rotated(double angle) const;
  /// Inserts the midpoint of every edge.
  JordanPolygon refined() const;

  /// True when an edge of this polygon touches or crosses an edge of other.
  bool edges_meet(const JordanPolygon& other) const;

 private:
  JordanPolygon(std::vector<Point2> vertices, bool);
  void finish();

  std::vector<Point2> vertices_;
  std::vector<double> arclength_;
  double area_ = 0.0;
  Box bounds_{};
};

/// Connected patch component: outer curve with zero or more holes.
struct PatchComponent {
  JordanPolygon outer;
  std::vector<JordanPolygon> holes;

  /// Validates that the holes are disjoint and strictly inside outer.
  PatchComponent(JordanPolygon outer, std::vector<JordanPolygon> holes = {});

  bool contains(Point2 p) const;
  double area() const;
  /// Outer curve followed by the holes.
  std::vector<const JordanPolygon*> curves() const;
};

/// Finite union of components with pairwise disjoint closures, strictly
/// inside the open unit disc.
class PatchSpec {
 public:
  PatchSpec() = default;
  explicit PatchSpec(std::vector<PatchComponent> components);

  std::span<const PatchComponent> components() const { return components_; }
  bool empty() const { return components_.empty(); }
  double area() const;
  std::size_t curve_count() const;
  std::vector<const JordanPolygon*> curves() const;

  PatchSpec rotated(double angle) const;
  PatchSpec refined() const;

  static PatchSpec disc(Point2 center, double radius, std::size_t count);
  static PatchSpec annulus(Point2 center, double inner, double outer, std::size_t count);

 private:
  std::vector<PatchComponent> components_;
};

bool contains(const PatchSpec& patch, Point2 x);

/// Piecewise-constant vorticity sum_i alpha_i 1_{D_i}.
class MultiScalePatch {
 public:
  struct Term {
    double alpha;
    PatchComponent component;
  };

  MultiScalePatch() = default;
  explicit MultiScalePatch(std::vector<Term> terms);
  /// Unit weights on every component of a plain patch.
  static MultiScalePatch from_patch(const PatchSpec& patch);

  std::span<const Term> terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  /// min / max of the weights.
  double lambda() const;
  double Lambda() const;
  /// Vorticity value at x (0 outside every support).
  double value(Point2 x) const;

 private:
  std::vector<Term> terms_;
};

}  // namespace discsym
