#pragma once

#include <vector>

#include "discsym/grid_field.hpp"
#include "discsym/point.hpp"

namespace discsym {

/// Closed level curve of a grid field, oriented with {f > level} on its left.
/// Vertices are edge crossings of the bilinear interpolant's cell edges.
struct LevelCurve {
  std::vector<Point2> points;
  /// Signed shoelace area: positive for outer boundaries of {f > level}.
  double signed_area() const;
};

/// Marching squares over the whole grid (values are zero outside the disc),
/// with saddle cells resolved by the cell-centre average. Throws
/// RegularityError for level == 0, where the zero extension is critical.
std::vector<LevelCurve> level_curves(const GridField& f, double level);

/// Gradient of f at p: central differences at the nodes, bilinearly
/// interpolated.
Point2 gradient_at(const GridField& f, Point2 p);

/// Largest second difference (xx, yy, mixed) over nodes whose 3 x 3 stencil
/// lies in the disc.
double second_derivative_bound(const GridField& f);

/// 2 h second_derivative_bound(f): where |grad f| exceeds this, the gradient
/// has no zero within one cell diagonal.
double regularity_threshold(const GridField& f);

}  // namespace discsym
