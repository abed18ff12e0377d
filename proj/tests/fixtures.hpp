#pragma once

#include <algorithm>
#include <cmath>

#include "discsym/grid_field.hpp"
#include "discsym/polygon.hpp"

namespace fixtures {

using discsym::GridField;
using discsym::JordanPolygon;
using discsym::PatchComponent;
using discsym::PatchSpec;
using discsym::Point2;

using discsym::kPi;

// Stream function of the centered disc of radius r, written out directly.
inline double disc_stream(double r, double rho) {
  if (rho <= r) return (r * r - rho * rho) / 4.0 - 0.5 * r * r * std::log(r);
  return -0.5 * r * r * std::log(rho);
}

// Dirichlet Green function of the unit disc from the image-charge form.
inline double green_image(Point2 x, Point2 y) {
  const double nx = std::hypot(x.x1, x.x2);
  const double d = std::hypot(x.x1 - y.x1, x.x2 - y.x2);
  if (nx == 0.0) return -std::log(d) / (2.0 * kPi);
  const double i1 = x.x1 / nx - nx * y.x1, i2 = x.x2 / nx - nx * y.x2;
  return std::log(std::hypot(i1, i2) / d) / (2.0 * kPi);
}

inline PatchSpec centered_disc(double r = 0.5) { return PatchSpec::disc({0.0, 0.0}, r, 256); }
inline PatchSpec centered_annulus() { return PatchSpec::annulus({0.0, 0.0}, 0.3, 0.6, 256); }
inline PatchSpec tilted_ellipse() {
  return PatchSpec({PatchComponent(JordanPolygon::ellipse({0.0, 0.0}, 0.35, 0.25, 256, kPi / 6))});
}
inline PatchSpec off_center_disc() { return PatchSpec::disc({0.25, 0.0}, 0.2, 256); }

// Cone of slope 1/0.45 about z with a unit plateau for |x - z| <= 0.3.
inline GridField truncated_cone(int n, Point2 z) {
  return GridField::sample(n, [z](Point2 x) {
    return std::clamp((0.75 - std::hypot(x.x1 - z.x1, x.x2 - z.x2)) / 0.45, 0.0, 1.0);
  });
}

inline GridField radial_bump(int n) {
  return GridField::sample(n, [](Point2 x) {
    const double s = 1.0 - (x.x1 * x.x1 + x.x2 * x.x2) / 0.49;
    return s > 0.0 ? s * s * s : 0.0;
  });
}

inline GridField nonradial_bump(int n) {
  return GridField::sample(n, [](Point2 x) {
    const double a = (x.x1 - 0.2) / 0.5, b = (x.x2 - 0.1) / 0.35;
    const double s = 1.0 - a * a - b * b;
    return s > 0.0 ? s * s * s : 0.0;
  });
}

// Quartic bump of radius rho about c.
inline GridField bump(int n, Point2 c, double rho, double amp = 1.0) {
  return GridField::sample(n, [=](Point2 x) {
    const double d2 = ((x.x1 - c.x1) * (x.x1 - c.x1) + (x.x2 - c.x2) * (x.x2 - c.x2)) / (rho * rho);
    return d2 < 1.0 ? amp * (1.0 - d2) * (1.0 - d2) : 0.0;
  });
}

inline double max_abs_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

}  // namespace fixtures
