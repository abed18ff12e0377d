#pragma once

#include <cmath>

namespace discsym {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;

  friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x1 + b.x1, a.x2 + b.x2}; }
  friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x1 - b.x1, a.x2 - b.x2}; }
  friend constexpr Point2 operator*(double s, Point2 a) { return {s * a.x1, s * a.x2}; }
  friend constexpr bool operator==(Point2 a, Point2 b) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x1 * b.x1 + a.x2 * b.x2; }
constexpr double cross(Point2 a, Point2 b) { return a.x1 * b.x2 - a.x2 * b.x1; }
constexpr double norm2(Point2 a) { return dot(a, a); }
inline double norm(Point2 a) { return std::hypot(a.x1, a.x2); }

/// Counter-clockwise rotation about the origin.
inline Point2 rotate(Point2 p, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return {c * p.x1 - s * p.x2, s * p.x1 + c * p.x2};
}

inline constexpr double kPi = 3.14159265358979323846;

}  // namespace discsym
