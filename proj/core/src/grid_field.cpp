#include "discsym/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discsym/errors.hpp"

namespace discsym {

GridField::GridField(int n) : n_(n), h_(0.0) {
  if (n < kMinNodes)
    throw DomainError("GridField: need at least " + std::to_string(kMinNodes) +
                      " nodes per axis, got " + std::to_string(n));
  h_ = 2.0 / (n - 1);
  values_.assign(static_cast<std::size_t>(n) * n, 0.0);
  mask_.assign(values_.size(), 0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      // Integer test so the mask is exact: (2i-(n-1))^2 + (2j-(n-1))^2 <= (n-1)^2.
      const long long a = 2LL * i - (n - 1);
      const long long b = 2LL * j - (n - 1);
      const long long r = n - 1;
      mask_[index(i, j)] = (a * a + b * b <= r * r) ? 1 : 0;
    }
}

GridField::GridField(int n, std::vector<double> values) : GridField(n) {
  if (values.size() != values_.size())
    throw DomainError("GridField: expected " + std::to_string(values_.size()) + " values, got " +
                      std::to_string(values.size()));
  values_ = std::move(values);
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (!mask_[k]) values_[k] = 0.0;
}

bool GridField::interior(int i, int j) const {
  if (i <= 0 || j <= 0 || i >= n_ - 1 || j >= n_ - 1) return false;
  return inside(i, j) && inside(i - 1, j) && inside(i + 1, j) && inside(i, j - 1) &&
         inside(i, j + 1);
}

double GridField::interpolate(Point2 p) const {
  const double fx = (p.x1 + 1.0) / h_;
  const double fy = (p.x2 + 1.0) / h_;
  if (!(fx >= 0.0 && fy >= 0.0 && fx <= n_ - 1 && fy <= n_ - 1)) return 0.0;
  int i = std::min(static_cast<int>(fx), n_ - 2);
  int j = std::min(static_cast<int>(fy), n_ - 2);
  const double s = fx - i;
  const double t = fy - j;
  return (1 - s) * (1 - t) * at(i, j) + s * (1 - t) * at(i + 1, j) + (1 - s) * t * at(i, j + 1) +
         s * t * at(i + 1, j + 1);
}

double GridField::sup_norm() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridField::max_value() const {
  double m = -INFINITY;
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (mask_[k]) m = std::max(m, values_[k]);
  return m;
}

double GridField::min_value() const {
  double m = INFINITY;
  for (std::size_t k = 0; k < values_.size(); ++k)
    if (mask_[k]) m = std::min(m, values_[k]);
  return m;
}

double GridField::discrete_lipschitz() const {
  double m = 0.0;
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) {
      if (i + 1 < n_) m = std::max(m, std::abs(at(i + 1, j) - at(i, j)));
      if (j + 1 < n_) m = std::max(m, std::abs(at(i, j + 1) - at(i, j)));
    }
  return m / h_;
}

double GridField::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * h_ * h_;
}

double five_point_laplacian(const GridField& u, int i, int j) {
  const double h2 = u.h() * u.h();
  return (u.at(i + 1, j) + u.at(i - 1, j) + u.at(i, j + 1) + u.at(i, j - 1) - 4.0 * u.at(i, j)) /
         h2;
}

GridField rotate_field(const GridField& u, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  GridField out(u.n());
  for (int j = 0; j < u.n(); ++j)
    for (int i = 0; i < u.n(); ++i) {
      if (!out.inside(i, j)) continue;
      const Point2 x = out.node(i, j);
      // R(-angle) x
      out.at(i, j) = u.interpolate({c * x.x1 + s * x.x2, -s * x.x1 + c * x.x2});
    }
  return out;
}

namespace {
void require_same(const GridField& a, const GridField& b) {
  if (!a.same_grid(b)) throw DomainError("GridField: grid mismatch");
}
}  // namespace

GridField operator+(const GridField& a, const GridField& b) {
  require_same(a, b);
  GridField r = a;
  for (std::size_t k = 0; k < r.size(); ++k) r.values()[k] += b.values()[k];
  return r;
}

GridField operator-(const GridField& a, const GridField& b) {
  require_same(a, b);
  GridField r = a;
  for (std::size_t k = 0; k < r.size(); ++k) r.values()[k] -= b.values()[k];
  return r;
}

GridField operator*(double s, const GridField& a) {
  GridField r = a;
  for (auto& v : r.values()) v *= s;
  return r;
}

}  // namespace discsym
