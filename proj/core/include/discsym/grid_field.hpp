#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "discsym/point.hpp"

namespace discsym {

/// Scalar field sampled on the n x n Cartesian grid covering [-1, 1]^2.
///
/// Node (i, j) sits at x1 = node_coord(i), x2 = node_coord(j); storage is
/// row-major with j as the row index. The mask marks nodes of the closed unit
/// disc, and values outside the mask are always zero.
class GridField {
 public:
  static constexpr int kMinNodes = 33;

  /// Zero field; throws DomainError for n < kMinNodes.
  explicit GridField(int n);

  /// Field with the given row-major values; masked-out entries are zeroed.
  GridField(int n, std::vector<double> values);

  /// Samples f at every masked node.
  template <class F>
  static GridField sample(int n, F&& f) {
    GridField g(n);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (g.inside(i, j)) g.at(i, j) = f(g.node(i, j));
    return g;
  }

  int n() const { return n_; }
  double h() const { return h_; }
  std::size_t size() const { return values_.size(); }

  /// Grid coordinate of index k; exactly antisymmetric under k -> n-1-k.
  double node_coord(int k) const { return static_cast<double>(2 * k - (n_ - 1)) / (n_ - 1); }
  Point2 node(int i, int j) const { return {node_coord(i), node_coord(j)}; }

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n_ + i; }
  bool inside(int i, int j) const { return mask_[index(i, j)] != 0; }
  /// Masked node whose four axis neighbours are masked as well.
  bool interior(int i, int j) const;

  double& at(int i, int j) { return values_[index(i, j)]; }
  double at(int i, int j) const { return values_[index(i, j)]; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::span<const double> row(int j) const {
    return std::span<const double>(values_).subspan(index(0, j), n_);
  }

  /// Bilinear interpolation; points outside [-1, 1]^2 read as zero.
  double interpolate(Point2 p) const;

  /// Max of |value|.
  double sup_norm() const;
  double max_value() const;
  double min_value() const;

  /// Largest axis-neighbour difference quotient over all node pairs.
  double discrete_lipschitz() const;

  /// h^2 * sum of values (node quadrature).
  double integral() const;

  std::optional<double> lipschitz_bound;

  bool same_grid(const GridField& other) const { return n_ == other.n_; }

 private:
  int n_;
  double h_;
  std::vector<double> values_;
  std::vector<unsigned char> mask_;
};

struct VectorField {
  GridField v1;
  GridField v2;
};

/// Five-point Laplacian at an interior node (see GridField::interior).
double five_point_laplacian(const GridField& u, int i, int j);

/// Rotates the field by `angle` about the origin: result(x) = u(R(-angle) x),
/// with bilinear resampling.
GridField rotate_field(const GridField& u, double angle);

GridField operator+(const GridField& a, const GridField& b);
GridField operator-(const GridField& a, const GridField& b);
GridField operator*(double s, const GridField& a);

}  // namespace discsym
