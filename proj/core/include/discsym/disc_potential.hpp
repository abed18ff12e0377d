#pragma once

#include <memory>

#include "discsym/grid_field.hpp"
#include "discsym/point.hpp"
#include "discsym/polygon.hpp"

namespace discsym {

/// Green function of -Laplace on the unit disc with zero Dirichlet data.
/// Throws SingularityError for x == y and DomainError outside the closed disc.
double green(Point2 x, Point2 y);

/// Regular part h(x, y) = -(1/2pi) ln|x/|x| - |x| y|, with h(0, y) = 0.
double green_regular(Point2 x, Point2 y);

/// Stream function of the centered disc patch of radius r.
double stream_radial(double r, Point2 x);

/// Shortley-Weller five-point Dirichlet solver on the disc mask of an n x n
/// grid. The factorization is cached per grid size.
class DiscPoisson {
 public:
  static std::shared_ptr<const DiscPoisson> get(int n);

  int n() const { return n_; }
  /// Solves -Lap u = rhs on masked nodes with u = 0 on the unit circle.
  /// Throws NumericalError if the relative residual exceeds 1e-10.
  GridField solve(const GridField& rhs) const;
  /// Shortley-Weller Laplacian (negated) applied to u at masked node (i, j).
  double apply(const GridField& u, int i, int j) const;

  struct Impl;
  explicit DiscPoisson(int n);
  ~DiscPoisson();

 private:
  int n_;
  std::unique_ptr<Impl> impl_;
};

/// Fraction of the dual cell of every node covered by the patch (exact
/// polygon-cell intersection area on boundary-cut cells).
GridField patch_indicator(const PatchSpec& patch, int n);
GridField patch_indicator(const MultiScalePatch& patch, int n);

/// G[1_D] on the n x n grid.
GridField stream_patch(const PatchSpec& patch, int n);
/// G[sum alpha_i 1_{D_i}] on the n x n grid.
GridField stream_patch(const MultiScalePatch& patch, int n);
/// G[omega] for a vorticity sampled on the grid.
GridField stream_grid(const GridField& omega);

/// Exact integral of G(x, .) over the patch, evaluated in closed form edge by
/// edge. Valid for x anywhere in the closed disc, including on the boundary.
double stream_boundary(const PatchSpec& patch, Point2 x);
double stream_boundary(const MultiScalePatch& patch, Point2 x);

/// u + omega (|x|^2 - 1) / 2, i.e. G[w - 2 omega] when u = G[w].
GridField relative_stream(const GridField& u, double omega);

/// (d2 u, -d1 u): central differences, one-sided next to the mask edge.
VectorField velocity(const GridField& u);

}  // namespace discsym
