#pragma once

#include <string>
#include <vector>

#include "discsym/grid_field.hpp"
#include "discsym/polygon.hpp"

namespace discsym {

struct CurveResidual {
  double mean = 0.0;       ///< C_i, the mean of the boundary functional
  double deviation = 0.0;  ///< max |value - mean|
  std::size_t samples = 0;
};

struct ResidualReport {
  std::vector<CurveResidual> curves;
  double max_deviation = 0.0;
};

/// G[1_D] + (omega/2)|x|^2 sampled along every boundary curve, in the order
/// of PatchSpec::curves(). samples_per_edge = 1 samples the vertices.
ResidualReport rotating_residual(const PatchSpec& patch, double omega, int samples_per_edge);
ResidualReport rotating_residual(const MultiScalePatch& patch, double omega, int samples_per_edge);

/// G[omega0] + (omega/2)|x|^2 along every component of {omega0 = level}.
/// Throws RegularityError when the gradient on the curves falls below
/// regularity_threshold(omega0), or when the level is not strictly between
/// the extreme values of omega0 on the disc.
ResidualReport smooth_residual(const GridField& omega0, double omega, double level);

/// Largest | |x| - mean radius of the curve | over vertices and edge midpoints.
double radiality_measure(const PatchSpec& patch);

enum class PatchClass { disc, annulus, union_of_radial, non_radial };
std::string to_string(PatchClass c);

/// Radial when radiality_measure is within 1e-4 plus the chord sagitta of the
/// polygonal discretization.
PatchClass classify(const PatchSpec& patch);

}  // namespace discsym
