#include "discsym/patch_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "discsym/disc_potential.hpp"
#include "discsym/errors.hpp"
#include "discsym/level_sets.hpp"
#include "discsym/parallel.hpp"

namespace discsym {

namespace {

template <class Eval>
CurveResidual curve_residual(const std::vector<Point2>& pts, Eval&& eval) {
  std::vector<double> vals(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) { vals[k] = eval(pts[k]); });
  CurveResidual r;
  r.samples = vals.size();
  if (vals.empty()) return r;
  double sum = 0.0;
  for (double v : vals) sum += v;
  r.mean = sum / static_cast<double>(vals.size());
  for (double v : vals) r.deviation = std::max(r.deviation, std::abs(v - r.mean));
  return r;
}

void finish(ResidualReport& rep) {
  for (const auto& c : rep.curves) rep.max_deviation = std::max(rep.max_deviation, c.deviation);
}

}  // namespace

ResidualReport rotating_residual(const PatchSpec& patch, double omega, int samples_per_edge) {
  if (samples_per_edge < 1) throw DomainError("rotating_residual: samples_per_edge must be >= 1");
  ResidualReport rep;
  for (const auto* curve : patch.curves())
    rep.curves.push_back(curve_residual(curve->samples(samples_per_edge), [&](Point2 x) {
      return stream_boundary(patch, x) + 0.5 * omega * norm2(x);
    }));
  finish(rep);
  return rep;
}

ResidualReport rotating_residual(const MultiScalePatch& patch, double omega, int samples_per_edge) {
  if (samples_per_edge < 1) throw DomainError("rotating_residual: samples_per_edge must be >= 1");
  ResidualReport rep;
  for (const auto& term : patch.terms())
    for (const auto* curve : term.component.curves())
      rep.curves.push_back(curve_residual(curve->samples(samples_per_edge), [&](Point2 x) {
        return stream_boundary(patch, x) + 0.5 * omega * norm2(x);
      }));
  finish(rep);
  return rep;
}

ResidualReport smooth_residual(const GridField& omega0, double omega, double level) {
  double lo = INFINITY, hi = -INFINITY;
  for (int j = 0; j < omega0.n(); ++j)
    for (int i = 0; i < omega0.n(); ++i)
      if (omega0.inside(i, j)) {
        lo = std::min(lo, omega0.at(i, j));
        hi = std::max(hi, omega0.at(i, j));
      }
  if (!(level > lo && level < hi)) {
    std::ostringstream msg;
    msg << "smooth_residual: level " << level << " lies outside the open range (" << lo << ", " << hi
        << ") of omega0";
    throw RegularityError(msg.str());
  }
  const auto curves = level_curves(omega0, level);
  if (curves.empty()) throw RegularityError("smooth_residual: level set is empty");
  const double threshold = regularity_threshold(omega0);
  for (const auto& c : curves)
    for (const auto& p : c.points) {
      const double g = norm(gradient_at(omega0, p));
      if (!(g > threshold)) {
        std::ostringstream msg;
        msg << "smooth_residual: level " << level << " is not regular near (" << p.x1 << ", "
            << p.x2 << "): |grad| = " << g << " <= " << threshold;
        throw RegularityError(msg.str());
      }
    }
  const GridField u = stream_grid(omega0);
  ResidualReport rep;
  for (const auto& c : curves)
    rep.curves.push_back(curve_residual(
        c.points, [&](Point2 x) { return u.interpolate(x) + 0.5 * omega * norm2(x); }));
  finish(rep);
  return rep;
}

namespace {

std::vector<Point2> vertices_and_midpoints(const JordanPolygon& c) {
  std::vector<Point2> pts;
  pts.reserve(2 * c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    pts.push_back(c.vertex(k));
    pts.push_back(0.5 * (c.vertex(k) + c.vertex(k + 1)));
  }
  return pts;
}

}  // namespace

double radiality_measure(const PatchSpec& patch) {
  double worst = 0.0;
  for (const auto* curve : patch.curves()) {
    const auto pts = vertices_and_midpoints(*curve);
    double mean = 0.0;
    for (const auto& p : pts) mean += norm(p);
    mean /= static_cast<double>(pts.size());
    for (const auto& p : pts) worst = std::max(worst, std::abs(norm(p) - mean));
  }
  return worst;
}

std::string to_string(PatchClass c) {
  switch (c) {
    case PatchClass::disc: return "disc";
    case PatchClass::annulus: return "annulus";
    case PatchClass::union_of_radial: return "union-of-radial";
    case PatchClass::non_radial: return "non-radial";
  }
  return "non-radial";
}

PatchClass classify(const PatchSpec& patch) {
  if (patch.empty()) return PatchClass::non_radial;
  double sagitta = 0.0;
  for (const auto* curve : patch.curves()) {
    double rho = 0.0;
    for (const auto& v : curve->vertices()) rho += norm(v);
    rho /= static_cast<double>(curve->size());
    for (std::size_t k = 0; k < curve->size(); ++k) {
      const double len = norm(curve->vertex(k + 1) - curve->vertex(k));
      if (rho > 0) sagitta = std::max(sagitta, len * len / (8.0 * rho));
    }
  }
  const bool radial = radiality_measure(patch) <= 1e-4 + 1.5 * sagitta;
  if (!radial) return PatchClass::non_radial;
  const auto comps = patch.components();
  if (comps.size() == 1 && comps[0].holes.empty()) return PatchClass::disc;
  if (comps.size() == 1 && comps[0].holes.size() == 1) return PatchClass::annulus;
  if (comps.size() > 1) return PatchClass::union_of_radial;
  return PatchClass::non_radial;
}

}  // namespace discsym
