#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "discsym/disc_potential.hpp"
#include "discsym/errors.hpp"
#include "discsym/level_sets.hpp"
#include "discsym/rigidity_harness.hpp"
#include "discsym/step_approximation.hpp"
#include "fixtures.hpp"

using namespace discsym;
using namespace fixtures;

namespace {

Point2 box_center(const Box& b) { return {0.5 * (b.x1_min + b.x1_max), 0.5 * (b.x2_min + b.x2_max)}; }

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("regime classification") {
  CHECK(RotatingPatchProblem::from_patch(centered_disc(), -0.3).regime() == Regime::superharmonic);
  CHECK(RotatingPatchProblem::from_patch(centered_disc(), 0.0).regime() == Regime::superharmonic);
  CHECK(RotatingPatchProblem::from_patch(centered_disc(), 0.5).regime() == Regime::subharmonic);
  CHECK(RotatingPatchProblem::from_patch(centered_disc(), 0.25).regime() == Regime::window);
  const MultiScalePatch two({{2.0, PatchComponent(JordanPolygon::circle({0, 0}, 0.5, 128))},
                             {-1.0, PatchComponent(JordanPolygon::circle({0, 0}, 0.2, 128))}});
  const auto p = RotatingPatchProblem::from_multiscale(two, -0.5);
  CHECK(p.regime() == Regime::superharmonic);
  CHECK(RotatingPatchProblem::from_multiscale(two, -0.4).regime() == Regime::window);
  CHECK(RotatingPatchProblem::from_multiscale(two, 1.0).regime() == Regime::subharmonic);
  const GridField w = radial_bump(65);
  CHECK(RotatingSmoothProblem{w, -0.1}.regime() == Regime::superharmonic);
  CHECK(RotatingSmoothProblem{w, 0.6}.regime() == Regime::subharmonic);
  CHECK(RotatingSmoothProblem{w, 0.2}.regime() == Regime::window);
}

TEST_CASE("working field in both regimes") {
  const int n = 129, c = n / 2;
  const auto sup = build_relative_stream(RotatingPatchProblem::from_patch(centered_disc(), -0.3), n);
  CHECK(sup.sign == 1);
  CHECK(sup.field.at(c, c) > 0.0);
  CHECK(-five_point_laplacian(sup.field, c, c) == doctest::Approx(1.6).epsilon(1e-8));
  const auto sub = build_relative_stream(RotatingPatchProblem::from_patch(centered_disc(), 0.7), n);
  CHECK(sub.sign == -1);
  CHECK(-five_point_laplacian(sub.field, c, c) == doctest::Approx(0.4).epsilon(1e-8));
  const int i = c + static_cast<int>(0.75 / sub.field.h());
  CHECK(-five_point_laplacian(sub.field, i, c) == doctest::Approx(1.4).epsilon(1e-8));
  const auto zero = build_relative_stream(RotatingPatchProblem::from_patch(centered_disc(), 0.0), n);
  CHECK(max_abs_diff(zero.field, stream_patch(centered_disc(), n)) <= 1e-14);
}

TEST_CASE("energy stationarity") {
  const auto tg = dyadic_t_grid();
  const auto disc = RotatingPatchProblem::from_patch(centered_disc(), 0.0);
  const auto fixed = energy_stationarity(disc, 129, 0.3, tg);
  CHECK(fixed.verdict == OSmallVerdict::o_small);
  CHECK(max_abs(fixed.q) <= fixed.fixed_point_floor);

  const auto ellipse = RotatingPatchProblem::from_patch(tilted_ellipse(), 0.0);
  const auto theta = energy_stationarity(ellipse, 257, 0.0, tg);
  CHECK(theta.verdict == OSmallVerdict::theta);
  for (double r : theta.ratio) CHECK(r >= 1e-5);

  const auto off = RotatingPatchProblem::from_patch(off_center_disc(), -0.5);
  CHECK(energy_stationarity(off, 257, kPi / 2, tg).verdict == OSmallVerdict::o_small);
}

TEST_CASE("first o(t) lemma") {
  const int n = 257;
  const auto tg = dyadic_t_grid();
  const auto centered = lemma_key1_check(truncated_cone(n, {0, 0}), 1.0, tg);
  CHECK(max_abs(centered.q) == 0.0);
  const auto shifted = lemma_key1_check(truncated_cone(n, {0.2, 0}), 1.0, tg);
  CHECK(shifted.verdict == OSmallVerdict::o_small);
  for (std::size_t k = 3; k < shifted.ratio.size(); ++k) CHECK(shifted.ratio[k] <= 0.7 * shifted.ratio[k - 3]);
  CHECK_THROWS_AS(lemma_key1_check(truncated_cone(n, {0.2, 0}), 1.5, tg), PreconditionError);
}

TEST_CASE("second o(t) lemma") {
  const int n = 257;
  const auto tg = dyadic_t_grid();
  const GridField radial = stream_patch(centered_disc(), n);
  const double c0 = 0.5 * radial.max_value();
  const auto circles = level_curves(radial, c0);
  REQUIRE(circles.size() == 1);
  const auto flat = lemma_key2_check(radial, JordanPolygon(circles[0].points), c0, tg);
  CHECK(max_abs(flat.q) <= 1e-12);

  const GridField u = stream_patch(PatchSpec::disc({0.3, 0}, 0.2, 256), n);
  const double c = 0.3 * u.max_value();
  const auto curves = level_curves(u, c);
  REQUIRE(curves.size() == 1);
  const auto r = lemma_key2_check(u, JordanPolygon(curves[0].points), c, tg);
  CHECK(r.verdict == OSmallVerdict::o_small);
  for (std::size_t k = 3; k < r.ratio.size(); ++k) CHECK(std::abs(r.ratio[k]) <= 0.7 * std::abs(r.ratio[k - 3]));

  const GridField flat_field = GridField::sample(65, [](Point2) { return 1.0; });
  CHECK_THROWS_AS(lemma_key2_check(flat_field, JordanPolygon::circle({0, 0}, 0.5, 64), 1.0, tg), RegularityError);
}

TEST_CASE("patch pipeline verdicts") {
  RigidityConfig cfg;
  cfg.n = 129;
  const auto ann = verify_patch_rigidity(RotatingPatchProblem::from_patch(centered_annulus(), 2.0), cfg);
  CHECK(ann.verdict == Verdict::consistent_radial);
  CHECK(ann.regime == Regime::subharmonic);
  const auto ell = verify_patch_rigidity(RotatingPatchProblem::from_patch(tilted_ellipse(), 0.0), cfg);
  CHECK(ell.verdict == Verdict::inconsistent);
  CHECK_FALSE(ell.failed_stage.empty());
  const auto win = verify_patch_rigidity(RotatingPatchProblem::from_patch(centered_disc(), 0.25), cfg);
  CHECK(win.verdict == Verdict::window_untested);
}

TEST_CASE("smooth pipeline verdicts") {
  RigidityConfig cfg;
  const int n = 129;
  const GridField radial = radial_bump(n);
  CHECK(verify_smooth_rigidity({radial, radial.min_value() / 2 - 0.1}, cfg).verdict == Verdict::consistent_radial);
  const GridField nonradial = nonradial_bump(n);
  CHECK(verify_smooth_rigidity({nonradial, nonradial.max_value()}, cfg).verdict == Verdict::inconsistent);
}

TEST_CASE("step approximation") {
  const int n = 129;
  const GridField radial = radial_bump(n);
  const auto s = step_approximation(radial, 8);
  CHECK(s.terms.terms().size() == 8);
  CHECK(s.sup_error <= 2.0 / 8 * radial.sup_norm());
  for (const auto& t : s.terms.terms()) CHECK(norm(box_center(t.component.outer.bounds())) <= 2 * radial.h());
  CHECK_THROWS_AS(step_approximation(GridField::sample(n, [](Point2) { return 1.0; }), 4), RegularityError);
  const GridField two = bump(n, {0.4, 0}, 0.3) + bump(n, {-0.4, 0}, 0.3);
  const auto s2 = step_approximation(two, 4);
  int left = 0, right = 0;
  for (const auto& t : s2.terms.terms()) {
    const Box b = t.component.outer.bounds();
    if (b.x1_max - b.x1_min > 1.5) continue;
    const double x = box_center(b).x1;
    (x < 0 ? left : right)++;
  }
  CHECK(left > 0);
  CHECK(right > 0);
  CHECK(s2.sup_error <= 2.0 / 4 * two.sup_norm());
}

TEST_CASE("split decomposition of the energy increment") {
  const int n = 129;
  const auto annulus = centered_annulus();
  const GridField cone = truncated_cone(n, {0.2, 0});
  CHECK(split_decomposition_integral(cone, annulus, 0.0) == 0.0);
  CHECK(split_decomposition_integral(cone, annulus, 0.1) <= 1e-10);
  const GridField radial = stream_patch(centered_disc(), n);
  CHECK(split_decomposition_integral(radial, centered_disc(), 0.1) <= 1e-6);
}
