#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "discsym/errors.hpp"
#include "discsym/patch_geometry.hpp"
#include "fixtures.hpp"

using namespace discsym;
using namespace fixtures;

TEST_CASE("patch membership") {
  const auto disc = centered_disc();
  CHECK(contains(disc, {0, 0}));
  CHECK_FALSE(contains(disc, {0.9, 0}));
  CHECK_FALSE(contains(centered_annulus(), {0.1, 0}));
  CHECK(contains(centered_annulus(), {0.45, 0}));
}

TEST_CASE("polygon validation") {
  std::vector<Point2> bow{{-0.5, -0.5}, {0.5, 0.5}, {0.5, -0.5}, {-0.5, 0.5},
                          {-0.4, 0.6},  {-0.3, 0.6}, {-0.2, 0.6}, {-0.1, 0.6}};
  CHECK_THROWS_AS(static_cast<void>(JordanPolygon(bow)), GeometryError);
  CHECK_THROWS_AS(JordanPolygon::circle({0.5, 0}, 0.6, 64), GeometryError);
  CHECK_THROWS_AS(PatchSpec({PatchComponent(JordanPolygon::circle({0, 0}, 0.3, 64)),
                             PatchComponent(JordanPolygon::circle({0.1, 0}, 0.3, 64))}),
                  GeometryError);
}

TEST_CASE("centered disc rotates at every angular velocity") {
  for (double omega : {-1.0, 0.0, 0.25, 0.5, 2.0})
    CHECK(rotating_residual(centered_disc(), omega, 1).max_deviation <= 1e-6);
}

TEST_CASE("centered annulus: flat on both curves with distinct constants") {
  const auto r = rotating_residual(centered_annulus(), 0.0, 1);
  REQUIRE(r.curves.size() == 2);
  CHECK(r.max_deviation <= 1e-6);
  CHECK(r.curves[0].mean == doctest::Approx(disc_stream(0.6, 0.6) - disc_stream(0.3, 0.6)).epsilon(1e-3));
  CHECK(r.curves[1].mean == doctest::Approx(disc_stream(0.6, 0.3) - disc_stream(0.3, 0.3)).epsilon(1e-3));
  CHECK(std::abs(r.curves[0].mean - r.curves[1].mean) > 1e-2);
}

TEST_CASE("off-center disc is not a stationary patch") {
  CHECK(rotating_residual(PatchSpec::disc({0.3, 0}, 0.2, 256), 0.0, 2).max_deviation > 1e-3);
}

TEST_CASE("residual is invariant under rotation about the origin") {
  const auto p = tilted_ellipse();
  const auto a = rotating_residual(p, 0.3, 2);
  const auto b = rotating_residual(p.rotated(0.7), 0.3, 2);
  CHECK(std::abs(a.max_deviation - b.max_deviation) < 1e-10);
  CHECK(std::abs(a.curves[0].mean - b.curves[0].mean) < 1e-10);
}

TEST_CASE("smooth residual") {
  const int n = 257;
  const GridField radial = radial_bump(n);
  for (double omega : {-0.5, 0.0, 1.0})
    CHECK(smooth_residual(radial, omega, 0.5 * radial.max_value()).max_deviation <= 1e-4);
  const GridField shifted = bump(n, {0.3, 0.1}, 0.4);
  CHECK(smooth_residual(shifted, 0.0, 0.5 * shifted.max_value()).max_deviation > 1e-3);
  const GridField flat = GridField::sample(n, [](Point2) { return 1.0; });
  CHECK_THROWS_AS(smooth_residual(flat, 0.0, 0.5), RegularityError);
}

TEST_CASE("radiality and classification") {
  CHECK(radiality_measure(centered_annulus()) < 1e-4);
  CHECK(radiality_measure(centered_disc()) < 1e-4);
  const PatchSpec ellipse({PatchComponent(JordanPolygon::ellipse({0, 0}, 0.3, 0.2, 256))});
  CHECK(radiality_measure(ellipse) >= 0.05);
  CHECK(classify(centered_disc()) == PatchClass::disc);
  CHECK(classify(centered_annulus()) == PatchClass::annulus);
  const PatchSpec two({PatchComponent(JordanPolygon::circle({0, 0}, 0.6, 256),
                                      {JordanPolygon::circle({0, 0}, 0.5, 256)}),
                       PatchComponent(JordanPolygon::circle({0, 0}, 0.3, 256),
                                      {JordanPolygon::circle({0, 0}, 0.1, 256)})});
  CHECK(classify(two) == PatchClass::union_of_radial);
  CHECK(classify(ellipse) == PatchClass::non_radial);
  CHECK(classify(off_center_disc()) == PatchClass::non_radial);
}
