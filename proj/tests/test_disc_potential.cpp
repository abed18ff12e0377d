#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "discsym/disc_potential.hpp"
#include "discsym/errors.hpp"
#include "fixtures.hpp"

using namespace discsym;
using namespace fixtures;

TEST_CASE("green is symmetric and vanishes on the circle") {
  CHECK(green({0.3, 0}, {0, 0.4}) == doctest::Approx(green({0, 0.4}, {0.3, 0})).epsilon(1e-14));
  CHECK(std::abs(green({0.5, 0}, {1, 0})) < 1e-15);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const Point2 x{u(rng), u(rng)}, y{u(rng), u(rng)};
    worst = std::max(worst, std::abs(green(x, y) - green(y, x)));
  }
  CHECK(worst < 1e-14);
}

TEST_CASE("green matches the image-charge form") {
  for (auto [x, y] : {std::pair<Point2, Point2>{{0.1, 0.2}, {-0.3, 0.5}}, {{0.0, 0.0}, {0.4, 0.1}},
                      {{0.7, -0.2}, {0.6, -0.1}}})
    CHECK(green(x, y) == doctest::Approx(green_image(x, y)).epsilon(1e-12));
}

TEST_CASE("green rejects coincident and exterior points") {
  CHECK_THROWS_AS(green({0.2, 0.1}, {0.2, 0.1}), SingularityError);
  CHECK_THROWS_AS(green({1.2, 0}, {0.1, 0}), DomainError);
}

TEST_CASE("green_regular values") {
  CHECK(std::abs(green_regular({0, 0}, {0.7, 0})) < 1e-15);
  CHECK(green_regular({0.2, 0.1}, {-0.4, 0.3}) == doctest::Approx(green_regular({-0.4, 0.3}, {0.2, 0.1})).epsilon(1e-14));
  CHECK(green_regular({0.5, 0}, {0.5, 0}) == doctest::Approx(std::log(4.0 / 3.0) / (2 * kPi)).epsilon(1e-14));
}

TEST_CASE("stream_radial closed form") {
  CHECK(stream_radial(0.5, {0, 0}) == doctest::Approx(1.0 / 16 + std::log(2.0) / 8).epsilon(1e-14));
  CHECK(stream_radial(0.5, {0.5, 0}) == doctest::Approx(std::log(2.0) / 8).epsilon(1e-14));
  CHECK(stream_radial(0.5, {0.5 - 1e-12, 0}) == doctest::Approx(stream_radial(0.5, {0.5 + 1e-12, 0})).epsilon(1e-10));
  CHECK(std::abs(stream_radial(0.5, {1, 0})) < 1e-15);
  for (double rho : {0.0, 0.2, 0.45, 0.7, 0.95})
    CHECK(stream_radial(0.3, {rho, 0}) == doctest::Approx(disc_stream(0.3, rho)).epsilon(1e-13));
}

TEST_CASE("stream_patch of a centered disc and annulus") {
  const int n = 129;
  const GridField d = stream_patch(centered_disc(), n);
  const GridField a = stream_patch(centered_annulus(), n);
  double ed = 0.0, ea = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!d.inside(i, j)) continue;
      const double rho = norm(d.node(i, j));
      ed = std::max(ed, std::abs(d.at(i, j) - disc_stream(0.5, rho)));
      ea = std::max(ea, std::abs(a.at(i, j) - (disc_stream(0.6, rho) - disc_stream(0.3, rho))));
    }
  CHECK(ed < 2e-3);
  CHECK(ea < 2e-3);
  CHECK(stream_patch(PatchSpec(), n).sup_norm() == 0.0);
}

TEST_CASE("stream_boundary against closed form and grid solver") {
  const auto disc = PatchSpec::disc({0, 0}, 0.5, 4096);
  CHECK(stream_boundary(disc, {0.5, 0}) == doctest::Approx(std::log(2.0) / 8).epsilon(2e-6));
  CHECK(stream_boundary(disc, {0, 0.5}) == doctest::Approx(stream_boundary(disc, {0.5, 0})).epsilon(1e-10));
  const auto off = PatchSpec::disc({0.3, 0}, 0.2, 512);
  const GridField u = stream_patch(off, 257);
  CHECK(std::abs(stream_boundary(off, {0.5, 0}) - u.interpolate({0.5, 0})) < 1e-4);
}

TEST_CASE("relative_stream shifts by the rotation potential") {
  const int n = 65;
  const GridField zero(n);
  const GridField same = relative_stream(zero, 0.0);
  CHECK(same.sup_norm() == 0.0);
  const GridField q = relative_stream(zero, 1.0);
  for (int j = 0; j < n; j += 8)
    for (int i = 0; i < n; i += 8)
      if (q.inside(i, j)) CHECK(q.at(i, j) == doctest::Approx((norm2(q.node(i, j)) - 1) / 2).epsilon(1e-14));
  const int c = n / 2;
  CHECK(five_point_laplacian(q, c, c) == doctest::Approx(2.0).epsilon(1e-10));
  const GridField u = stream_patch(centered_disc(), 257);
  const GridField r = relative_stream(u, -0.3);
  CHECK(std::abs(r.at(128, 128) - (stream_radial(0.5, {0, 0}) + 0.15)) < 5e-4);
}

TEST_CASE("velocity of radial fields and rigid rotation") {
  const int n = 129;
  const GridField q = GridField::sample(n, [](Point2 x) { return (norm2(x) - 1) / 2; });
  const VectorField v = velocity(q);
  double rot = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      if (q.interior(i, j)) {
        const Point2 x = q.node(i, j);
        rot = std::max(rot, std::hypot(v.v1.at(i, j) - x.x2, v.v2.at(i, j) + x.x1));
      }
  CHECK(rot < 1e-12);
  const GridField u = stream_patch(centered_disc(), n);
  const VectorField w = velocity(u);
  double tangential = 0.0, speed = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Point2 x = u.node(i, j);
      if (!u.interior(i, j) || norm(x) > 0.45) continue;
      tangential = std::max(tangential, std::abs(w.v1.at(i, j) * x.x1 + w.v2.at(i, j) * x.x2));
      speed = std::max(speed, std::abs(std::hypot(w.v1.at(i, j), w.v2.at(i, j)) - norm(x) / 2));
    }
  CHECK(tangential < 1e-3);
  CHECK(speed < 1e-3);
}
