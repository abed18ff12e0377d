#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "discsym/csts.hpp"
#include "discsym/csts_properties.hpp"
#include "discsym/errors.hpp"
#include "discsym/interval_flow.hpp"
#include "fixtures.hpp"

using namespace discsym;
using namespace fixtures;

namespace {

void check_union(const IntervalUnion& m, std::vector<Interval> expected, double tol) {
  REQUIRE(m.size() == expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) {
    CHECK(std::abs(m.intervals()[k].a - expected[k].a) <= tol);
    CHECK(std::abs(m.intervals()[k].b - expected[k].b) <= tol);
  }
}

GridField transpose(const GridField& u) {
  GridField t(u.n());
  for (int j = 0; j < u.n(); ++j)
    for (int i = 0; i < u.n(); ++i) t.at(i, j) = u.at(j, i);
  return t;
}

}  // namespace

TEST_CASE("symmetrize_set") {
  check_union(symmetrize_set(IntervalUnion({{2, 3}})), {{-0.5, 0.5}}, 0.0);
  check_union(symmetrize_set(IntervalUnion({{-1, 0}, {2, 3}})), {{-1, 1}}, 0.0);
  CHECK(symmetrize_set(IntervalUnion()).empty());
}

TEST_CASE("flow_set translates centers exponentially") {
  check_union(flow_set(IntervalUnion({{0.5, 1.5}}), std::log(2.0)), {{0.0, 1.0}}, 1e-15);
  check_union(flow_set(IntervalUnion({{-0.7, 0.7}}), 3.0), {{-0.7, 0.7}}, 0.0);
  CHECK_THROWS_AS(flow_set(IntervalUnion({{0, 1}}), -0.1), DomainError);
}

TEST_CASE("merge event") {
  const IntervalUnion m({{-3, -1}, {1, 3}});
  check_union(flow_set(m, kInfiniteTime), {{-2, 2}}, 0.0);
  FlowTrace trace;
  check_union(flow_set(m, 1.0, &trace), {{-2, 2}}, 1e-14);
  REQUIRE(trace.event_times.size() == 1);
  CHECK(trace.event_times[0] == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  const double s = 0.5, t = 0.4;
  CHECK(hausdorff_distance(flow_set(flow_set(m, s), t), flow_set(m, s + t)) <= 1e-10);
  CHECK(hausdorff_distance(flow_set(flow_set(m, 0.2), 0.1), flow_set(m, 0.3)) <= 1e-10);
}

TEST_CASE("csts of fields: identity, fixed points and recentering") {
  const int n = 129;
  const GridField cone = GridField::sample(n, [](Point2 x) { return std::max(0.0, 0.8 - norm(x)); });
  const double spacing = cone.max_value() / CstsEngine::kDefaultLevels;
  CHECK(max_abs_diff(csts_field(cone, 0.0), cone) == 0.0);
  for (double t : {0.1, 1.0, kInfiniteTime}) CHECK(max_abs_diff(csts_field(cone, t), cone) <= 2 * spacing);
  const GridField shifted = bump(n, {0.3, 0.05}, 0.4);
  const GridField sym = steiner_field(shifted);
  double asym = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) asym = std::max(asym, std::abs(sym.at(i, j) - sym.at(n - 1 - i, j)));
  CHECK(asym <= 1e-12);
  CHECK_THROWS_AS(csts_field(-1.0 * cone, 0.5), DomainError);
}

TEST_CASE("csts preserves row level measures") {
  const int n = 129;
  const GridField u = bump(n, {0.3, 0.05}, 0.4);
  const CstsEngine e(u);
  const auto before = row_functions(u);
  const auto after = e.rows(0.7);
  double worst = 0.0;
  for (double c : {0.1, 0.4, 0.8})
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(before[j].measure_above(c) - after[j].measure_above(c)));
  CHECK(worst <= u.h());
}

TEST_CASE("sup bound L R t") {
  const int n = 129;
  const GridField u = bump(n, {-0.2, 0.1}, 0.5);
  const double L = u.discrete_lipschitz(), R = 0.2 * std::sqrt(1.25) + 0.5;
  for (double t : {0.01, 0.05, 0.2})
    CHECK(max_abs_diff(csts_field(u, t), u) <= L * R * t + 2 * u.max_value() / CstsEngine::kDefaultLevels);
}

TEST_CASE("rotated symmetrization") {
  const int n = 65;
  const GridField u = bump(n, {0.05, 0.3}, 0.4);
  CHECK(max_abs_diff(csts_field_rotated(u, 0.0, 0.3), csts_field(u, 0.3)) == 0.0);
  CHECK(max_abs_diff(csts_field_rotated(u, kPi / 2, 0.3), transpose(csts_field(transpose(u), 0.3))) <= 1e-12);
  const GridField cone = GridField::sample(n, [](Point2 x) { return std::max(0.0, 0.8 - norm(x)); });
  CHECK(max_abs_diff(csts_field_rotated(cone, 0.4, 0.5), cone) <= 2 * cone.h());
}

TEST_CASE("dirichlet energy") {
  CHECK(dirichlet_energy(GridField(65)) == 0.0);
  const GridField q = GridField::sample(257, [](Point2 x) { return (1 - norm2(x)) / 4; });
  CHECK(dirichlet_energy(q) == doctest::Approx(kPi / 8).epsilon(2e-2));
  const GridField u = bump(129, {0.3, 0.0}, 0.4);
  const double e0 = semi_discrete_energy(row_functions(u), u.h());
  const CstsEngine engine(u);
  double prev = e0;
  for (double t : {0.1, 0.3, 1.0, 3.0}) {
    const double e = semi_discrete_energy(engine.rows(t), u.h());
    CHECK(e <= prev + 1e-10);
    prev = e;
  }
}

TEST_CASE("Hardy-Littlewood") {
  const int n = 129;
  const GridField u = bump(n, {0.3, 0.0}, 0.4);
  const auto [sym, plain] = hardy_littlewood_check(u, u, 0.5);
  CHECK(sym == doctest::Approx(plain).epsilon(1e-6));
  const GridField v = bump(n, {0.0, 0.0}, 0.4);
  const auto [s2, p2] = hardy_littlewood_check(u, v, 0.5);
  CHECK(s2 >= p2);
  const GridField w = bump(n, {0.0, 0.0}, 0.6);
  const auto [s3, p3] = hardy_littlewood_check(v, w, 0.5);
  CHECK(s3 == doctest::Approx(p3).epsilon(1e-6));
}

TEST_CASE("small randomized property sweep") {
  const auto sets = interval_properties(5, 50);
  for (const auto& r : sets) CHECK_MESSAGE(r.pass, r.name << " worst " << r.worst);
  const auto fields = field_properties(5, 4, 65);
  for (const auto& r : fields) CHECK_MESSAGE(r.pass, r.name << " worst " << r.worst);
}
