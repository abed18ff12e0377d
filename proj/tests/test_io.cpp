#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "discsym/errors.hpp"
#include "discsym/io.hpp"
#include "fixtures.hpp"
#include "json.hpp"

using namespace discsym;
using namespace fixtures;

TEST_CASE("grid field round trip is exact") {
  const GridField u = bump(33, {0.1, -0.2}, 0.5, 1.0 / 3.0);
  std::stringstream ss;
  write_grid_field(ss, u);
  const GridField v = read_grid_field(ss);
  CHECK(v.n() == u.n());
  CHECK(max_abs_diff(u, v) == 0.0);
}

TEST_CASE("grid field parse errors") {
  std::stringstream bad_header("x,y\n3,1\n");
  CHECK_THROWS_AS(read_grid_field(bad_header), ParseError);
  std::stringstream wrong_h("n,h\n5,0.3\n0,0,0,0,0\n0,0,0,0,0\n0,0,0,0,0\n0,0,0,0,0\n0,0,0,0,0\n");
  CHECK_THROWS_AS(read_grid_field(wrong_h), ParseError);
  std::stringstream short_rows("n,h\n5,0.5\n0,0,0,0,0\n0,0,0,0,0\n");
  CHECK_THROWS_AS(read_grid_field(short_rows), ParseError);
}

TEST_CASE("patch round trip") {
  std::stringstream ss;
  write_patch(ss, centered_annulus());
  const PatchInput in = read_patch(ss);
  REQUIRE(in.plain);
  CHECK(in.plain->components().size() == 1);
  CHECK(in.plain->components()[0].holes.size() == 1);
  CHECK(in.plain->area() == doctest::Approx(centered_annulus().area()).epsilon(1e-15));

  const MultiScalePatch weighted({{2.5, PatchComponent(JordanPolygon::circle({0, 0}, 0.4, 64))}});
  std::stringstream ws;
  write_patch(ws, weighted);
  const PatchInput w = read_patch(ws);
  CHECK_FALSE(w.plain);
  CHECK(w.patch.Lambda() == 2.5);
}

TEST_CASE("patch parse errors") {
  for (const char* text : {"", "vpatch 2\n", "vpatch 1\ncomponent\nouter 3\n0 0\n",
                           "vpatch 1\ncomponent\nouter 8\n0 0\n1 1\n0 1\n1 0\n0.1 0\n0.2 0\n0.3 0\n0.4 0\n",
                           "vpatch 1\nhole 8\n"}) {
    std::stringstream ss(text);
    CHECK_THROWS_AS(read_patch(ss), ParseError);
  }
}

TEST_CASE("config files") {
  std::stringstream ss("# comment\ngrid-n = 65\n\n tol=1e-3 # trailing\n");
  const auto cfg = read_config(ss);
  CHECK(cfg.at("grid-n") == "65");
  CHECK(cfg.at("tol") == "1e-3");
  std::stringstream bad("novalue\n");
  CHECK_THROWS_AS(read_config(bad), ParseError);
}

TEST_CASE("verdict json and csv outputs") {
  VerdictRecord rec;
  rec.regime = Regime::superharmonic;
  StageResult s{"energy_stationarity", "pass", {{"max_ratio", 1e-9}}, {{"note", "x"}}, {}};
  s.reports.push_back(make_osmall_report({0.125, 0.0625}, {1e-3, 2e-4}, {}));
  rec.stages.push_back(s);
  rec.verdict = Verdict::consistent_radial;
  const auto j = nlohmann::json::parse(verdict_json(rec));
  CHECK(j["regime"] == "superharmonic");
  CHECK(j["verdict"] == "consistent-radial");
  CHECK(j["stages"][0]["data"]["max_ratio"] == 1e-9);
  std::stringstream csv;
  write_osmall_csv(csv, rec);
  std::string header;
  std::getline(csv, header);
  CHECK(header == "stage,report,t,q,ratio,verdict");
  std::stringstream empty;
  write_branch_csv(empty, {});
  CHECK(empty.str() == "omega,amplitude,residual_norm\n");
  CHECK(format_number(0.1) == "0.1");
}

TEST_CASE("interval union json") {
  FlowTrace trace;
  const IntervalUnion r = flow_set(IntervalUnion({{-3, -1}, {1, 3}}), kInfiniteTime, &trace);
  const auto j = nlohmann::json::parse(flow_trace_json(trace, r));
  CHECK(j["result"][0][0] == -2.0);
  CHECK(j["result"][0][1] == 2.0);
}
