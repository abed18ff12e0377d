#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "discsym/disc_potential.hpp"
#include "discsym/io.hpp"
#include "fixtures.hpp"

using namespace discsym;
using namespace fixtures;
namespace fs = std::filesystem;

namespace {

fs::path workdir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("discsym_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(DISCSYM_CLI) + " " + args + " > " + (workdir() / "stdout.txt").string() +
                          " 2> " + (workdir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string path(const std::string& name) { return (workdir() / name).string(); }

std::string slurp(const std::string& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::string patch_file(const std::string& name, const PatchSpec& p) {
  std::ofstream f(path(name));
  write_patch(f, p);
  return path(name);
}

std::string field_file(const std::string& name, const GridField& u) {
  std::ofstream f(path(name));
  write_grid_field(f, u);
  return path(name);
}

GridField load(const std::string& p) {
  std::ifstream f(p);
  return read_grid_field(f);
}

std::vector<std::vector<double>> csv_rows(const std::string& p) {
  std::ifstream f(p);
  std::string line;
  std::getline(f, line);
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) row.push_back(cell == "inf" ? INFINITY : std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("stream") {
  const auto disc = patch_file("disc.vp", centered_disc());
  REQUIRE(run("stream --patch " + disc + " --out " + path("s")) == 0);
  const GridField u = load(path("s/stream.csv"));
  CHECK(u.n() == 257);
  CHECK(std::abs(u.at(128, 128) - disc_stream(0.5, 0.0)) <= 5e-4);
  CHECK(slurp(path("s/stream.csv")) == slurp(path("s/relative_stream.csv")));

  REQUIRE(run("stream --patch " + disc + " --omega -0.3 --grid-n 65 --out " + path("s2")) == 0);
  const GridField r = load(path("s2/relative_stream.csv"));
  CHECK(r.at(32, 32) - load(path("s2/stream.csv")).at(32, 32) == doctest::Approx(0.15));

  std::ofstream(path("bad.vp")) << "vpatch 1\ncomponent\nouter 3\n0 0\n";
  CHECK(run("stream --patch " + path("bad.vp") + " --out " + path("s3")) == 2);
  CHECK(run("stream --patch " + path("missing.vp")) == 2);
  CHECK(run("stream --patch " + disc + " --grid-n 64") == 2);
}

TEST_CASE("verify exit codes") {
  const auto ann = patch_file("annulus.vp", centered_annulus());
  CHECK(run("verify --patch " + ann + " --omega -1 --grid-n 129 --out " + path("v0")) == 0);
  CHECK(fs::exists(path("v0/verdict.json")));
  CHECK(fs::exists(path("v0/osmall.csv")));
  CHECK(slurp(path("stdout.txt")).find("consistent-radial") != std::string::npos);
  const auto ell = patch_file("ellipse.vp", tilted_ellipse());
  CHECK(run("verify --patch " + ell + " --omega 0 --grid-n 129 --out " + path("v1")) == 4);
  CHECK(run("verify --patch " + ann + " --omega 0.3 --grid-n 129 --out " + path("v2")) == 5);
  CHECK(run("verify --out " + path("v3")) == 2);
  const auto bumpfile = field_file("nonradial.csv", nonradial_bump(129));
  CHECK(run("verify --field " + bumpfile + " --omega 0.7 --out " + path("v4")) == 4);
}

TEST_CASE("csts") {
  const auto radial = field_file("cone.csv", GridField::sample(65, [](Point2 x) { return std::max(0.0, 0.8 - norm(x)); }));
  REQUIRE(run("csts --field " + radial + " --t 0,0.25,1,inf --out " + path("c0")) == 0);
  const auto e0 = csv_rows(path("c0/energy.csv"));
  REQUIRE(e0.size() == 4);
  for (const auto& row : e0) CHECK(row[1] == doctest::Approx(e0[0][1]).epsilon(1e-6));
  CHECK(fs::exists(path("c0/csts_3.csv")));

  const auto shifted = field_file("shifted.csv", bump(65, {0.3, 0.1}, 0.4));
  REQUIRE(run("csts --field " + shifted + " --t 0,0.1,0.5,2 --trace 40,0.5 --out " + path("c1")) == 0);
  const auto e1 = csv_rows(path("c1/energy.csv"));
  for (std::size_t k = 1; k < e1.size(); ++k) CHECK(e1[k][1] <= e1[k - 1][1] + 1e-10);
  CHECK(slurp(path("c1/trace.json")).find("\"result\"") != std::string::npos);

  CHECK(run("csts --field " + shifted + " --out " + path("c2")) == 2);
  CHECK(run("csts --field " + shifted + " --t -1 --out " + path("c2")) == 2);
}

TEST_CASE("symmetry") {
  const auto radial = field_file("radial.csv", radial_bump(65));
  CHECK(run("symmetry --field " + radial + " --decompose --out " + path("y0")) == 0);
  const auto sheared = field_file("sheared.csv", GridField::sample(65, [](Point2 x) {
    return std::exp(-(x.x1 + x.x2) * (x.x1 + x.x2) - 4 * x.x2 * x.x2) * std::max(0.0, 1 - norm2(x) / 0.81);
  }));
  CHECK(run("symmetry --field " + sheared + " --tol 1e-3 --out " + path("y1")) == 4);
  CHECK(run("symmetry --field " + sheared + " --tol 1e-3 --decompose --out " + path("y2")) == 3);
}

TEST_CASE("vstate") {
  REQUIRE(run("vstate --b 0.5 --m 3 --out " + path("b0")) == 0);
  const auto rows = csv_rows(path("b0/branch.csv"));
  CHECK(rows.size() >= 10);
  for (const auto& r : rows) {
    CHECK(r[0] > 0.0);
    CHECK(r[0] < 0.5);
  }
  CHECK(fs::exists(path("b0/branch.gp")));
  REQUIRE(run("vstate --b 0.5 --m 3 --omega-min 0.6 --omega-max 1.0 --out " + path("b1")) == 0);
  CHECK(csv_rows(path("b1/branch.csv")).empty());
  CHECK(run("vstate --b 1.0 --out " + path("b2")) == 2);
  CHECK(run("vstate --b 1.5 --out " + path("b2")) == 2);
}

TEST_CASE("config files") {
  const auto disc = patch_file("disc.vp", centered_disc());
  std::ofstream(path("good.cfg")) << "# overrides\ngrid-n = 33\nomega = -1\n";
  REQUIRE(run("stream --patch " + disc + " --grid-n 65 --config " + path("good.cfg") + " --out " + path("k0")) == 0);
  CHECK(load(path("k0/stream.csv")).n() == 33);
  std::ofstream(path("bad.cfg")) << "colour = blue\n";
  CHECK(run("stream --patch " + disc + " --config " + path("bad.cfg") + " --out " + path("k1")) == 2);
  std::ofstream(path("neg.cfg")) << "tol = -1\n";
  CHECK(run("stream --patch " + disc + " --config " + path("neg.cfg") + " --out " + path("k1")) == 2);
}

TEST_CASE("repeated runs are byte-identical") {
  const auto disc = patch_file("off.vp", off_center_disc());
  REQUIRE(run("stream --patch " + disc + " --grid-n 65 --omega 0.2 --out " + path("d0")) == 0);
  REQUIRE(run("stream --patch " + disc + " --grid-n 65 --omega 0.2 --out " + path("d1")) == 0);
  CHECK(slurp(path("d0/stream.csv")) == slurp(path("d1/stream.csv")));
  CHECK(slurp(path("d0/relative_stream.csv")) == slurp(path("d1/relative_stream.csv")));
  REQUIRE(run("props --seed 9 --set-cases 20 --field-cases 2 --grid-n 33 --out " + path("p0")) == 0);
  REQUIRE(run("props --seed 9 --set-cases 20 --field-cases 2 --grid-n 33 --out " + path("p1")) == 0);
  CHECK(slurp(path("p0/props.csv")) == slurp(path("p1/props.csv")));
}
