#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "discsym/csts_properties.hpp"
#include "discsym/disc_potential.hpp"
#include "discsym/interval_flow.hpp"
#include "discsym/io.hpp"
#include "discsym/level_sets.hpp"
#include "discsym/patch_geometry.hpp"
#include "discsym/rigidity_harness.hpp"
#include "discsym/step_approximation.hpp"
#include "discsym/vstate_solver.hpp"
#include "fixtures.hpp"

using namespace discsym;
using namespace fixtures;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void criterion(int id, const char* name, double limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = secs <= limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("[%s] %d. %s: %s; %.1f s (limit %.0f s)\n", pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs,
              limit_s);
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Every ratio at least 30% below the one three dyadic steps earlier.
double worst_decay(const OSmallReport& r) {
  double worst = 0.0;
  for (std::size_t k = 3; k < r.ratio.size(); ++k)
    worst = std::max(worst, std::abs(r.ratio[k]) / std::abs(r.ratio[k - 3]));
  return worst;
}

Outcome radial_oracle() {
  double grid = 0.0, boundary = 0.0;
  for (double r : {0.3, 0.5, 0.8}) {
    const GridField u = stream_patch(PatchSpec::disc({0, 0}, r, 1024), 257);
    for (int j = 0; j < u.n(); ++j)
      for (int i = 0; i < u.n(); ++i)
        if (u.inside(i, j)) grid = std::max(grid, std::abs(u.at(i, j) - disc_stream(r, norm(u.node(i, j)))));
    const PatchSpec fine = PatchSpec::disc({0, 0}, r, 16384);
    for (int k = 0; k < 64; ++k) {
      const Point2 x = fine.curves()[0]->vertex(256 * static_cast<std::size_t>(k));
      boundary = std::max(boundary, std::abs(stream_boundary(fine, x) - disc_stream(r, r)));
    }
  }
  return {grid <= 5e-4 && boundary <= 1e-8,
          "grid sup error " + fmt("%.2e", grid) + " (tol 5e-4), boundary error " + fmt("%.2e", boundary) + " (tol 1e-8)"};
}

Outcome rotating_identity() {
  double worst = 0.0;
  for (const PatchSpec& p : {centered_disc(0.3), centered_disc(0.5), centered_disc(0.8), centered_annulus(),
                             PatchSpec::annulus({0, 0}, 0.5, 0.9, 256)})
    for (double omega : {-1.0, 0.0, 0.25, 0.5, 2.0}) worst = std::max(worst, rotating_residual(p, omega, 1).max_deviation);
  return {worst <= 1e-6, "max deviation " + fmt("%.2e", worst) + " (tol 1e-6) over 5 patches x 5 omegas"};
}

Outcome axiom_suite() {
  auto results = interval_properties(2024, 200);
  const auto fields = field_properties(2024, 20, 129);
  results.insert(results.end(), fields.begin(), fields.end());
  std::string failed;
  for (const auto& r : results)
    if (!r.pass) failed += " " + r.name + "=" + fmt("%.2e", r.worst);
  return {all_pass(results), std::to_string(results.size()) + " properties, 200 interval unions, 20 fields" +
                                 (failed.empty() ? std::string() : "; failed:" + failed)};
}

Outcome merge_oracle() {
  const IntervalUnion m({{-3, -1}, {1, 3}});
  const IntervalUnion inf = flow_set(m, kInfiniteTime);
  const bool exact = inf.size() == 1 && inf.intervals()[0].a == -2.0 && inf.intervals()[0].b == 2.0;
  double worst = 0.0;
  for (auto [s, t] : {std::pair{0.5, 0.4}, {0.6, 0.3}, {0.2, 1.0}, {0.69, 0.01}, {1.0, 2.0}})
    worst = std::max(worst, hausdorff_distance(flow_set(flow_set(m, s), t), flow_set(m, s + t)));
  return {exact && worst <= 1e-10,
          std::string("t=inf gives [-2,2] ") + (exact ? "exactly" : "NOT exactly") + ", semigroup across merge " +
              fmt("%.2e", worst) + " (tol 1e-10)"};
}

Outcome lemma_witnesses() {
  const int n = 257;
  const auto tg = dyadic_t_grid(3, 10);
  const auto k1 = lemma_key1_check(truncated_cone(n, {0.2, 0}), 1.0, tg);
  const GridField u = stream_patch(PatchSpec::disc({0.3, 0}, 0.2, 256), n);
  const double c = 0.3 * u.max_value();
  const auto curves = level_curves(u, c);
  if (curves.size() != 1) return {false, "level-curve fixture has " + std::to_string(curves.size()) + " curves"};
  const auto k2 = lemma_key2_check(u, JordanPolygon(curves[0].points), c, tg);
  const double d1 = worst_decay(k1), d2 = worst_decay(k2);
  return {d1 <= 0.7 && d2 <= 0.7 && k1.verdict == OSmallVerdict::o_small && k2.verdict == OSmallVerdict::o_small,
          "worst 3-step ratio decay key1 " + fmt("%.3f", d1) + ", key2 " + fmt("%.3f", d2) + " (max 0.7)"};
}

Outcome rigidity_witness() {
  RigidityConfig cfg;
  cfg.n = 257;
  std::string bad;
  auto expect = [&](const char* name, const PatchSpec& p, double omega, Verdict v) {
    const auto rec = verify_patch_rigidity(RotatingPatchProblem::from_patch(p, omega), cfg);
    if (rec.verdict != v) bad += std::string(" ") + name + fmt("@%g", omega) + "=" + to_string(rec.verdict);
  };
  for (double omega : {-1.0, 0.0, 0.5, 2.0}) {
    expect("disc", centered_disc(), omega, Verdict::consistent_radial);
    expect("annulus", centered_annulus(), omega, Verdict::consistent_radial);
  }
  expect("ellipse", tilted_ellipse(), 0.0, Verdict::inconsistent);
  expect("off-center disc", off_center_disc(), -0.5, Verdict::inconsistent);
  expect("disc", centered_disc(), 0.25, Verdict::window_untested);
  return {bad.empty(), bad.empty() ? "11 verdicts as expected" : "unexpected:" + bad};
}

Outcome smooth_witness() {
  RigidityConfig cfg;
  const int n = 257;
  const GridField radial = radial_bump(n), nonradial = nonradial_bump(n);
  const auto r = verify_smooth_rigidity({radial, radial.min_value() / 2 - 0.1}, cfg);
  const auto s = verify_smooth_rigidity({nonradial, nonradial.max_value() / 2 + 0.1}, cfg);
  double worst = 0.0;
  for (int k : {4, 8, 16})
    for (const GridField* w : {&radial, &nonradial}) {
      const auto st = step_approximation(*w, k);
      worst = std::max(worst, st.sup_error / (2.0 / k * w->sup_norm()));
    }
  const bool ok = r.verdict == Verdict::consistent_radial && s.verdict == Verdict::inconsistent && worst <= 1.0;
  return {ok, "radial bump " + to_string(r.verdict) + ", non-radial bump " + to_string(s.verdict) + " at " +
                  s.failed_stage + ", worst step error / bound " + fmt("%.3f", worst)};
}

Outcome sharpness() {
  const auto stars = bifurcation_scan(0.5, 3, {-0.25, 0.75}, 200);
  int inside = 0;
  for (double s : stars) inside += (s > 0 && s < 0.5);
  if (stars.size() != 1 || inside != 1) return {false, std::to_string(stars.size()) + " bifurcation values found"};
  std::vector<double> a(8, 0.0);
  a[0] = 1e-2;
  const auto seed = newton_solve(FourierBoundary(0.5, 3, a), stars[0], Pin{1, 1e-2});
  std::string why;
  const auto branch = continue_branch(seed, 5e-3, 10, &why);
  double res = 0.0, lo = 1.0, hi = 0.0;
  for (const auto& p : branch) {
    res = std::max(res, p.residual_norm);
    lo = std::min(lo, p.omega);
    hi = std::max(hi, p.omega);
  }
  const bool branch_ok = branch.size() >= 10 && res <= 1e-8 && lo > 0 && hi < 0.5 && branch.front().amplitude > 0;
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pert(-1e-2, 1e-2);
  double worst = 0.0;
  for (double omega : {-0.5, -0.1, 0.0, 0.5, 0.8})
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<double> start(8);
      for (double& x : start) x = pert(rng);
      const auto p = newton_solve(FourierBoundary(0.5, 3, start), omega);
      for (double x : p.boundary.a) worst = std::max(worst, std::abs(x));
    }
  return {branch_ok && worst <= 1e-6,
          "Omega* = " + fmt("%.6f", stars[0]) + ", branch of " + std::to_string(branch.size()) + " points, Omega in [" +
              fmt("%.5f", lo) + ", " + fmt("%.5f", hi) + "], residual <= " + fmt("%.1e", res) +
              ", sweeps max |a| " + fmt("%.1e", worst) + " (tol 1e-6)"};
}

int run_cli(const std::string& args) {
  const int status = std::system((std::string(DISCSYM_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / ("discsym_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream p(dir / "off.vp");
    write_patch(p, off_center_disc());
    std::ofstream f(dir / "bump.csv");
    write_grid_field(f, nonradial_bump(65));
    std::ofstream c(dir / "run.cfg");
    c << "grid-n = 65\nseed = 11\ndirs = 8\n";
  }
  const std::string cfg = " --config " + (dir / "run.cfg").string();
  const std::vector<std::string> commands{
      "stream --patch " + (dir / "off.vp").string() + " --omega 0.2",
      "verify --patch " + (dir / "off.vp").string() + " --omega -0.5",
      "csts --field " + (dir / "bump.csv").string() + " --t 0.1,0.5,inf --direction 0.3 --trace 30,0.2",
      "symmetry --field " + (dir / "bump.csv").string(),
      "vstate --count 3",
      "props --set-cases 30 --field-cases 2",
  };
  std::size_t files = 0;
  std::string bad;
  for (std::size_t k = 0; k < commands.size(); ++k) {
    const fs::path a = dir / ("a" + std::to_string(k)), b = dir / ("b" + std::to_string(k));
    const int ea = run_cli(commands[k] + cfg + " --out " + a.string());
    const int eb = run_cli(commands[k] + cfg + " --out " + b.string());
    if (ea != eb) bad += " exit(" + commands[k].substr(0, commands[k].find(' ')) + ")";
    for (const auto& e : fs::directory_iterator(a)) {
      ++files;
      if (slurp(e.path()) != slurp(b / e.path().filename())) bad += " " + e.path().filename().string();
    }
  }
  fs::remove_all(dir);
  return {bad.empty() && files > 0,
          std::to_string(files) + " output files from 6 subcommands compared" + (bad.empty() ? "" : "; differ:" + bad)};
}

}  // namespace

int main() {
  criterion(1, "radial oracle equivalence", 60, radial_oracle);
  criterion(2, "rotating-patch identity", 120, rotating_identity);
  criterion(3, "CStS axiom suite", 600, axiom_suite);
  criterion(4, "interval merge oracle", 60, merge_oracle);
  criterion(5, "o(t) lemma witnesses", 600, lemma_witnesses);
  criterion(6, "rigidity witness (patches)", 900, rigidity_witness);
  criterion(7, "smooth-case witness", 900, smooth_witness);
  criterion(8, "sharpness demonstration", 1800, sharpness);
  criterion(9, "end-to-end determinism", 600, determinism);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
