#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "discsym/csts.hpp"
#include "discsym/csts_properties.hpp"
#include "discsym/disc_potential.hpp"
#include "discsym/errors.hpp"
#include "discsym/io.hpp"
#include "discsym/rigidity_harness.hpp"
#include "discsym/symmetry_analysis.hpp"
#include "discsym/vstate_solver.hpp"

namespace fs = std::filesystem;
using namespace discsym;

namespace {

enum Exit { kOk = 0, kParse = 2, kNumerical = 3, kInconsistent = 4, kWindow = 5 };

struct RunConfig {
  std::optional<int> grid_n;
  std::optional<double> tol;
  int dirs = 16;
  std::uint64_t seed = 1;
  std::string out = ".";
  std::string t_grid = "3:10";
  std::string config;

  int n_or(int fallback) const { return grid_n.value_or(fallback); }
};

struct Args {
  std::string patch, field;
  double omega = 0.0;
  std::vector<std::string> t_list;
  double direction = 0.0;
  std::string trace;
  bool decompose = false;
  double b = 0.5;
  int m = 3;
  double omega_min = -0.25, omega_max = 0.75;
  int steps = 200, modes = 8, count = 10;
  double step = 5e-3, seed_amplitude = 1e-2;
  int set_cases = 200, field_cases = 20;
};

double parse_double(const std::string& key, const std::string& s) {
  if (s == "inf" || s == "+inf") return kInfiniteTime;
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
    throw ParseError(key + ": not a number: '" + s + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& s) {
  long long v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) throw ParseError(key + ": not an integer: '" + s + "'");
  return v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, ',');)
    if (!item.empty()) out.push_back(item);
  return out;
}

void apply_config(RunConfig& rc, Args& a) {
  if (rc.config.empty()) return;
  std::ifstream in(rc.config);
  if (!in) throw ParseError("cannot read config file " + rc.config);
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> keys{
      {"grid-n", [&](auto& k, auto& v) { rc.grid_n = static_cast<int>(parse_int(k, v)); }},
      {"tol", [&](auto& k, auto& v) { rc.tol = parse_double(k, v); }},
      {"dirs", [&](auto& k, auto& v) { rc.dirs = static_cast<int>(parse_int(k, v)); }},
      {"seed", [&](auto& k, auto& v) { rc.seed = static_cast<std::uint64_t>(parse_int(k, v)); }},
      {"out", [&](auto&, auto& v) { rc.out = v; }},
      {"t-grid", [&](auto&, auto& v) { rc.t_grid = v; }},
      {"omega", [&](auto& k, auto& v) { a.omega = parse_double(k, v); }},
      {"t", [&](auto&, auto& v) { a.t_list = split_list(v); }},
      {"direction", [&](auto& k, auto& v) { a.direction = parse_double(k, v); }},
      {"b", [&](auto& k, auto& v) { a.b = parse_double(k, v); }},
      {"m", [&](auto& k, auto& v) { a.m = static_cast<int>(parse_int(k, v)); }},
      {"omega-min", [&](auto& k, auto& v) { a.omega_min = parse_double(k, v); }},
      {"omega-max", [&](auto& k, auto& v) { a.omega_max = parse_double(k, v); }},
      {"steps", [&](auto& k, auto& v) { a.steps = static_cast<int>(parse_int(k, v)); }},
      {"modes", [&](auto& k, auto& v) { a.modes = static_cast<int>(parse_int(k, v)); }},
      {"step", [&](auto& k, auto& v) { a.step = parse_double(k, v); }},
      {"count", [&](auto& k, auto& v) { a.count = static_cast<int>(parse_int(k, v)); }},
      {"set-cases", [&](auto& k, auto& v) { a.set_cases = static_cast<int>(parse_int(k, v)); }},
      {"field-cases", [&](auto& k, auto& v) { a.field_cases = static_cast<int>(parse_int(k, v)); }},
  };
  for (const auto& [k, v] : read_config(in)) {
    const auto it = keys.find(k);
    if (it == keys.end()) throw ParseError("unknown config key '" + k + "'");
    it->second(k, v);
  }
}

void validate(const RunConfig& rc) {
  if (rc.grid_n && (*rc.grid_n < 5 || *rc.grid_n % 2 == 0))
    throw ParseError("--grid-n must be odd and at least 5");
  if (rc.tol && !(*rc.tol > 0.0)) throw ParseError("--tol must be positive");
  if (rc.dirs < 1) throw ParseError("--dirs must be positive");
}

std::vector<double> t_grid_of(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw ParseError("--t-grid must be FROM:TO");
  const int from = static_cast<int>(parse_int("t-grid", text.substr(0, colon)));
  const int to = static_cast<int>(parse_int("t-grid", text.substr(colon + 1)));
  if (from < 0 || to < from + 3) throw ParseError("--t-grid needs 0 <= FROM and TO >= FROM + 3");
  return dyadic_t_grid(from, to);
}

std::ofstream open_out(const RunConfig& rc, const std::string& name) {
  fs::create_directories(rc.out);
  std::ofstream f(fs::path(rc.out) / name);
  if (!f) throw ParseError("cannot write " + (fs::path(rc.out) / name).string());
  return f;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot read " + path);
  return f;
}

PatchInput load_patch(const std::string& path) {
  auto in = open_in(path);
  return read_patch(in);
}

GridField load_field(const std::string& path) {
  auto in = open_in(path);
  return read_grid_field(in);
}

int cmd_stream(const RunConfig& rc, const Args& a) {
  const PatchInput p = load_patch(a.patch);
  const int n = rc.n_or(257);
  const GridField s = p.plain ? stream_patch(*p.plain, n) : stream_patch(p.patch, n);
  auto f = open_out(rc, "stream.csv");
  write_grid_field(f, s);
  auto g = open_out(rc, "relative_stream.csv");
  write_grid_field(g, relative_stream(s, a.omega));
  return kOk;
}

int cmd_verify(const RunConfig& rc, const Args& a) {
  if (a.patch.empty() == a.field.empty()) throw ParseError("verify needs exactly one of --patch or --field");
  RigidityConfig cfg;
  cfg.n = rc.n_or(cfg.n);
  cfg.directions = rc.dirs;
  cfg.t_grid = t_grid_of(rc.t_grid);
  if (rc.tol) cfg.residual_tol = *rc.tol;
  VerdictRecord rec;
  if (!a.patch.empty()) {
    PatchInput p = load_patch(a.patch);
    const auto problem = p.plain ? RotatingPatchProblem::from_patch(*p.plain, a.omega)
                                 : RotatingPatchProblem::from_multiscale(std::move(p.patch), a.omega);
    rec = verify_patch_rigidity(problem, cfg);
  } else {
    rec = verify_smooth_rigidity(RotatingSmoothProblem{load_field(a.field), a.omega}, cfg);
  }
  const std::string json = verdict_json(rec);
  std::cout << json << '\n';
  open_out(rc, "verdict.json") << json << '\n';
  auto csv = open_out(rc, "osmall.csv");
  write_osmall_csv(csv, rec);
  switch (rec.verdict) {
    case Verdict::consistent_radial: return kOk;
    case Verdict::inconsistent: return kInconsistent;
    case Verdict::window_untested: return kWindow;
  }
  return kNumerical;
}

int cmd_csts(const RunConfig& rc, const Args& a) {
  if (a.t_list.empty()) throw ParseError("csts needs a non-empty --t list");
  std::vector<double> ts;
  for (const auto& s : a.t_list) {
    ts.push_back(parse_double("t", s));
    if (ts.back() < 0.0) throw ParseError("t must be non-negative");
  }
  const GridField u = load_field(a.field);
  const bool rotated = a.direction != 0.0;
  const GridField frame = rotated ? rotate_field(u, -a.direction) : u;
  const CstsEngine engine(frame);
  auto energy = open_out(rc, "energy.csv");
  energy << "t,semi_discrete_energy,dirichlet_energy\n";
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const GridField vt = engine.field(ts[k]);
    const GridField ut = rotated ? rotate_field(vt, a.direction) : vt;
    auto f = open_out(rc, "csts_" + std::to_string(k) + ".csv");
    write_grid_field(f, ut);
    energy << (std::isinf(ts[k]) ? std::string("inf") : format_number(ts[k])) << ','
           << format_number(semi_discrete_energy(engine.rows(ts[k]), u.h())) << ','
           << format_number(dirichlet_energy(ut)) << '\n';
  }
  if (!a.trace.empty()) {
    const auto parts = split_list(a.trace);
    if (parts.size() != 2) throw ParseError("--trace must be ROW,LEVEL");
    const int row = static_cast<int>(parse_int("trace", parts[0]));
    const double level = parse_double("trace", parts[1]);
    const FlowTrace tr = engine.trace(row, level, ts.back());
    const IntervalUnion result = tr.states.empty() ? IntervalUnion() : flow_set(tr.states.front(), ts.back());
    open_out(rc, "trace.json") << flow_trace_json(tr, result) << '\n';
  }
  return kOk;
}

int cmd_symmetry(const RunConfig& rc, const Args& a) {
  const GridField u = load_field(a.field);
  const double tol = rc.tol.value_or(default_symmetry_tolerance(u));
  const auto reports = check_all_directions(u, rc.dirs, tol);
  std::optional<AnnularDecomposition> dec;
  if (a.decompose) dec = decompose(u, tol);
  const std::string json = symmetry_json(reports, dec);
  std::cout << json << '\n';
  open_out(rc, "symmetry.json") << json << '\n';
  return all_pass(reports) ? kOk : kInconsistent;
}

int cmd_vstate(const RunConfig& rc, const Args& a) {
  if (!(a.b > 0.0 && a.b < 1.0)) throw ParseError("--b must lie in (0, 1)");
  if (a.m < 1 || a.modes < 1 || a.modes > FourierBoundary::kMaxModes || a.steps < 1 || a.count < 0)
    throw ParseError("--m, --modes, --steps must be positive and --count non-negative");
  if (!(a.omega_min < a.omega_max)) throw ParseError("--omega-min must be below --omega-max");
  NewtonOptions opt;
  if (rc.tol) opt.tol = *rc.tol;
  const auto stars = bifurcation_scan(a.b, a.m, {a.omega_min, a.omega_max}, a.steps, opt);
  auto scan = open_out(rc, "scan.csv");
  scan << "omega_star\n";
  std::vector<BranchPoint> all;
  for (double star : stars) {
    scan << format_number(star) << '\n';
    std::vector<double> coeffs(a.modes, 0.0);
    coeffs[0] = a.seed_amplitude;
    const BranchPoint seed = newton_solve(FourierBoundary(a.b, a.m, coeffs), star, Pin{1, a.seed_amplitude}, opt);
    std::string why;
    auto branch = continue_branch(seed, a.step, a.count, &why, opt);
    if (!why.empty()) std::cerr << "branch at " << format_number(star) << " stopped: " << why << '\n';
    all.insert(all.end(), branch.begin(), branch.end());
  }
  auto csv = open_out(rc, "branch.csv");
  write_branch_csv(csv, all);
  open_out(rc, "branch.gp") << branch_gnuplot("branch.csv");
  return kOk;
}

int cmd_props(const RunConfig& rc, const Args& a) {
  if (a.set_cases < 1 || a.field_cases < 1) throw ParseError("case counts must be positive");
  auto results = interval_properties(rc.seed, a.set_cases);
  const auto fields = field_properties(rc.seed, a.field_cases, rc.n_or(65));
  results.insert(results.end(), fields.begin(), fields.end());
  auto csv = open_out(rc, "props.csv");
  csv << "property,cases,worst,tolerance,pass\n";
  for (const auto& r : results) {
    csv << r.name << ',' << r.cases << ',' << format_number(r.worst) << ',' << format_number(r.tolerance)
        << ',' << (r.pass ? "true" : "false") << '\n';
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  worst " << format_number(r.worst)
              << "  tol " << format_number(r.tolerance) << '\n';
  }
  return all_pass(results) ? kOk : kInconsistent;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rigidity checks for rotating vortex patches in the unit disc"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig rc;
  Args a;
  app.add_option("--grid-n", rc.grid_n, "Grid nodes per side (odd)");
  app.add_option("--tol", rc.tol, "Primary tolerance of the subcommand");
  app.add_option("--dirs", rc.dirs, "Number of symmetry directions")->capture_default_str();
  app.add_option("--seed", rc.seed, "Seed for randomized sweeps")->capture_default_str();
  app.add_option("--out", rc.out, "Output directory")->capture_default_str();
  app.add_option("--t-grid", rc.t_grid, "Dyadic t-grid FROM:TO, t = 2^-FROM .. 2^-TO")->capture_default_str();
  app.add_option("--config", rc.config, "key = value file overriding flags");

  auto* stream = app.add_subcommand("stream", "Stream function and relative stream of a patch");
  stream->add_option("--patch", a.patch, "Patch file")->required();
  stream->add_option("--omega", a.omega, "Angular velocity")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "Rigidity pipeline for a patch or a smooth vorticity");
  verify->add_option("--patch", a.patch, "Patch file");
  verify->add_option("--field", a.field, "Vorticity grid CSV");
  verify->add_option("--omega", a.omega, "Angular velocity")->capture_default_str();

  auto* csts = app.add_subcommand("csts", "Continuous Steiner symmetrization of a field");
  csts->add_option("--field", a.field, "Field grid CSV")->required();
  csts->add_option("--t", a.t_list, "Comma-separated times (inf allowed)")->delimiter(',');
  csts->add_option("--direction", a.direction, "Symmetrization direction (radians)")->capture_default_str();
  csts->add_option("--trace", a.trace, "ROW,LEVEL: dump the level-set flow at the last t");

  auto* sym = app.add_subcommand("symmetry", "Reflection-symmetry scan and annular decomposition");
  sym->add_option("--field", a.field, "Field grid CSV")->required();
  sym->add_flag("--decompose", a.decompose, "Also fit the annular decomposition");

  auto* vs = app.add_subcommand("vstate", "Bifurcation scan and branch continuation of m-fold V-states");
  vs->add_option("--b", a.b, "Disc radius")->capture_default_str();
  vs->add_option("--m", a.m, "Symmetry order")->capture_default_str();
  vs->add_option("--omega-min", a.omega_min)->capture_default_str();
  vs->add_option("--omega-max", a.omega_max)->capture_default_str();
  vs->add_option("--steps", a.steps, "Scan intervals")->capture_default_str();
  vs->add_option("--modes", a.modes, "Fourier modes J")->capture_default_str();
  vs->add_option("--step", a.step, "Amplitude step")->capture_default_str();
  vs->add_option("--count", a.count, "Continuation steps")->capture_default_str();

  auto* props = app.add_subcommand("props", "Randomized CStS property suite");
  props->add_option("--set-cases", a.set_cases)->capture_default_str();
  props->add_option("--field-cases", a.field_cases)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kParse;
  }

  try {
    apply_config(rc, a);
    validate(rc);
    if (*stream) return cmd_stream(rc, a);
    if (*verify) return cmd_verify(rc, a);
    if (*csts) return cmd_csts(rc, a);
    if (*sym) return cmd_symmetry(rc, a);
    if (*vs) return cmd_vstate(rc, a);
    if (*props) return cmd_props(rc, a);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const RegularityError& e) {
    std::cerr << "regularity failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const SingularityError& e) {
    std::cerr << "singularity: " << e.what() << '\n';
    return kNumerical;
  } catch (const GeometryError& e) {
    std::cerr << "geometry failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kParse;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  }
  return kParse;
}
