#include "discsym/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "discsym/errors.hpp"
#include "json.hpp"

namespace discsym {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e || !std::isfinite(v))
    throw ParseError(where + ": expected a number, got '" + s + "'");
  return v;
}

long parse_int(const std::string& s, const std::string& where) {
  long v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  const auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ParseError(where + ": expected an integer, got '" + s + "'");
  return v;
}

// Lines with comments and blanks removed, paired with their line numbers.
std::vector<std::pair<int, std::string>> content_lines(std::istream& in) {
  std::vector<std::pair<int, std::string>> out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (!line.empty()) out.emplace_back(no, line);
  }
  return out;
}

void write_polygon(std::ostream& out, const char* tag, const JordanPolygon& p) {
  out << tag << ' ' << p.size() << '\n';
  for (const auto& v : p.vertices()) out << format_number(v.x1) << ' ' << format_number(v.x2) << '\n';
}

void write_component(std::ostream& out, const PatchComponent& c, double weight) {
  out << "component\n";
  if (weight != 1.0) out << "weight " << format_number(weight) << '\n';
  write_polygon(out, "outer", c.outer);
  for (const auto& h : c.holes) write_polygon(out, "hole", h);
}

}  // namespace

std::string format_number(double x) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, p) : std::string("nan");
}

void write_grid_field(std::ostream& out, const GridField& f) {
  char buf[64];
  out << "n,h\n" << f.n() << ',' << format_number(f.h()) << '\n';
  for (int j = 0; j < f.n(); ++j) {
    for (int i = 0; i < f.n(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", f.at(i, j));
      if (i) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

GridField read_grid_field(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != "n,h") throw ParseError("grid field: missing 'n,h' header");
  if (!std::getline(in, line)) throw ParseError("grid field: missing size line");
  const auto head = split(trim(line), ',');
  if (head.size() != 2) throw ParseError("grid field: size line must be '<n>,<h>'");
  const long n = parse_int(head[0], "grid field line 2");
  const double h = parse_double(head[1], "grid field line 2");
  if (n < GridField::kMinNodes || n > 8193) throw ParseError("grid field: unsupported size " + head[0]);
  if (std::abs(h - 2.0 / (n - 1)) > 1e-12) throw ParseError("grid field: spacing does not match n");
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n) * n);
  for (long j = 0; j < n; ++j) {
    if (!std::getline(in, line)) throw ParseError("grid field: expected " + std::to_string(n) + " rows");
    const auto cells = split(trim(line), ',');
    const std::string where = "grid field row " + std::to_string(j);
    if (static_cast<long>(cells.size()) != n) throw ParseError(where + ": wrong number of values");
    for (const auto& c : cells) values.push_back(parse_double(c, where));
  }
  while (std::getline(in, line))
    if (!trim(line).empty()) throw ParseError("grid field: trailing data after the last row");
  return GridField(static_cast<int>(n), std::move(values));
}

PatchInput read_patch(std::istream& in) {
  const auto lines = content_lines(in);
  std::size_t k = 0;
  auto where = [&](std::size_t at) {
    return "patch line " + std::to_string(at < lines.size() ? lines[at].first : -1);
  };
  if (lines.empty() || lines[0].second != "vpatch 1") throw ParseError("patch: missing 'vpatch 1' header");
  ++k;
  auto read_curve = [&](long count) {
    std::vector<Point2> pts;
    for (long c = 0; c < count; ++c, ++k) {
      if (k >= lines.size()) throw ParseError("patch: unexpected end of file in a curve");
      std::istringstream is(lines[k].second);
      std::string a, b, extra;
      if (!(is >> a >> b) || (is >> extra)) throw ParseError(where(k) + ": expected 'x y'");
      pts.push_back({parse_double(a, where(k)), parse_double(b, where(k))});
    }
    return pts;
  };
  auto header = [&](const char* tag) -> std::optional<long> {
    if (k >= lines.size()) return std::nullopt;
    std::istringstream is(lines[k].second);
    std::string t, n, extra;
    if (!(is >> t) || t != tag) return std::nullopt;
    if (!(is >> n) || (is >> extra)) throw ParseError(where(k) + ": expected '" + tag + " N'");
    const long count = parse_int(n, where(k));
    if (count < 0) throw ParseError(where(k) + ": negative vertex count");
    ++k;
    return count;
  };

  std::vector<MultiScalePatch::Term> terms;
  bool plain = true;
  try {
    while (k < lines.size()) {
      if (lines[k].second != "component") throw ParseError(where(k) + ": expected 'component'");
      ++k;
      double weight = 1.0;
      if (k < lines.size() && lines[k].second.rfind("weight", 0) == 0) {
        std::istringstream is(lines[k].second);
        std::string t, w, extra;
        if (!(is >> t >> w) || t != "weight" || (is >> extra))
          throw ParseError(where(k) + ": expected 'weight alpha'");
        weight = parse_double(w, where(k));
        ++k;
      }
      const auto outer_count = header("outer");
      if (!outer_count) throw ParseError(where(k) + ": expected 'outer N'");
      JordanPolygon outer(read_curve(*outer_count));
      std::vector<JordanPolygon> holes;
      while (const auto hole_count = header("hole")) holes.emplace_back(read_curve(*hole_count));
      plain = plain && weight == 1.0;
      terms.push_back({weight, PatchComponent(std::move(outer), std::move(holes))});
    }
    if (terms.empty()) throw ParseError("patch: no components");
    PatchInput out{MultiScalePatch(terms), std::nullopt};
    if (plain) {
      std::vector<PatchComponent> comps;
      for (auto& t : terms) comps.push_back(std::move(t.component));
      out.plain = PatchSpec(std::move(comps));
    }
    return out;
  } catch (const ParseError&) {
    throw;
  } catch (const DomainError& e) {
    throw ParseError(std::string("patch: invalid geometry: ") + e.what());
  }
}

void write_patch(std::ostream& out, const PatchSpec& patch) {
  out << "vpatch 1\n";
  for (const auto& c : patch.components()) write_component(out, c, 1.0);
}

void write_patch(std::ostream& out, const MultiScalePatch& patch) {
  out << "vpatch 1\n";
  for (const auto& t : patch.terms()) write_component(out, t.component, t.alpha);
}

std::string verdict_json(const VerdictRecord& rec) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["regime"] = to_string(rec.regime);
  j["stages"] = ordered_json::array();
  for (const auto& s : rec.stages) {
    ordered_json data = ordered_json::object();
    for (const auto& [k, v] : s.values) data[k] = std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
    for (const auto& [k, v] : s.notes) data[k] = v;
    if (!s.reports.empty()) {
      ordered_json reports = ordered_json::array();
      for (const auto& r : s.reports)
        reports.push_back({{"verdict", to_string(r.verdict)},
                           {"slope", r.slope},
                           {"fixed_point_floor", r.fixed_point_floor},
                           {"max_ratio", r.ratio.empty() ? ordered_json(nullptr)
                                                  : ordered_json(*std::max_element(r.ratio.begin(), r.ratio.end()))}});
      data["reports"] = std::move(reports);
    }
    j["stages"].push_back({{"name", s.name}, {"status", s.status}, {"data", std::move(data)}});
  }
  j["verdict"] = to_string(rec.verdict);
  if (!rec.failed_stage.empty()) j["failed_stage"] = rec.failed_stage;
  return j.dump(2);
}

void write_osmall_csv(std::ostream& out, const VerdictRecord& rec) {
  out << "stage,report,t,q,ratio,verdict\n";
  for (const auto& s : rec.stages)
    for (std::size_t r = 0; r < s.reports.size(); ++r) {
      const auto& rep = s.reports[r];
      for (std::size_t i = 0; i < rep.t.size(); ++i)
        out << s.name << ',' << r << ',' << format_number(rep.t[i]) << ',' << format_number(rep.q[i])
            << ',' << format_number(rep.ratio[i]) << ',' << to_string(rep.verdict) << '\n';
    }
}

void write_branch_csv(std::ostream& out, const std::vector<BranchPoint>& branch) {
  std::size_t J = 0;
  for (const auto& p : branch) J = std::max(J, p.boundary.a.size());
  out << "omega,amplitude,residual_norm";
  for (std::size_t j = 1; j <= J; ++j) out << ",a" << j;
  out << '\n';
  for (const auto& p : branch) {
    out << format_number(p.omega) << ',' << format_number(p.amplitude) << ','
        << format_number(p.residual_norm);
    for (std::size_t j = 0; j < J; ++j)
      out << ',' << format_number(j < p.boundary.a.size() ? p.boundary.a[j] : 0.0);
    out << '\n';
  }
}

std::string branch_gnuplot(const std::string& csv_name) {
  std::ostringstream s;
  s << "set datafile separator ','\n"
    << "set key autotitle columnhead\n"
    << "set xlabel 'Omega'\n"
    << "set ylabel 'amplitude |a_1|'\n"
    << "set grid\n"
    << "plot '" << csv_name << "' using 1:2 with linespoints title 'm-fold branch'\n";
  return s.str();
}

std::map<std::string, std::string> read_config(std::istream& in) {
  std::map<std::string, std::string> out;
  for (const auto& [no, line] : content_lines(in)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("config line " + std::to_string(no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ParseError("config line " + std::to_string(no) + ": empty key");
    out[key] = trim(line.substr(eq + 1));
  }
  return out;
}

namespace {

nlohmann::ordered_json endpoints(const IntervalUnion& m) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& i : m.intervals()) out.push_back({i.a, i.b});
  return out;
}

}  // namespace

std::string symmetry_json(const std::vector<SymmetryReport>& reports,
                          const std::optional<AnnularDecomposition>& decomposition) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["pass"] = all_pass(reports);
  j["directions"] = ordered_json::array();
  for (const auto& r : reports)
    j["directions"].push_back({{"direction", r.direction},
                               {"pairs", r.pairs},
                               {"max_mismatch", r.max_mismatch},
                               {"worst", {r.worst.x1, r.worst.x2}},
                               {"pass", r.pass},
                               {"degenerate", r.degenerate}});
  if (decomposition) {
    ordered_json comps = ordered_json::array();
    for (const auto& c : decomposition->components)
      comps.push_back({{"center", {c.center.x1, c.center.x2}},
                       {"inner_radius", c.inner_radius},
                       {"outer_radius", c.outer_radius},
                       {"level_low", c.level_low},
                       {"level_high", c.level_high},
                       {"fit_residual", c.fit_residual},
                       {"radii", c.radii},
                       {"values", c.values}});
    j["decomposition"] = {{"components", std::move(comps)},
                          {"residual_measure", decomposition->residual_measure}};
  }
  return j.dump(2);
}

std::string flow_trace_json(const FlowTrace& trace, const IntervalUnion& result) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["event_times"] = ordered_json::array();
  for (double t : trace.event_times) j["event_times"].push_back(std::isfinite(t) ? ordered_json(t) : ordered_json("inf"));
  j["states"] = ordered_json::array();
  for (const auto& s : trace.states) j["states"].push_back(endpoints(s));
  j["result"] = endpoints(result);
  return j.dump(2);
}

}  // namespace discsym
