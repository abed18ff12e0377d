#include "discsym/rigidity_harness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "discsym/csts.hpp"
#include "discsym/disc_potential.hpp"
#include "discsym/errors.hpp"
#include "discsym/level_sets.hpp"
#include "discsym/patch_geometry.hpp"
#include "discsym/step_approximation.hpp"
#include "discsym/symmetry_analysis.hpp"

namespace discsym {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::superharmonic: return "superharmonic";
    case Regime::subharmonic: return "subharmonic";
    case Regime::window: return "window";
  }
  return "?";
}

std::string to_string(OSmallVerdict v) {
  switch (v) {
    case OSmallVerdict::o_small: return "o(t)";
    case OSmallVerdict::theta: return "Theta(t)";
    case OSmallVerdict::inconclusive: return "inconclusive";
  }
  return "?";
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::consistent_radial: return "consistent-radial";
    case Verdict::inconsistent: return "inconsistent";
    case Verdict::window_untested: return "window-untested";
  }
  return "?";
}

RotatingPatchProblem RotatingPatchProblem::from_patch(const PatchSpec& patch, double omega) {
  if (patch.empty()) throw DomainError("RotatingPatchProblem: empty patch");
  return {MultiScalePatch::from_patch(patch), omega, patch};
}

RotatingPatchProblem RotatingPatchProblem::from_multiscale(MultiScalePatch patch, double omega) {
  if (patch.empty()) throw DomainError("RotatingPatchProblem: empty patch");
  return {std::move(patch), omega, std::nullopt};
}

Regime RotatingPatchProblem::regime() const {
  const double lo = std::min(0.0, patch.lambda());
  const double hi = std::max(0.0, patch.Lambda());
  if (2.0 * omega <= lo) return Regime::superharmonic;
  if (2.0 * omega >= hi) return Regime::subharmonic;
  return Regime::window;
}

Regime RotatingSmoothProblem::regime() const {
  double lo = INFINITY, hi = -INFINITY;
  for (int j = 0; j < omega0.n(); ++j)
    for (int i = 0; i < omega0.n(); ++i)
      if (omega0.inside(i, j)) {
        lo = std::min(lo, omega0.at(i, j));
        hi = std::max(hi, omega0.at(i, j));
      }
  if (omega <= lo / 2.0) return Regime::superharmonic;
  if (omega >= hi / 2.0) return Regime::subharmonic;
  return Regime::window;
}

std::vector<double> dyadic_t_grid(int from, int to) {
  if (from > to) throw DomainError("dyadic_t_grid: empty range");
  std::vector<double> t;
  for (int k = from; k <= to; ++k) t.push_back(std::ldexp(1.0, -k));
  return t;
}

std::vector<double> clamp_t_grid(std::vector<double> grid, double lipschitz, double radius,
                                 double recon_tol) {
  std::erase_if(grid, [&](double t) { return lipschitz * radius * t < 3.0 * recon_tol; });
  return grid;
}

OSmallReport make_osmall_report(std::vector<double> t, std::vector<double> q,
                                const OSmallPolicy& policy) {
  if (t.size() != q.size() || t.empty())
    throw DomainError("make_osmall_report: t and q must be non-empty and of equal length");
  OSmallReport rep;
  rep.t = std::move(t);
  rep.q = std::move(q);
  const std::size_t m = rep.t.size();
  double max_q = 0.0, min_ratio = INFINITY;
  for (std::size_t i = 0; i < m; ++i) {
    rep.ratio.push_back(std::abs(rep.q[i]) / rep.t[i]);
    max_q = std::max(max_q, std::abs(rep.q[i]));
    min_ratio = std::min(min_ratio, rep.ratio[i]);
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (rep.q[i] == 0.0) continue;
    const double x = std::log(rep.t[i]), y = std::log(std::abs(rep.q[i]));
    sx += x, sy += y, sxx += x * x, sxy += x * y, ++cnt;
  }
  if (cnt >= 2 && cnt * sxx - sx * sx > 0.0) rep.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

  rep.fixed_point_floor = policy.fixed_point_floor;
  if (max_q <= policy.fixed_point_floor) {
    rep.verdict = OSmallVerdict::o_small;
    return rep;
  }
  bool decaying = m >= 4;
  for (std::size_t i = std::max<std::size_t>(3, m >= 3 ? m - 3 : 0); i < m && decaying; ++i)
    decaying = rep.ratio[i] <= policy.decay * rep.ratio[i - 3];
  if (decaying && min_ratio < policy.ratio_floor)
    rep.verdict = OSmallVerdict::o_small;
  else if (min_ratio >= policy.theta_floor)
    rep.verdict = OSmallVerdict::theta;
  else
    rep.verdict = OSmallVerdict::inconclusive;
  return rep;
}

namespace {

constexpr double kPi = std::numbers::pi;

// Zeroes rounding-level negatives; larger ones violate the precondition.
GridField clean_nonnegative(GridField v, const char* who) {
  const double floor = -1e-12 * std::max(1.0, v.sup_norm());
  for (double& x : v.values()) {
    if (x < floor) {
      std::ostringstream msg;
      msg << who << ": working field takes the negative value " << x;
      throw PreconditionError(msg.str());
    }
    x = std::max(x, 0.0);
  }
  return v;
}

GridField shift_to_nonnegative(GridField v) {
  const double m = v.min_value();
  if (m < 0.0)
    for (int j = 0; j < v.n(); ++j)
      for (int i = 0; i < v.n(); ++i)
        if (v.inside(i, j)) v.at(i, j) = std::max(0.0, v.at(i, j) - m);
  return v;
}

MultiScalePatch rotate_terms(const MultiScalePatch& p, double angle) {
  std::vector<MultiScalePatch::Term> terms;
  for (const auto& t : p.terms()) {
    std::vector<JordanPolygon> holes;
    for (const auto& h : t.component.holes) holes.push_back(h.rotated(angle));
    terms.push_back({t.alpha, PatchComponent(t.component.outer.rotated(angle), std::move(holes))});
  }
  return MultiScalePatch(std::move(terms));
}

WorkingField finish_working(GridField u, GridField rhs, Regime regime, const char* who) {
  WorkingField w{std::move(u), std::move(rhs), regime, regime == Regime::subharmonic ? -1 : 1};
  if (w.sign < 0) {
    w.field = -1.0 * w.field;
    w.rhs = -1.0 * w.rhs;
  }
  if (regime != Regime::window) w.field = clean_nonnegative(std::move(w.field), who);
  return w;
}

GridField rotation_part(int n, double omega) {
  return GridField::sample(n, [&](Point2 x) { return 0.5 * omega * (norm2(x) - 1.0); });
}

GridField shifted_rhs(GridField rhs, double omega) {
  for (int j = 0; j < rhs.n(); ++j)
    for (int i = 0; i < rhs.n(); ++i)
      if (rhs.inside(i, j)) rhs.at(i, j) -= 2.0 * omega;
  return rhs;
}

// Working field with the source rotated by -direction.
GridField rotated_working(const RotatingPatchProblem& p, int n, double direction) {
  RotatingPatchProblem r{rotate_terms(p.patch, -direction), p.omega, std::nullopt};
  WorkingField w = build_relative_stream(r, n);
  return w.regime == Regime::window ? shift_to_nonnegative(std::move(w.field)) : std::move(w.field);
}

GridField rotated_working(const RotatingSmoothProblem& p, double direction) {
  RotatingSmoothProblem r{direction == 0.0 ? p.omega0 : rotate_field(p.omega0, -direction), p.omega};
  WorkingField w = build_relative_stream(r);
  return w.regime == Regime::window ? shift_to_nonnegative(std::move(w.field)) : std::move(w.field);
}

struct Span {
  double a, b;
};

// Exact integral of (f - g) or |f - g| over a union of disjoint spans.
double restricted_integral(const RowFunction& f, const RowFunction& g, const std::vector<Span>& set,
                           bool absolute) {
  std::vector<double> xs;
  xs.reserve(f.x.size() + g.x.size());
  xs.insert(xs.end(), f.x.begin(), f.x.end());
  xs.insert(xs.end(), g.x.begin(), g.x.end());
  std::sort(xs.begin(), xs.end());
  double total = 0.0;
  for (const auto& s : set) {
    std::vector<double> pts{s.a};
    for (auto it = std::upper_bound(xs.begin(), xs.end(), s.a); it != xs.end() && *it < s.b; ++it)
      pts.push_back(*it);
    pts.push_back(s.b);
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double a = pts[k], b = pts[k + 1];
      if (b <= a) continue;
      const double da = f(a) - g(a), db = f(b) - g(b);
      if (!absolute || (da >= 0.0) == (db >= 0.0)) {
        total += 0.5 * (b - a) * (absolute ? std::abs(da + db) : da + db);
      } else {
        const double z = a + (b - a) * da / (da - db);
        total += 0.5 * ((z - a) * std::abs(da) + (b - z) * std::abs(db));
      }
    }
  }
  return total;
}

// Spans of x where |row(x) - c| <= eps, exact for the piecewise-linear row.
std::vector<Span> band_spans(const RowFunction& row, double c, double eps) {
  std::vector<Span> out;
  auto in = [&](double v) { return std::abs(v - c) <= eps; };
  for (std::size_t k = 0; k + 1 < row.x.size(); ++k) {
    const double x0 = row.x[k], x1 = row.x[k + 1], v0 = row.v[k], v1 = row.v[k + 1];
    double a = x0, b = x1;
    if (!in(v0) || !in(v1)) {
      // Clip [x0, x1] to the parameter range where the linear piece is in the band.
      double lo = 0.0, hi = 1.0;
      const double dv = v1 - v0;
      if (dv == 0.0) {
        if (!in(v0)) continue;
      } else {
        double s0 = (c - eps - v0) / dv, s1 = (c + eps - v0) / dv;
        if (s0 > s1) std::swap(s0, s1);
        lo = std::max(lo, s0), hi = std::min(hi, s1);
        if (hi < lo) continue;
      }
      a = x0 + lo * (x1 - x0), b = x0 + hi * (x1 - x0);
    }
    if (!out.empty() && a <= out.back().b)
      out.back().b = std::max(out.back().b, b);
    else if (b > a)
      out.push_back({a, b});
  }
  return out;
}

// Interior of a polygon on the horizontal line x2 = y, by even-odd crossings.
std::vector<Span> polygon_spans(const JordanPolygon& poly, double y) {
  std::vector<double> xs;
  const std::size_t m = poly.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Point2 p = poly.vertex(k), q = poly.vertex(k + 1);
    if ((p.x2 > y) == (q.x2 > y)) continue;
    xs.push_back(p.x1 + (y - p.x2) * (q.x1 - p.x1) / (q.x2 - p.x2));
  }
  std::sort(xs.begin(), xs.end());
  std::vector<Span> out;
  for (std::size_t k = 0; k + 1 < xs.size(); k += 2) out.push_back({xs[k], xs[k + 1]});
  return out;
}

OSmallReport energy_of(const GridField& v, const std::vector<double>& t_grid,
                       const OSmallPolicy& policy) {
  const GridField w = clean_nonnegative(v, "energy_stationarity");
  const CstsEngine engine(w);
  const double e0 = semi_discrete_energy(row_functions(w), w.h());
  std::vector<double> q;
  for (double t : t_grid) q.push_back(e0 - semi_discrete_energy(engine.rows(t), w.h()));
  OSmallPolicy p = policy;
  p.fixed_point_floor =
      std::max(policy.fixed_point_floor, policy.fixed_point_relative * w.h() * w.h() * e0);
  return make_osmall_report(t_grid, std::move(q), p);
}

double min_scaled_laplacian(const GridField& v) {
  double m = INFINITY;
  const double h2 = v.h() * v.h();
  for (int j = 0; j < v.n(); ++j)
    for (int i = 0; i < v.n(); ++i)
      if (v.interior(i, j) && v.interior(i - 1, j) && v.interior(i + 1, j) && v.interior(i, j - 1) &&
          v.interior(i, j + 1))
        m = std::min(m, -five_point_laplacian(v, i, j) * h2);
  return m;
}

StageResult stage(std::string name) { return StageResult{std::move(name), "pass", {}, {}, {}}; }

bool fail(VerdictRecord& rec, StageResult s) {
  const bool failed = s.status == "fail";
  if (failed) {
    rec.verdict = Verdict::inconsistent;
    rec.failed_stage = s.name;
  }
  rec.stages.push_back(std::move(s));
  return failed;
}

StageResult working_stage(const WorkingField& w, const RigidityConfig& cfg) {
  StageResult s = stage("relative_stream");
  const double lap = min_scaled_laplacian(w.field);
  s.values = {{"sign", static_cast<double>(w.sign)},
              {"sup", w.field.max_value()},
              {"min", w.field.min_value()},
              {"min_scaled_laplacian", lap}};
  if (lap < -cfg.superharmonic_tol) {
    s.status = "fail";
    s.notes.push_back({"reason", "working field is not superharmonic"});
  }
  return s;
}

template <class PerDirection>
StageResult energy_stage(const RigidityConfig& cfg, PerDirection&& per_direction) {
  StageResult s = stage("energy_stationarity");
  double worst = 0.0;
  int theta = 0, inconclusive = 0;
  for (int k = 0; k < cfg.directions; ++k) {
    const double dir = kPi * k / cfg.directions;
    OSmallReport r = per_direction(dir);
    worst = std::max(worst, *std::max_element(r.ratio.begin(), r.ratio.end()));
    if (r.verdict == OSmallVerdict::theta) ++theta;
    if (r.verdict == OSmallVerdict::inconclusive) ++inconclusive;
    s.reports.push_back(std::move(r));
  }
  s.values = {{"directions", static_cast<double>(cfg.directions)},
              {"max_ratio", worst},
              {"theta_directions", static_cast<double>(theta)},
              {"inconclusive_directions", static_cast<double>(inconclusive)}};
  if (theta + inconclusive > 0) s.status = "fail";
  return s;
}

StageResult symmetry_stage(const GridField& v, const RigidityConfig& cfg) {
  StageResult s = stage("symmetry");
  const double tol = default_symmetry_tolerance(v);
  const auto reps = check_all_directions(v, std::max(8, cfg.directions), tol);
  double worst = 0.0;
  for (const auto& r : reps) worst = std::max(worst, r.max_mismatch);
  s.values = {{"tolerance", tol}, {"max_mismatch", worst}, {"directions", static_cast<double>(reps.size())}};
  if (!all_pass(reps)) s.status = "fail";
  return s;
}

StageResult radial_stage(const WorkingField& w, const RigidityConfig& cfg) {
  StageResult s = stage("radial");
  try {
    const RadialVerdict r = radial_verdict(w.field, w.rhs, cfg.radial_tol);
    if (!r.radial) s.status = "fail";
    if (!r.reason.empty()) s.notes.push_back({"reason", r.reason});
  } catch (const PreconditionError& e) {
    s.status = "fail";
    s.notes.push_back({"reason", e.what()});
  }
  return s;
}

}  // namespace

WorkingField build_relative_stream(const RotatingPatchProblem& problem, int n) {
  GridField u = stream_patch(problem.patch, n) + rotation_part(n, problem.omega);
  GridField rhs = shifted_rhs(patch_indicator(problem.patch, n), problem.omega);
  return finish_working(std::move(u), std::move(rhs), problem.regime(), "build_relative_stream");
}

WorkingField build_relative_stream(const RotatingSmoothProblem& problem) {
  const int n = problem.omega0.n();
  GridField u = stream_grid(problem.omega0) + rotation_part(n, problem.omega);
  GridField rhs = shifted_rhs(problem.omega0, problem.omega);
  return finish_working(std::move(u), std::move(rhs), problem.regime(), "build_relative_stream");
}

OSmallReport energy_stationarity(const RotatingPatchProblem& problem, int n, double direction,
                                 const std::vector<double>& t_grid, const OSmallPolicy& policy) {
  return energy_of(rotated_working(problem, n, direction), t_grid, policy);
}

OSmallReport energy_stationarity(const RotatingSmoothProblem& problem, double direction,
                                 const std::vector<double>& t_grid, const OSmallPolicy& policy) {
  return energy_of(rotated_working(problem, direction), t_grid, policy);
}

OSmallReport energy_stationarity(const GridField& v, const std::vector<double>& t_grid,
                                 const OSmallPolicy& policy) {
  return energy_of(v, t_grid, policy);
}

OSmallReport lemma_key1_check(const GridField& u, double c, const std::vector<double>& t_grid,
                              const OSmallPolicy& policy) {
  const GridField w = clean_nonnegative(u, "lemma_key1_check");
  const double eps = 1e-9 * std::max(1.0, std::abs(c));
  const auto base = row_functions(w);
  std::vector<std::vector<Span>> sets;
  bool any = false;
  for (const auto& r : base) {
    sets.push_back(band_spans(r, c, eps));
    any = any || !sets.back().empty();
  }
  if (!any) throw PreconditionError("lemma_key1_check: the level set {u = c} is empty");
  const CstsEngine engine(w);
  std::vector<double> q;
  for (double t : t_grid) {
    const auto rows = engine.rows(t);
    double s = 0.0;
    for (std::size_t j = 0; j < rows.size(); ++j)
      if (!sets[j].empty()) s += restricted_integral(rows[j], base[j], sets[j], true);
    q.push_back(w.h() * s);
  }
  return make_osmall_report(t_grid, std::move(q), policy);
}

OSmallReport lemma_key2_check(const GridField& u, const JordanPolygon& curve, double c,
                              const std::vector<double>& t_grid, const OSmallPolicy& policy) {
  const GridField w = clean_nonnegative(u, "lemma_key2_check");
  const double sup = w.max_value();
  const double eps = 1e-8 * std::max(1.0, sup);
  for (const auto& p : curve.vertices())
    if (std::abs(w.interpolate(p) - c) > eps) {
      std::ostringstream msg;
      msg << "lemma_key2_check: u - c = " << w.interpolate(p) - c << " at curve vertex (" << p.x1
          << ", " << p.x2 << ")";
      throw PreconditionError(msg.str());
    }
  for (int j = 0; j < w.n(); ++j)
    for (int i = 0; i < w.n(); ++i)
      if (curve.contains(w.node(i, j)) && w.at(i, j) < c - eps)
        throw PreconditionError("lemma_key2_check: u < c inside the curve");
  if (!(sup - c > eps)) throw RegularityError("lemma_key2_check: u has no level above c");
  const double threshold = regularity_threshold(w);
  for (double f : {0.25, 0.125, 0.0625}) {
    const double gamma = c + f * (sup - c);
    for (const auto& lc : level_curves(w, gamma))
      for (const auto& p : lc.points)
        if (!(norm(gradient_at(w, p)) > threshold)) {
          std::ostringstream msg;
          msg << "lemma_key2_check: level " << gamma << " above c is not regular";
          throw RegularityError(msg.str());
        }
  }

  const auto base = row_functions(w);
  std::vector<std::vector<Span>> sets;
  for (int j = 0; j < w.n(); ++j) sets.push_back(polygon_spans(curve, w.node_coord(j)));
  const CstsEngine engine(w);
  std::vector<double> q, aux;
  for (double t : t_grid) {
    const auto rows = engine.rows(t);
    double s = 0.0, a = 0.0;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (sets[j].empty()) continue;
      s += restricted_integral(rows[j], base[j], sets[j], false);
      a += restricted_integral(rows[j], base[j], sets[j], true);
    }
    q.push_back(w.h() * s);
    aux.push_back(w.h() * a);
  }
  OSmallReport rep = make_osmall_report(t_grid, std::move(q), policy);
  rep.aux = std::move(aux);
  return rep;
}

double split_decomposition_integral(const GridField& u, const PatchSpec& patch, double t) {
  const GridField d = csts_field(u, t) - u;
  double direct = 0.0, split = 0.0;
  for (int j = 0; j < u.n(); ++j)
    for (int i = 0; i < u.n(); ++i) {
      const Point2 x = u.node(i, j);
      const double v = d.at(i, j);
      if (contains(patch, x)) direct += v;
      for (const auto& c : patch.components()) {
        if (c.outer.contains(x)) split += v;
        for (const auto& h : c.holes)
          if (h.contains(x)) split -= v;
      }
    }
  const double h2 = u.h() * u.h();
  return std::abs(direct * h2 - split * h2);
}

VerdictRecord verify_patch_rigidity(const RotatingPatchProblem& problem, const RigidityConfig& cfg) {
  VerdictRecord rec;
  rec.regime = problem.regime();
  StageResult reg = stage("regime");
  reg.values = {{"omega", problem.omega},
                {"lambda_eff", std::min(0.0, problem.patch.lambda())},
                {"Lambda_eff", std::max(0.0, problem.patch.Lambda())}};
  reg.notes.push_back({"regime", to_string(rec.regime)});
  rec.stages.push_back(reg);
  if (rec.regime == Regime::window) {
    rec.verdict = Verdict::window_untested;
    return rec;
  }

  const WorkingField w = build_relative_stream(problem, cfg.n);
  if (fail(rec, working_stage(w, cfg))) return rec;

  {
    StageResult s = stage("residual");
    const ResidualReport r = rotating_residual(problem.patch, problem.omega, 1);
    s.values = {{"max_deviation", r.max_deviation}, {"tolerance", cfg.residual_tol},
                {"curves", static_cast<double>(r.curves.size())}};
    if (r.max_deviation > cfg.residual_tol) s.status = "fail";
    if (fail(rec, std::move(s))) return rec;
  }

  if (fail(rec, energy_stage(cfg, [&](double dir) {
        return energy_stationarity(problem, cfg.n, dir, cfg.t_grid, cfg.policy);
      })))
    return rec;
  if (fail(rec, symmetry_stage(w.field, cfg))) return rec;
  if (fail(rec, radial_stage(w, cfg))) return rec;

  {
    StageResult s = stage("classify");
    std::vector<PatchClass> classes;
    if (problem.plain) {
      classes.push_back(classify(*problem.plain));
    } else {
      for (const auto& t : problem.patch.terms()) classes.push_back(classify(PatchSpec({t.component})));
    }
    for (PatchClass c : classes) {
      s.notes.push_back({"class", to_string(c)});
      if (c == PatchClass::non_radial) s.status = "fail";
    }
    if (fail(rec, std::move(s))) return rec;
  }
  rec.verdict = Verdict::consistent_radial;
  return rec;
}

VerdictRecord verify_smooth_rigidity(const RotatingSmoothProblem& problem, const RigidityConfig& cfg) {
  VerdictRecord rec;
  rec.regime = problem.regime();
  const GridField& w0 = problem.omega0;
  StageResult reg = stage("regime");
  reg.values = {{"omega", problem.omega}, {"inf_omega0", w0.min_value()}, {"sup_omega0", w0.max_value()}};
  reg.notes.push_back({"regime", to_string(rec.regime)});
  rec.stages.push_back(reg);
  if (rec.regime == Regime::window) {
    rec.verdict = Verdict::window_untested;
    return rec;
  }

  const WorkingField w = build_relative_stream(problem);
  if (fail(rec, working_stage(w, cfg))) return rec;

  {
    StageResult s = stage("residual");
    double lo = INFINITY, hi = -INFINITY;
    for (int j = 0; j < w0.n(); ++j)
      for (int i = 0; i < w0.n(); ++i)
        if (w0.inside(i, j)) lo = std::min(lo, w0.at(i, j)), hi = std::max(hi, w0.at(i, j));
    double worst = 0.0;
    int tested = 0;
    for (double f : {0.25, 0.5, 0.75}) {
      const double level = lo + f * (hi - lo);
      try {
        worst = std::max(worst, smooth_residual(w0, problem.omega, level).max_deviation);
        ++tested;
      } catch (const RegularityError& e) {
        s.notes.push_back({"skipped_level", e.what()});
      }
    }
    s.values = {{"max_deviation", worst}, {"tolerance", cfg.smooth_residual_tol},
                {"levels", static_cast<double>(tested)}};
    if (tested == 0)
      s.status = "skipped";
    else if (worst > cfg.smooth_residual_tol)
      s.status = "fail";
    if (fail(rec, std::move(s))) return rec;
  }

  {
    StageResult s = stage("step_split");
    try {
      const StepApproximation step = step_approximation(w0, cfg.step_k);
      const GridField wk = sample_step(step, w0.n());
      const double t = 1.0 / 64.0;
      const GridField d = csts_field(w.field, t) - w.field;
      double i_all = 0.0, i1 = 0.0, i2 = 0.0, area = 0.0, dsup = 0.0, esup = 0.0;
      for (int j = 0; j < w0.n(); ++j)
        for (int i = 0; i < w0.n(); ++i) {
          if (!w0.inside(i, j)) continue;
          const double dv = d.at(i, j);
          i_all += w0.at(i, j) * dv;
          i1 += (w0.at(i, j) - wk.at(i, j)) * dv;
          i2 += wk.at(i, j) * dv;
          area += 1.0;
          dsup = std::max(dsup, std::abs(dv));
          if (norm2(w0.node(i, j)) < 1.0) esup = std::max(esup, std::abs(w0.at(i, j) - wk.at(i, j)));
        }
      const double h2 = w0.h() * w0.h();
      i_all *= h2, i1 *= h2, i2 *= h2, area *= h2;
      const double bound = area * esup * dsup;
      s.values = {{"t", t},          {"I", i_all},         {"I1", i1},
                  {"I2", i2},        {"I1_bound", bound},  {"sup_error", step.sup_error},
                  {"sup_bound", step.bound}, {"k", static_cast<double>(cfg.step_k)}};
      const double scale = std::max(1.0, std::abs(i1) + std::abs(i2));
      if (std::abs(i_all - i1 - i2) > 1e-12 * scale || std::abs(i1) > bound * (1.0 + 1e-12))
        s.status = "fail";
    } catch (const RegularityError& e) {
      s.status = "skipped";
      s.notes.push_back({"reason", e.what()});
    }
    if (fail(rec, std::move(s))) return rec;
  }

  if (fail(rec, energy_stage(cfg, [&](double dir) {
        return energy_stationarity(problem, dir, cfg.t_grid, cfg.policy);
      })))
    return rec;
  if (fail(rec, symmetry_stage(w.field, cfg))) return rec;
  if (fail(rec, radial_stage(w, cfg))) return rec;
  rec.verdict = Verdict::consistent_radial;
  return rec;
}

}  // namespace discsym
