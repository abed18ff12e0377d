#include "discsym/csts_properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "discsym/csts.hpp"
#include "discsym/grid_field.hpp"
#include "discsym/interval_flow.hpp"

namespace discsym {

namespace {

struct Tally {
  PropertyResult r;
  Tally(std::string name, double tol) { r.name = std::move(name), r.tolerance = tol; }
  void add(double violation) {
    ++r.cases;
    r.worst = std::max(r.worst, violation);
    if (!(violation <= r.tolerance)) r.pass = false;
  }
};

IntervalUnion random_union(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 6);
  std::uniform_real_distribution<double> len(0.05, 1.0), gap(0.01, 1.0), start(-4.0, 0.0);
  std::vector<Interval> iv;
  double x = start(rng);
  for (int k = count(rng); k > 0; --k) {
    const double a = x, b = a + len(rng);
    iv.push_back({a, b});
    x = b + gap(rng);
  }
  return IntervalUnion(std::move(iv));
}

// Union of m's intervals widened by random margins, merged where they meet.
IntervalUnion enlarge(const IntervalUnion& m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> grow(0.0, 0.3);
  std::vector<Interval> iv;
  for (const auto& i : m.intervals()) {
    Interval w{i.a - grow(rng), i.b + grow(rng)};
    if (!iv.empty() && w.a <= iv.back().b)
      iv.back().b = std::max(iv.back().b, w.b);
    else
      iv.push_back(w);
  }
  return IntervalUnion(std::move(iv));
}

// Largest distance by which an interval of a sticks out of the interval of b
// containing its centre (its full length if none does).
double excess(const IntervalUnion& a, const IntervalUnion& b) {
  double worst = 0.0;
  for (const auto& i : a.intervals()) {
    double e = i.length();
    for (const auto& j : b.intervals())
      if (j.a <= i.center() && i.center() <= j.b) e = std::max({0.0, j.a - i.a, i.b - j.b});
    worst = std::max(worst, e);
  }
  return worst;
}

double random_time(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return -std::log(1.0 - u(rng)) * 0.8;
}

// Sum of cones and quartic bumps supported in the disc of radius 0.85.
GridField random_field(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(1, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  struct Bump {
    double x1, x2, rho, amp;
    bool cone;
  };
  std::vector<Bump> bumps;
  for (int k = count(rng); k > 0; --k) {
    const double rho = 0.15 + 0.3 * u(rng);
    const double reach = 0.85 - rho;
    const double r = reach * std::sqrt(u(rng)), phi = 2.0 * M_PI * u(rng);
    bumps.push_back({r * std::cos(phi), r * std::sin(phi), rho, 0.2 + u(rng), u(rng) < 0.5});
  }
  return GridField::sample(n, [&](Point2 x) {
    double v = 0.0;
    for (const auto& b : bumps) {
      const double d = std::hypot(x.x1 - b.x1, x.x2 - b.x2);
      if (d >= b.rho) continue;
      const double s = 1.0 - (d / b.rho) * (d / b.rho);
      v += b.amp * (b.cone ? 1.0 - d / b.rho : s * s);
    }
    return v;
  });
}

// Radius of the support of the row interpolants.
double support_radius(const GridField& u) {
  double R = 0.0;
  const int n = u.n();
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (u.at(i, j) <= 0.0) continue;
      const double y = u.node_coord(j);
      const double xl = u.node_coord(std::max(i - 1, 0)), xr = u.node_coord(std::min(i + 1, n - 1));
      R = std::max({R, std::hypot(xl, y), std::hypot(xr, y)});
    }
  return R;
}

double max_abs_difference(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.values()[k] - b.values()[k]));
  return m;
}

}  // namespace

std::vector<PropertyResult> interval_properties(std::uint64_t seed, int cases) {
  std::mt19937_64 rng(seed);
  Tally equi("set equimeasurability", 1e-12), mono("set monotonicity", 1e-12),
      semi("set semigroup", 1e-10), interval("interval preservation", 0.0),
      limit("infinite-time limit", 0.0);
  for (int c = 0; c < cases; ++c) {
    const IntervalUnion m = random_union(rng);
    const double s = random_time(rng), t = random_time(rng);
    const IntervalUnion mt = flow_set(m, t);
    equi.add(std::abs(mt.total_length() - m.total_length()));
    mono.add(excess(mt, flow_set(enlarge(m, rng), t)));
    semi.add(hausdorff_distance(flow_set(flow_set(m, s), t), flow_set(m, s + t)));
    const IntervalUnion one({m.intervals().front()});
    interval.add(std::abs(static_cast<double>(flow_set(one, t).size()) - 1.0));
    const IntervalUnion inf = flow_set(m, kInfiniteTime), sym = symmetrize_set(m);
    limit.add(hausdorff_distance(inf, sym));
  }
  return {equi.r, mono.r, semi.r, interval.r, limit.r};
}

std::vector<PropertyResult> field_properties(std::uint64_t seed, int cases, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double h = 2.0 / (n - 1);
  Tally equi("field equimeasurability (cells)", 3.0), mono("field monotonicity", 1e-10),
      comm("commutation with min(u, c) (cells)", 1.0), fixed("radial fixed point", 1e-12),
      cav("Cavalieri (relative)", 1e-6), cont("L1 continuity in t", 1.0), l1("L1 nonexpansivity", 1e-10),
      hl("Hardy-Littlewood", 1e-10), lip("Lipschitz preservation (ratio)", 1.05),
      supp("support containment", 0.0), sup("sup bound L R t", 1e-10),
      energy("energy monotonicity", 1e-10);

  for (int c = 0; c < cases; ++c) {
    const GridField u = random_field(n, rng);
    const GridField v = random_field(n, rng);
    const GridField w = u + random_field(n, rng);
    const double t = random_time(rng);
    const CstsEngine eu(u), ev(v), ew(w);
    const GridField ut = eu.field(t);
    const auto base = row_functions(u);
    const auto rows_t = eu.rows(t);

    double eq = 0.0;
    for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const double level = q * u.max_value();
      for (int j = 0; j < n; ++j)
        eq = std::max(eq, std::abs(rows_t[j].measure_above(level) - base[j].measure_above(level)) / h);
    }
    equi.add(eq);

    const GridField wt = ew.field(t);
    double mv = 0.0;
    for (std::size_t k = 0; k < ut.size(); ++k) mv = std::max(mv, ut.values()[k] - wt.values()[k]);
    mono.add(mv);

    const double cap = (0.3 + 0.4 * unit(rng)) * u.max_value();
    GridField clipped = u;
    for (double& x : clipped.values()) x = std::min(x, cap);
    GridField phi_ut = ut;
    for (double& x : phi_ut.values()) x = std::min(x, cap);
    const double lu = u.discrete_lipschitz();
    comm.add(max_abs_difference(phi_ut, csts_field(clipped, t)) / (lu * h));

    const double rad = 0.3 + 0.5 * unit(rng);
    const GridField radial = GridField::sample(n, [&](Point2 x) {
      const double d = norm(x);
      return d < rad ? 1.0 - d / rad : 0.0;
    });
    fixed.add(max_abs_difference(csts_field(radial, t), radial));

    const double m1 = row_integral(base, h), m1_t = row_integral(rows_t, h);
    const double m2 = row_inner_product(base, base, h), m2_t = row_inner_product(rows_t, rows_t, h);
    cav.add(std::max(std::abs(m1_t - m1) / std::max(1.0, m1), std::abs(m2_t - m2) / std::max(1.0, m2)));

    const double R = support_radius(u);
    double worst_cont = 0.0;
    for (int k = 2; k <= 8; ++k) {
      const double dt = std::ldexp(1.0, -k);
      const double d = row_l1_distance(eu.rows(t + dt), rows_t, h);
      worst_cont = std::max(worst_cont, d / (4.0 * lu * R * dt + 1e-10));
    }
    cont.add(worst_cont);

    const auto rows_v = row_functions(v), rows_vt = ev.rows(t);
    l1.add(std::max(0.0, row_l1_distance(rows_t, rows_vt, h) - row_l1_distance(base, rows_v, h)));

    const auto [sym, plain] = hardy_littlewood_check(u, v, t);
    hl.add(std::max(0.0, plain - sym));

    lip.add(ut.discrete_lipschitz() / lu);

    double outside = 0.0;
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        if (ut.at(i, j) > 0.0) outside = std::max(outside, norm(ut.node(i, j)) - R);
    supp.add(std::max(0.0, outside));

    sup.add(std::max(0.0, max_abs_difference(ut, u) - lu * R * t));

    energy.add(std::max(0.0, semi_discrete_energy(rows_t, h) - semi_discrete_energy(base, h)));
  }
  return {equi.r, mono.r, comm.r, fixed.r, cav.r, cont.r, l1.r, hl.r, lip.r, supp.r, sup.r, energy.r};
}

bool all_pass(const std::vector<PropertyResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.pass; });
}

}  // namespace discsym
