#include "discsym/csts.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discsym/errors.hpp"
#include "discsym/parallel.hpp"

namespace discsym {

// ---------------------------------------------------------------------------
// Row functions

double RowFunction::operator()(double at) const {
  if (x.empty() || at < x.front() || at > x.back()) return 0.0;
  const auto it = std::upper_bound(x.begin(), x.end(), at);
  if (it == x.end()) return v.back();
  const std::size_t k = static_cast<std::size_t>(it - x.begin());
  if (k == 0) return v.front();
  const double len = x[k] - x[k - 1];
  if (len <= 0.0) return v[k];
  const double s = (at - x[k - 1]) / len;
  return v[k - 1] + s * (v[k] - v[k - 1]);
}

double RowFunction::integral() const {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) s += 0.5 * (x[k + 1] - x[k]) * (v[k] + v[k + 1]);
  return s;
}

double RowFunction::measure_above(double c) const {
  double m = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double len = x[k + 1] - x[k];
    const double a = v[k] - c;
    const double b = v[k + 1] - c;
    if (a > 0 && b > 0) m += len;
    else if (a > 0) m += len * a / (a - b);
    else if (b > 0) m += len * b / (b - a);
  }
  return m;
}

double RowFunction::slope_energy() const {
  double e = 0.0;
  for (std::size_t k = 0; k + 1 < x.size(); ++k) {
    const double len = x[k + 1] - x[k];
    if (len > 0) e += (v[k + 1] - v[k]) * (v[k + 1] - v[k]) / len;
  }
  return e;
}

namespace {

std::vector<double> merged_breaks(const RowFunction& a, const RowFunction& b) {
  std::vector<double> xs;
  xs.reserve(a.x.size() + b.x.size());
  std::merge(a.x.begin(), a.x.end(), b.x.begin(), b.x.end(), std::back_inserter(xs));
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

template <class Piece>
double integrate_pieces(const RowFunction& a, const RowFunction& b, Piece&& piece) {
  const auto xs = merged_breaks(a, b);
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < xs.size(); ++k) {
    const double x0 = xs[k], x1 = xs[k + 1];
    const double len = x1 - x0;
    if (len <= 0) continue;
    s += piece(len, a(x0), a(x1), b(x0), b(x1));
  }
  return s;
}

}  // namespace

double integrate_product(const RowFunction& a, const RowFunction& b) {
  return integrate_pieces(a, b, [](double len, double a0, double a1, double b0, double b1) {
    return len / 6.0 * (a0 * b0 + (a0 + a1) * (b0 + b1) + a1 * b1);
  });
}

double integrate_abs_difference(const RowFunction& a, const RowFunction& b) {
  return integrate_pieces(a, b, [](double len, double a0, double a1, double b0, double b1) {
    const double d0 = a0 - b0;
    const double d1 = a1 - b1;
    if ((d0 >= 0) == (d1 >= 0)) return 0.5 * len * (std::abs(d0) + std::abs(d1));
    return 0.5 * len * (d0 * d0 + d1 * d1) / (std::abs(d0) + std::abs(d1));
  });
}

double integrate_squared_difference(const RowFunction& a, const RowFunction& b) {
  return integrate_pieces(a, b, [](double len, double a0, double a1, double b0, double b1) {
    const double d0 = a0 - b0;
    const double d1 = a1 - b1;
    return len / 3.0 * (d0 * d0 + d0 * d1 + d1 * d1);
  });
}

std::vector<RowFunction> row_functions(const GridField& u) {
  const int n = u.n();
  std::vector<RowFunction> rows(n);
  for (int j = 0; j < n; ++j) {
    rows[j].x.resize(n);
    rows[j].v.resize(n);
    for (int i = 0; i < n; ++i) {
      rows[j].x[i] = u.node_coord(i);
      rows[j].v[i] = u.at(i, j);
    }
  }
  return rows;
}

double row_integral(const std::vector<RowFunction>& rows, double h) {
  double s = 0.0;
  for (const auto& r : rows) s += r.integral();
  return h * s;
}

double row_inner_product(const std::vector<RowFunction>& a, const std::vector<RowFunction>& b,
                         double h) {
  if (a.size() != b.size()) throw DomainError("row_inner_product: row count mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += integrate_product(a[j], b[j]);
  return h * s;
}

double row_l1_distance(const std::vector<RowFunction>& a, const std::vector<RowFunction>& b,
                       double h) {
  if (a.size() != b.size()) throw DomainError("row_l1_distance: row count mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += integrate_abs_difference(a[j], b[j]);
  return h * s;
}

double semi_discrete_energy(const std::vector<RowFunction>& rows, double h) {
  double e = 0.0;
  for (std::size_t j = 0; j < rows.size(); ++j) {
    e += h * rows[j].slope_energy();
    if (j + 1 < rows.size()) e += integrate_squared_difference(rows[j + 1], rows[j]) / h;
  }
  return e;
}

// ---------------------------------------------------------------------------
// Engine

namespace {

struct RowLevels {
  std::vector<double> c;                // c[0] = 0 < ... < c[top]
  std::vector<std::vector<Interval>> S;  // S[l] = {u > c[l]}, l < top, open
  std::vector<std::vector<Interval>> K;  // K[l] = {u >= c[l]}, 1 <= l <= top, closed
  std::vector<std::vector<int>> pair;    // K[l + 1] component inside S[l][k]
  int top() const { return static_cast<int>(c.size()) - 1; }
};

struct FlowedRow {
  std::vector<std::vector<Interval>> S, K;
  std::vector<unsigned char> dirty;  // per layer l: merges in S[l] or K[l + 1]
  bool infinite = false;
};

bool in_open(const std::vector<Interval>& iv, double x) {
  auto it = std::partition_point(iv.begin(), iv.end(), [x](const Interval& v) { return v.a < x; });
  if (it == iv.begin()) return false;
  --it;
  return x < it->b;
}

int find_closed(const std::vector<Interval>& iv, double x) {
  auto it = std::partition_point(iv.begin(), iv.end(), [x](const Interval& v) { return v.a <= x; });
  if (it == iv.begin()) return -1;
  --it;
  return x <= it->b ? static_cast<int>(it - iv.begin()) : -1;
}

int find_open(const std::vector<Interval>& iv, double x) {
  auto it = std::partition_point(iv.begin(), iv.end(), [x](const Interval& v) { return v.a < x; });
  if (it == iv.begin()) return -1;
  --it;
  return x < it->b ? static_cast<int>(it - iv.begin()) : -1;
}

// Components of {v > c} (strict) or {v >= c} from the row interpolant; ends
// are interpolated from the node inside the set so mirrored rows give
// mirrored intervals.
std::vector<Interval> level_set(const std::vector<double>& xs, const std::vector<double>& v, double c,
                                bool strict) {
  std::vector<Interval> out;
  const int n = static_cast<int>(v.size());
  auto in = [&](int i) { return strict ? v[i] > c : v[i] >= c; };
  auto cross = [&](int inside, int outside) {
    const double s = (v[inside] - c) / (v[inside] - v[outside]);
    return xs[inside] + s * (xs[outside] - xs[inside]);
  };
  int i = 0;
  while (i < n) {
    if (!in(i)) {
      ++i;
      continue;
    }
    int k = i;
    while (k + 1 < n && in(k + 1)) ++k;
    const double a = i == 0 ? xs[0] : cross(i, i - 1);
    const double b = k == n - 1 ? xs[n - 1] : cross(k, k + 1);
    out.push_back({a, b});
    i = k + 1;
  }
  return out;
}

RowLevels build_row(const std::vector<double>& xs, const std::vector<double>& v, int ladder) {
  RowLevels r;
  const double top = *std::max_element(v.begin(), v.end());
  if (!(top > 0.0)) return r;
  r.c.push_back(0.0);
  for (double value : v)
    if (value > 0.0) r.c.push_back(value);
  for (int k = 1; k < ladder; ++k) r.c.push_back(top * k / ladder);
  std::sort(r.c.begin(), r.c.end());
  r.c.erase(std::unique(r.c.begin(), r.c.end()), r.c.end());
  const int t = r.top();
  r.S.resize(t);
  r.K.resize(t + 1);
  r.pair.resize(t);
  for (int l = 0; l < t; ++l) r.S[l] = level_set(xs, v, r.c[l], true);
  for (int l = 1; l <= t; ++l) r.K[l] = level_set(xs, v, r.c[l], false);
  for (int l = 0; l < t; ++l) {
    r.pair[l].assign(r.S[l].size(), 0);
    std::size_t q = 0;
    for (std::size_t k = 0; k < r.S[l].size(); ++k) {
      while (q + 1 < r.K[l + 1].size() && r.K[l + 1][q].b < r.S[l][k].a) ++q;
      r.pair[l][k] = static_cast<int>(q);
    }
  }
  return r;
}

FlowedRow flow_row(const RowLevels& r, double t) {
  FlowedRow f;
  const int top = r.top();
  if (top <= 0) return f;
  f.infinite = std::isinf(t);
  f.S = r.S;
  f.K = r.K;
  std::vector<int> ms(top, 0), mk(top + 1, 0);
  for (int l = 0; l < top; ++l) ms[l] = detail::flow_intervals(f.S[l], t);
  for (int l = 1; l <= top; ++l) mk[l] = detail::flow_intervals(f.K[l], t);
  f.dirty.assign(top, 0);
  if (!f.infinite)
    for (int l = 0; l < top; ++l) f.dirty[l] = ms[l] > 0 || mk[l + 1] > 0;
  return f;
}

double evaluate(const RowLevels& r, const FlowedRow& f, double x, double t) {
  const int top = r.top();
  if (top <= 0) return 0.0;
  if (!in_open(f.S[0], x)) return 0.0;
  int lo = 0, hi = top;  // S[lo] contains x, S[hi] = {} does not
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (in_open(f.S[mid], x)) lo = mid;
    else hi = mid;
  }
  const int l = lo;
  const double c0 = r.c[l];
  const double dc = r.c[l + 1] - c0;
  if (find_closed(f.K[l + 1], x) >= 0) return r.c[l + 1];

  if (!f.dirty[l]) {
    const int k = find_open(f.S[l], x);
    if (k < 0) return c0;
    const Interval I = f.S[l][k];
    const Interval K = f.K[l + 1][f.infinite ? 0 : r.pair[l][k]];
    if (x < K.a) return c0 + dc * std::clamp((x - I.a) / (K.a - I.a), 0.0, 1.0);
    return c0 + dc * std::clamp((I.b - x) / (I.b - K.b), 0.0, 1.0);
  }

  // Merged layer: bisection on the intermediate level set.
  double s_in = 0.0, s_out = 1.0;
  std::vector<Interval> m;
  for (int it = 0; it < 52 && s_out - s_in > 1e-15; ++it) {
    const double s = 0.5 * (s_in + s_out);
    m.resize(r.S[l].size());
    for (std::size_t k = 0; k < m.size(); ++k) {
      const Interval& S = r.S[l][k];
      const Interval& K = r.K[l + 1][r.pair[l][k]];
      m[k] = {S.a + s * (K.a - S.a), S.b + s * (K.b - S.b)};
    }
    detail::flow_intervals(m, t);
    if (in_open(m, x)) s_in = s;
    else s_out = s;
  }
  return c0 + dc * 0.5 * (s_in + s_out);
}

}  // namespace

struct CstsEngine::Impl {
  int n;
  std::vector<double> xs;
  std::vector<RowLevels> rows;
  std::vector<double> source;
};

CstsEngine::CstsEngine(const GridField& u, int levels) : impl_(std::make_unique<Impl>()) {
  if (levels < 2) throw DomainError("CstsEngine: need at least 2 levels");
  const int n = u.n();
  for (double v : u.values())
    if (v < 0.0 || !std::isfinite(v))
      throw DomainError("csts: field must be non-negative and finite");
  impl_->n = n;
  impl_->source.assign(u.values().begin(), u.values().end());
  impl_->xs.resize(n);
  for (int i = 0; i < n; ++i) impl_->xs[i] = u.node_coord(i);
  impl_->rows.resize(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    const auto row = u.row(static_cast<int>(j));
    impl_->rows[j] = build_row(impl_->xs, std::vector<double>(row.begin(), row.end()), levels);
  });
}

CstsEngine::~CstsEngine() = default;
CstsEngine::CstsEngine(CstsEngine&&) noexcept = default;
CstsEngine& CstsEngine::operator=(CstsEngine&&) noexcept = default;

int CstsEngine::n() const { return impl_->n; }

GridField CstsEngine::field(double t) const {
  if (t < 0 || std::isnan(t)) throw DomainError("csts: time must be non-negative");
  const int n = impl_->n;
  if (t == 0.0) return GridField(n, impl_->source);
  std::vector<double> vals(static_cast<std::size_t>(n) * n, 0.0);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    const auto& r = impl_->rows[j];
    if (r.top() <= 0) return;
    const FlowedRow f = flow_row(r, t);
    for (int i = 0; i < n; ++i) vals[j * n + i] = evaluate(r, f, impl_->xs[i], t);
  });
  return GridField(n, std::move(vals));
}

std::vector<RowFunction> CstsEngine::rows(double t) const {
  if (t < 0 || std::isnan(t)) throw DomainError("csts: time must be non-negative");
  const int n = impl_->n;
  std::vector<RowFunction> out(n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t j) {
    const auto& r = impl_->rows[j];
    RowFunction& row = out[j];
    row.x = impl_->xs;
    if (r.top() > 0) {
      const FlowedRow f = flow_row(r, t);
      const double lo = impl_->xs.front(), hi = impl_->xs.back();
      auto add = [&](const std::vector<std::vector<Interval>>& sets) {
        for (const auto& set : sets)
          for (const auto& iv : set)
            for (double e : {iv.a, iv.b})
              if (e > lo && e < hi) row.x.push_back(e);
      };
      add(f.S);
      add(f.K);
      // u^t is not linear across merged layers; refine the gaps there.
      constexpr int kRefine = 8;
      for (int l = 0; l < r.top(); ++l) {
        if (!f.dirty[l]) continue;
        for (const auto& I : f.S[l]) {
          double from = I.a;
          auto fill = [&](double to) {
            for (int q = 1; q < kRefine; ++q) {
              const double e = from + (to - from) * q / kRefine;
              if (e > lo && e < hi) row.x.push_back(e);
            }
          };
          for (const auto& K : f.K[l + 1]) {
            if (K.b < I.a || K.a > I.b) continue;
            fill(K.a);
            from = K.b;
          }
          fill(I.b);
        }
      }
      std::sort(row.x.begin(), row.x.end());
      row.x.erase(std::unique(row.x.begin(), row.x.end()), row.x.end());
      row.v.resize(row.x.size());
      for (std::size_t k = 0; k < row.x.size(); ++k) row.v[k] = evaluate(r, f, row.x[k], t);
    } else {
      row.v.assign(row.x.size(), 0.0);
    }
  });
  return out;
}

FlowTrace CstsEngine::trace(int row, double level, double t) const {
  if (row < 0 || row >= impl_->n) throw DomainError("CstsEngine::trace: row out of range");
  const auto& r = impl_->rows[row];
  FlowTrace tr;
  if (r.top() <= 0) return tr;
  const auto it = std::upper_bound(r.c.begin(), r.c.end() - 1, level);
  const int l = std::max(0, static_cast<int>(it - r.c.begin()) - 1);
  const IntervalUnion m(r.S[l]);
  flow_set(m, t, &tr);
  return tr;
}

GridField csts_field(const GridField& u, double t, int levels) {
  if (t < 0 || std::isnan(t)) throw DomainError("csts: time must be non-negative");
  return CstsEngine(u, levels).field(t);
}

GridField steiner_field(const GridField& u) { return csts_field(u, kInfiniteTime); }

GridField csts_field_rotated(const GridField& u, double direction, double t, int levels) {
  if (direction == 0.0) return csts_field(u, t, levels);
  const GridField aligned = rotate_field(u, -direction);
  return rotate_field(csts_field(aligned, t, levels), direction);
}

double dirichlet_energy(const GridField& u) {
  const int n = u.n();
  const double h = u.h();
  auto at = [&](int i, int j) { return i < 0 || j < 0 || i >= n || j >= n ? 0.0 : u.at(i, j); };
  double e = 0.0;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      if (!u.inside(i, j)) continue;
      const double gx = (at(i + 1, j) - at(i - 1, j)) / (2 * h);
      const double gy = (at(i, j + 1) - at(i, j - 1)) / (2 * h);
      e += gx * gx + gy * gy;
    }
  return e * h * h;
}

std::pair<double, double> hardy_littlewood_check(const GridField& u, const GridField& v, double t) {
  if (!u.same_grid(v)) throw DomainError("hardy_littlewood_check: grid mismatch");
  const double h = u.h();
  const auto ut = CstsEngine(u).rows(t);
  const auto vt = CstsEngine(v).rows(t);
  return {row_inner_product(ut, vt, h), row_inner_product(row_functions(u), row_functions(v), h)};
}

}  // namespace discsym
