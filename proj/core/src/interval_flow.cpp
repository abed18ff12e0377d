#include "discsym/interval_flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "discsym/errors.hpp"

namespace discsym {

namespace {
constexpr double kMergeGap = 1e-13;
}

IntervalUnion::IntervalUnion(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    const auto& iv = intervals_[k];
    if (!std::isfinite(iv.a) || !std::isfinite(iv.b) || !(iv.a < iv.b))
      throw DomainError("IntervalUnion: interval " + std::to_string(k) + " is empty or not finite");
    if (k > 0 && !(intervals_[k - 1].b < iv.a))
      throw DomainError("IntervalUnion: intervals " + std::to_string(k - 1) + " and " +
                        std::to_string(k) + " are unsorted or overlapping");
    total_length_ += iv.length();
  }
}

bool IntervalUnion::contains(double x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.a; });
  if (it == intervals_.begin()) return false;
  --it;
  return x <= it->b;
}

bool IntervalUnion::subset_of(const IntervalUnion& other, double tol) const {
  for (const auto& iv : intervals_) {
    bool covered = false;
    for (const auto& ov : other.intervals_)
      if (ov.a - tol <= iv.a && iv.b <= ov.b + tol) {
        covered = true;
        break;
      }
    if (!covered) return false;
  }
  return true;
}

namespace {

double distance_to(const IntervalUnion& m, double x) {
  double d = INFINITY;
  for (const auto& iv : m.intervals()) {
    if (x >= iv.a && x <= iv.b) return 0.0;
    d = std::min({d, std::abs(x - iv.a), std::abs(x - iv.b)});
  }
  return d;
}

// One-sided: sup over x in a of dist(x, b); attained at endpoints of a or at
// gap midpoints of b inside a.
double one_sided(const IntervalUnion& a, const IntervalUnion& b) {
  double d = 0.0;
  for (const auto& iv : a.intervals()) {
    d = std::max({d, distance_to(b, iv.a), distance_to(b, iv.b)});
    const auto bi = b.intervals();
    for (std::size_t k = 0; k + 1 < bi.size(); ++k) {
      const double mid = 0.5 * (bi[k].b + bi[k + 1].a);
      if (mid > iv.a && mid < iv.b) d = std::max(d, distance_to(b, mid));
    }
  }
  return d;
}

}  // namespace

double hausdorff_distance(const IntervalUnion& a, const IntervalUnion& b) {
  if (a.empty() && b.empty()) return 0.0;
  if (a.empty() || b.empty()) return INFINITY;
  return std::max(one_sided(a, b), one_sided(b, a));
}

IntervalUnion symmetrize_set(const IntervalUnion& m) {
  if (m.empty()) return {};
  const double half = 0.5 * m.total_length();
  return IntervalUnion({{-half, half}});
}

namespace detail {

int flow_intervals(std::vector<Interval>& iv, double t, FlowTrace* trace) {
  if (t < 0 || std::isnan(t)) throw DomainError("flow_set: time must be non-negative");
  if (iv.empty() || t == 0.0) return 0;
  double hull = 0.0;
  for (const auto& v : iv) hull = std::max({hull, std::abs(v.a), std::abs(v.b)});

  struct State {
    double c, r;
  };
  std::vector<State> s(iv.size());
  for (std::size_t k = 0; k < iv.size(); ++k) s[k] = {iv[k].center(), 0.5 * iv[k].length()};
  int merges = 0;

  if (std::isinf(t)) {
    double len = 0.0;
    for (const auto& v : s) len += 2.0 * v.r;
    merges = static_cast<int>(s.size()) - 1;
    iv.assign(1, {-0.5 * len, 0.5 * len});
    return merges;
  }

  auto snapshot = [&](double time) {
    if (!trace) return;
    std::vector<Interval> out;
    for (const auto& v : s) out.push_back({v.c - v.r, v.c + v.r});
    if (trace->states.empty()) {
      trace->states.emplace_back(std::move(out));
    } else {
      trace->event_times.push_back(time);
      trace->states.emplace_back(std::move(out));
    }
  };
  snapshot(0.0);

  auto merge_touching = [&](double now) {
    bool merged = false;
    for (std::size_t k = 0; k + 1 < s.size();) {
      const double gap = (s[k + 1].c - s[k + 1].r) - (s[k].c + s[k].r);
      if (gap <= kMergeGap) {
        const double left = s[k].c - s[k].r;
        const double right = s[k + 1].c + s[k + 1].r;
        s[k] = {0.5 * (left + right), s[k].r + s[k + 1].r};
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        ++merges;
        merged = true;
      } else {
        ++k;
      }
    }
    if (merged) snapshot(now);
  };

  double now = 0.0;
  merge_touching(now);
  while (true) {
    double next = INFINITY;
    for (std::size_t k = 0; k + 1 < s.size(); ++k) {
      const double dc = s[k + 1].c - s[k].c;
      const double rr = s[k].r + s[k + 1].r;
      if (rr > 0.0) next = std::min(next, std::log(dc / rr));
    }
    const double step = std::min(next, t - now);
    const double decay = std::exp(-step);
    for (auto& v : s) v.c *= decay;
    now += step;
    if (next > step || now >= t) {
      // Reaching t exactly at a touch still merges the touching pair.
      merge_touching(now);
      break;
    }
    merge_touching(now);
  }

  iv.clear();
  for (const auto& v : s)
    iv.push_back({std::clamp(v.c - v.r, -hull, hull), std::clamp(v.c + v.r, -hull, hull)});
  return merges;
}

}  // namespace detail

IntervalUnion flow_set(const IntervalUnion& m, double t, FlowTrace* trace) {
  if (t < 0 || std::isnan(t)) throw DomainError("flow_set: time must be non-negative");
  if (std::isinf(t)) {
    auto out = symmetrize_set(m);
    if (trace) {
      trace->states = {m, out};
      trace->event_times = {kInfiniteTime};
    }
    return out;
  }
  std::vector<Interval> iv(m.intervals().begin(), m.intervals().end());
  detail::flow_intervals(iv, t, trace);
  if (trace && trace->states.empty()) trace->states.push_back(m);
  return IntervalUnion(std::move(iv));
}

}  // namespace discsym
