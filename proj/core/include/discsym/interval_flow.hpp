#pragma once

#include <limits>
#include <span>
#include <vector>

namespace discsym {

inline constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

struct Interval {
  double a;
  double b;
  double length() const { return b - a; }
  double center() const { return 0.5 * (a + b); }
};

/// Finite union of disjoint intervals a_0 < b_0 < a_1 < ... with positive gaps.
class IntervalUnion {
 public:
  IntervalUnion() = default;
  /// Throws DomainError unless sorted, non-degenerate and separated.
  explicit IntervalUnion(std::vector<Interval> intervals);

  std::span<const Interval> intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }
  bool empty() const { return intervals_.empty(); }
  double total_length() const { return total_length_; }
  /// Closed membership.
  bool contains(double x) const;
  /// Every interval of this union lies inside an interval of other, up to tol.
  bool subset_of(const IntervalUnion& other, double tol = 0.0) const;

 private:
  std::vector<Interval> intervals_;
  double total_length_ = 0.0;
};

/// Hausdorff distance between the closures of two unions (infinite if exactly
/// one is empty).
double hausdorff_distance(const IntervalUnion& a, const IntervalUnion& b);

/// Centered interval of the same total length.
IntervalUnion symmetrize_set(const IntervalUnion& m);

struct FlowTrace {
  std::vector<double> event_times;    ///< strictly increasing merge times
  std::vector<IntervalUnion> states;  ///< states[0] is the input, states[k + 1] follows event k
};

/// Continuous symmetrization: centers decay like e^{-t}, half-lengths are
/// kept, and touching intervals merge. t = kInfiniteTime gives symmetrize_set.
IntervalUnion flow_set(const IntervalUnion& m, double t, FlowTrace* trace = nullptr);

namespace detail {

/// Flow of a sorted list of intervals that may be degenerate (a == b) or touch.
/// Returns the number of merges. Results are clamped to the symmetric hull of
/// the input.
int flow_intervals(std::vector<Interval>& intervals, double t, FlowTrace* trace = nullptr);

}  // namespace detail

}  // namespace discsym
