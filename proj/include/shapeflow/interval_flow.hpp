#pragma once
// 1D continuous symmetrization flow on finite unions of disjoint open intervals.
// Each interval keeps its length while its center contracts toward the origin by
// the factor e^{-t}; two intervals merge the instant they touch and the merged
// interval continues as a single part. Collisions are handled as exact events in
// the scale variable s = e^{-t} (collision scales are linear in the endpoints).

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace shapeflow {

struct Interval {
  double a = 0.0;
  double b = 0.0;

  Interval() = default;
  Interval(double lo, double hi) : a(lo), b(hi) {
    if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
      throw std::invalid_argument("Interval: endpoints must be finite with a < b");
  }
  double length() const { return b - a; }
  double center() const { return 0.5 * (a + b); }
};

// Sorted union of pairwise disjoint open intervals. Strict disjointness
// (b_i < a_{i+1}) is an invariant: a zero-width gap is a merge, not a state.
class IntervalUnion {
 public:
  IntervalUnion() = default;

  explicit IntervalUnion(std::vector<Interval> parts) : parts_(std::move(parts)) {
    for (std::size_t i = 0; i + 1 < parts_.size(); ++i)
      if (!(parts_[i].b < parts_[i + 1].a))
        throw std::invalid_argument("IntervalUnion: parts must be sorted and strictly disjoint");
  }

  // Normalizing factory: sorts and fuses overlapping or touching intervals.
  // Gaps of width <= eps are treated as contact.
  static IntervalUnion merged(std::vector<Interval> parts, double eps = 0.0);

  const std::vector<Interval>& parts() const { return parts_; }
  std::size_t size() const { return parts_.size(); }
  bool empty() const { return parts_.empty(); }

  double total_length() const {
    double s = 0.0;
    for (const auto& p : parts_) s += p.b - p.a;
    return s;
  }

 private:
  std::vector<Interval> parts_;
};

// A collision between adjacent parts of a flowing union.
struct FlowEvent {
  double t_star = 0.0;
  std::size_t left_index = 0;
  std::size_t right_index = 0;
};

// tau in [0,1] -> t = -ln(1-tau); tau = 1 maps to t = infinity.
double reparametrize(double tau);

Interval flow_interval(const Interval& iv, double t);

// First contact time of two disjoint intervals under the common flow clock.
// Requires i1.b < i2.a.
std::optional<double> collision_time(const Interval& i1, const Interval& i2);

// Earliest collision among adjacent parts (empty when fewer than two parts).
std::optional<FlowEvent> first_collision(const IntervalUnion& u);

IntervalUnion flow_union(const IntervalUnion& u, double t);

// Left-limit evaluation: collisions happening exactly at time t are left as
// touching parts instead of being merged, and the touch coordinates reported.
struct LeftLimitFlow {
  std::vector<Interval> parts;        // sorted, touching allowed at reported points
  std::vector<double> touch_points;
};
LeftLimitFlow flow_union_left_limit(const IntervalUnion& u, double t);

// True when every part of a lies inside some part of b, with slack tol at the
// endpoints. Used for set-monotonicity checks.
bool is_subset(const IntervalUnion& a, const IntervalUnion& b, double tol = 0.0);

namespace flow_detail {

// (center, length) representation: the flow scales centers and never touches
// lengths, so total length is preserved bit-for-bit across flow and merge.
template <class R>
struct Part {
  R c, len;
};

template <class R>
struct FlowParts {
  std::vector<Part<R>> parts;
  std::vector<R> touches;  // contact coordinates when keep_touching fired
};

template <class R>
bool nearly_equal(const R& x, const R& y) {
  if constexpr (std::is_floating_point_v<R>) {
    R m = std::max(std::abs(x), std::abs(y));
    return std::abs(x - y) <= 1e-12 * m;
  } else {
    return x == y;
  }
}

// Core engine. s_target = e^{-t} in [0,1]; s_target == 0 collapses the union to
// a single centered part. Works for floating point and exact rational scalars.
template <class R>
FlowParts<R> flow_parts(std::vector<Part<R>> ps, R s_target, bool keep_touching) {
  FlowParts<R> out;
  if (ps.empty()) return out;
  if (s_target == R(0)) {
    R total = R(0);
    for (const auto& p : ps) total = total + p.len;
    out.parts = {Part<R>{R(0), total}};
    return out;
  }

  R remaining = s_target;  // scale factor still to apply, in (0,1]
  for (;;) {
    if (ps.size() == 1) {
      ps[0].c = ps[0].c * remaining;
      break;
    }
    // Relative scale at which each adjacent gap closes.
    R f_max = R(0);
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      R f = (ps[i].len + ps[i + 1].len) / (R(2) * (ps[i + 1].c - ps[i].c));
      if (f > f_max) f_max = f;
    }
    bool at_target = nearly_equal(f_max, remaining);
    if (!at_target && f_max < remaining) {
      for (auto& p : ps) p.c = p.c * remaining;
      break;
    }
    R f_evt = at_target ? remaining : f_max;
    for (auto& p : ps) p.c = p.c * f_evt;
    // Group simultaneous contacts (whole touching chains fuse in one event).
    std::vector<char> closes(ps.size() - 1, 0);
    for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
      // Gap factors recomputed pre-scale would be f/f_evt; compare against f_max
      // via actual post-scale contact instead: the pair touches when the scaled
      // gap vanishes, i.e. its factor equaled f_evt.
      R gap = (ps[i + 1].c - ps[i + 1].len / R(2)) - (ps[i].c + ps[i].len / R(2));
      R scale = ps[i].len + ps[i + 1].len;
      if constexpr (std::is_floating_point_v<R>) {
        if (gap <= 1e-12 * scale) closes[i] = 1;
      } else {
        if (gap <= R(0)) closes[i] = 1;
      }
    }
    if (at_target && keep_touching) {
      for (std::size_t i = 0; i + 1 < ps.size(); ++i)
        if (closes[i]) {
          R lo = ps[i].c + ps[i].len / R(2);
          R hi = ps[i + 1].c - ps[i + 1].len / R(2);
          out.touches.push_back((lo + hi) / R(2));
        }
      break;
    }
    std::vector<Part<R>> next;
    next.reserve(ps.size());
    for (std::size_t i = 0; i < ps.size();) {
      std::size_t j = i;
      while (j + 1 < ps.size() && closes[j]) ++j;
      if (j == i) {
        next.push_back(ps[i]);
      } else {
        R span_lo = ps[i].c - ps[i].len / R(2);
        R span_hi = ps[j].c + ps[j].len / R(2);
        R len = R(0);
        for (std::size_t k = i; k <= j; ++k) len = len + ps[k].len;
        next.push_back(Part<R>{(span_lo + span_hi) / R(2), len});
      }
      i = j + 1;
    }
    ps = std::move(next);
    if (at_target) break;
    remaining = remaining / f_evt;
    if constexpr (std::is_floating_point_v<R>) {
      if (remaining > R(1)) remaining = R(1);
    }
  }
  out.parts = std::move(ps);
  return out;
}

}  // namespace flow_detail

}  // namespace shapeflow
