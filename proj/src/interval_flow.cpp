#include "shapeflow/interval_flow.hpp"

#include <algorithm>

namespace shapeflow {

namespace {

void check_time(double t) {
  if (std::isnan(t) || t < 0.0)
    throw std::invalid_argument("flow time must be nonnegative (infinity allowed)");
}

std::vector<flow_detail::Part<double>> to_parts(const std::vector<Interval>& ivs) {
  std::vector<flow_detail::Part<double>> ps;
  ps.reserve(ivs.size());
  for (const auto& iv : ivs) ps.push_back({iv.center(), iv.length()});
  return ps;
}

std::vector<Interval> to_intervals(const std::vector<flow_detail::Part<double>>& ps) {
  std::vector<Interval> ivs;
  ivs.reserve(ps.size());
  for (const auto& p : ps) ivs.emplace_back(p.c - 0.5 * p.len, p.c + 0.5 * p.len);
  return ivs;
}

}  // namespace

IntervalUnion IntervalUnion::merged(std::vector<Interval> parts, double eps) {
  if (parts.empty()) return IntervalUnion();
  std::sort(parts.begin(), parts.end(),
            [](const Interval& x, const Interval& y) { return x.a < y.a; });
  std::vector<Interval> out;
  out.push_back(parts.front());
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i].a <= out.back().b + eps) {
      out.back().b = std::max(out.back().b, parts[i].b);
    } else {
      out.push_back(parts[i]);
    }
  }
  return IntervalUnion(std::move(out));
}

double reparametrize(double tau) {
  if (std::isnan(tau) || tau < 0.0 || tau > 1.0)
    throw std::invalid_argument("reparametrize: tau must lie in [0,1]");
  if (tau == 1.0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-tau);
}

Interval flow_interval(const Interval& iv, double t) {
  check_time(t);
  double s = std::exp(-t);  // exp(-inf) == 0
  double c = iv.center() * s;
  double half = 0.5 * iv.length();
  return Interval(c - half, c + half);
}

std::optional<double> collision_time(const Interval& i1, const Interval& i2) {
  if (!(i1.b < i2.a))
    throw std::invalid_argument("collision_time: intervals must satisfy i1.b < i2.a");
  double s = (i1.length() + i2.length()) / (2.0 * (i2.center() - i1.center()));
  if (!(s > 0.0) || s >= 1.0) return std::nullopt;
  return -std::log(s);
}

std::optional<FlowEvent> first_collision(const IntervalUnion& u) {
  const auto& ps = u.parts();
  if (ps.size() < 2) return std::nullopt;
  std::optional<FlowEvent> best;
  for (std::size_t i = 0; i + 1 < ps.size(); ++i) {
    auto t = collision_time(ps[i], ps[i + 1]);
    if (t && (!best || *t < best->t_star)) best = FlowEvent{*t, i, i + 1};
  }
  return best;
}

IntervalUnion flow_union(const IntervalUnion& u, double t) {
  check_time(t);
  double s = std::exp(-t);
  auto res = flow_detail::flow_parts<double>(to_parts(u.parts()), s, false);
  return IntervalUnion(to_intervals(res.parts));
}

LeftLimitFlow flow_union_left_limit(const IntervalUnion& u, double t) {
  check_time(t);
  double s = std::exp(-t);
  auto res = flow_detail::flow_parts<double>(to_parts(u.parts()), s, true);
  LeftLimitFlow out;
  out.parts = to_intervals(res.parts);
  out.touch_points = std::move(res.touches);
  return out;
}

bool is_subset(const IntervalUnion& a, const IntervalUnion& b, double tol) {
  for (const auto& pa : a.parts()) {
    bool covered = false;
    for (const auto& pb : b.parts()) {
      if (pb.a <= pa.a + tol && pa.b <= pb.b + tol) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

}  // namespace shapeflow
