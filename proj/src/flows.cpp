#include "shapeflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shapeflow/shapes.hpp"

namespace shapeflow {

namespace {

constexpr double pi = 3.14159265358979323846;
constexpr double quiet_nan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

FlowSample evaluate_sample(const RasterDomain& d, double tau, const SolverConfig& cfg,
                           const std::vector<double>* target_field, bool& warning) {
  FlowSample s;
  s.tau = tau;
  s.measure = d.measure();
  s.gamma_to_target = quiet_nan;
  if (d.empty()) {
    s.lambda = quiet_nan;
    s.torsion = quiet_nan;
    s.perimeter = 0.0;
    s.note = "empty domain";
    warning = true;
    return s;
  }
  s.perimeter = perimeter(d);
  try {
    FieldSolution tor = torsion(d, cfg);
    s.torsion = tor.functional_value;
    if (target_field) {
      double acc = 0.0;
      for (std::size_t q = 0; q < tor.values.size(); ++q) {
        const double dq = tor.values[q] - (*target_field)[q];
        acc += dq * dq;
      }
      s.gamma_to_target = std::sqrt(acc * d.h() * d.h());
    }
  } catch (const SolverError& e) {
    s.torsion = quiet_nan;
    s.note = e.what();
    warning = true;
  }
  try {
    s.lambda = eigen1(d, cfg).functional_value;
  } catch (const SolverError& e) {
    s.lambda = quiet_nan;
    if (!s.note.empty()) s.note += "; ";
    s.note += e.what();
    warning = true;
  }
  return s;
}

namespace {

void finish_trace(FlowTrace& tr, double jump_factor, double jump_floor_rel) {
  std::vector<double> incs;
  for (std::size_t k = 1; k < tr.samples.size(); ++k) {
    const double t0 = tr.samples[k - 1].torsion, t1 = tr.samples[k].torsion;
    const double l0 = tr.samples[k - 1].lambda, l1 = tr.samples[k].lambda;
    if (std::isfinite(t0) && std::isfinite(t1)) {
      incs.push_back(t1 - t0);
      tr.max_torsion_decrease = std::max(tr.max_torsion_decrease, t0 - t1);
    }
    if (std::isfinite(l0) && std::isfinite(l1))
      tr.max_lambda_increase = std::max(tr.max_lambda_increase, l1 - l0);
  }
  if (incs.empty() || !(jump_factor > 0.0)) return;
  std::vector<double> mags;
  for (double v : incs) mags.push_back(std::abs(v));
  std::sort(mags.begin(), mags.end());
  const double median = mags[mags.size() / 2];
  const double t_first = tr.samples.front().torsion;
  const double floor_abs = std::isfinite(t_first) ? jump_floor_rel * std::abs(t_first) : 0.0;
  const double threshold = std::max(jump_factor * median, floor_abs);
  for (std::size_t k = 1; k < tr.samples.size(); ++k) {
    const double t0 = tr.samples[k - 1].torsion, t1 = tr.samples[k].torsion;
    if (std::isfinite(t0) && std::isfinite(t1) && t1 - t0 > threshold)
      tr.jumps.push_back({tr.samples[k - 1].tau, tr.samples[k].tau, t1 - t0});
  }
}

}  // namespace

DirectionSchedule DirectionSchedule::eighth_turns() {
  DirectionSchedule s;
  for (int k = 0; k < 8; ++k) s.angles.push_back(k * pi / 8.0);
  return s;
}

FlowTrace css_path(const RasterDomain& omega0, double theta, int n_samples,
                   const SolverConfig& cfg, double jump_factor, double jump_floor_rel,
                   const RasterDomain* gamma_target) {
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  const SectionedDomain sec = section(omega0, theta);
  std::vector<double> target_field;
  if (gamma_target) {
    if (!gamma_target->grid_matches(omega0))
      throw std::invalid_argument("gamma target lives on a different grid");
    target_field = torsion(*gamma_target, cfg).values;
  }
  FlowTrace tr;
  for (int k = 0; k < n_samples; ++k) {
    const double tau = static_cast<double>(k) / (n_samples - 1);
    const RasterDomain dom = rasterize(css(sec, tau), omega0).domain;
    tr.samples.push_back(evaluate_sample(dom, tau, cfg,
                                         gamma_target ? &target_field : nullptr,
                                         tr.warning));
  }
  finish_trace(tr, jump_factor, jump_floor_rel);
  return tr;
}

RoundToBallResult round_to_ball(const RasterDomain& omega0,
                                const DirectionSchedule& schedule, double stop_tol,
                                int max_cycles, const SolverConfig& cfg) {
  if (schedule.angles.empty()) throw std::invalid_argument("empty direction schedule");
  if (max_cycles < 1) throw std::invalid_argument("need at least one cycle");
  if (!(stop_tol > 0.0)) throw std::invalid_argument("stop tolerance must be positive");
  RoundToBallResult out;
  out.ball = matched_disk(omega0);
  const double measure0 = omega0.measure();
  std::vector<double> ball_field = torsion(out.ball, cfg).values;

  RasterDomain cur = omega0;
  auto record = [&](int cycle) {
    out.trace.samples.push_back(
        evaluate_sample(cur, static_cast<double>(cycle), cfg, &ball_field, out.trace.warning));
    out.symdiff_ratio.push_back(symm_difference_measure(cur, out.ball) / measure0);
  };
  record(0);
  for (int c = 1; c <= max_cycles; ++c) {
    for (double ang : schedule.angles) cur = steiner_symmetrize(cur, ang);
    record(c);
    out.cycles = c;
    if (out.symdiff_ratio.back() <= stop_tol) {
      out.converged = true;
      break;
    }
  }
  out.final_domain = cur;
  finish_trace(out.trace, 0.0, 0.0);  // monotonicity stats only, no jump scan
  return out;
}

namespace {

void hilbert_rot(long n, long& x, long& y, long rx, long ry) {
  if (ry == 0) {
    if (rx == 1) {
      x = n - 1 - x;
      y = n - 1 - y;
    }
    std::swap(x, y);
  }
}

void hilbert_d2xy(int order, long d, long& x, long& y) {
  const long n = 1L << order;
  x = 0;
  y = 0;
  long t = d;
  for (long s = 1; s < n; s <<= 1) {
    const long rx = 1 & (t / 2);
    const long ry = 1 & (t ^ rx);
    hilbert_rot(s, x, y, rx, ry);
    x += s * rx;
    y += s * ry;
    t /= 4;
  }
}

}  // namespace

std::vector<PinVertex> hilbert_visit_sequence(int nx, int ny, int order) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("vertex lattice needs a positive grid");
  if (order < 1 || order > 14) throw std::invalid_argument("curve order out of range");
  const long side = 1L << order;
  if (side < std::max(nx, ny) + 1)
    throw std::invalid_argument("curve order too small for the vertex lattice");
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(nx + 1) * (ny + 1), 0);
  std::vector<PinVertex> seq;
  seq.reserve(seen.size());
  const double sx = side > 1 ? static_cast<double>(nx) / (side - 1) : 0.0;
  const double sy = side > 1 ? static_cast<double>(ny) / (side - 1) : 0.0;
  for (long d = 0; d < side * side; ++d) {
    long x, y;
    hilbert_d2xy(order, d, x, y);
    const int vi = static_cast<int>(std::lround(x * sx));
    const int vj = static_cast<int>(std::lround(y * sy));
    const std::size_t key = static_cast<std::size_t>(vj) * (nx + 1) + vi;
    if (!seen[key]) {
      seen[key] = 1;
      seq.push_back({vi, vj});
    }
  }
  return seq;
}

RepairResult repair_path(const RasterDomain& minus, const RasterDomain& plus,
                         int curve_order, int n_samples, const SolverConfig& cfg,
                         std::optional<PinVertex> anchor) {
  if (!minus.grid_matches(plus)) throw std::invalid_argument("domains live on different grids");
  if (n_samples < 2) throw std::invalid_argument("need at least two samples");
  if (!plus.cracks().empty() || !plus.pins().empty())
    throw std::invalid_argument("healed endpoint must carry no obstructions");
  const int nx = minus.nx(), ny = minus.ny();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i)
      if (minus.masked(i, j) && !plus.masked(i, j))
        throw std::invalid_argument("obstructed mask must be contained in the healed mask");

  std::vector<PinVertex> seq = hilbert_visit_sequence(nx, ny, curve_order);
  const long total = static_cast<long>(seq.size());

  // Start the drawing at a harmless interior vertex of `minus`.
  auto is_minus_interior = [&](const PinVertex& v) {
    for (int dj = -1; dj <= 0; ++dj)
      for (int di = -1; di <= 0; ++di)
        if (!minus.masked(v.i + di, v.j + dj)) return false;
    for (const PinVertex& p : minus.pins())
      if (p == v) return false;
    for (const CrackEdge& e : minus.cracks()) {
      const PinVertex a = e.axis == 0 ? PinVertex{e.i + 1, e.j} : PinVertex{e.i, e.j + 1};
      const PinVertex b = e.axis == 0 ? PinVertex{e.i + 1, e.j + 1} : PinVertex{e.i + 1, e.j + 1};
      if (a == v || b == v) return false;
    }
    return true;
  };
  std::optional<PinVertex> start = anchor;
  if (!start) {
    for (int j = 0; j <= ny && !start; ++j)
      for (int i = 0; i <= nx && !start; ++i)
        if (is_minus_interior({i, j})) start = PinVertex{i, j};
  }
  if (start) {
    auto it = std::find(seq.begin(), seq.end(), *start);
    if (it != seq.end()) std::rotate(seq.begin(), it, seq.end());
  }

  std::vector<long> visit_index(static_cast<std::size_t>(nx + 1) * (ny + 1), 0);
  for (long q = 0; q < total; ++q)
    visit_index[static_cast<std::size_t>(seq[q].j) * (nx + 1) + seq[q].i] = q;
  auto vis = [&](int i, int j, long m) {
    return visit_index[static_cast<std::size_t>(j) * (nx + 1) + i] < m;
  };

  auto domain_at = [&](long m) {
    if (m <= 1) {
      RasterDomain d = plus;
      return d;
    }
    RasterDomain d(nx, ny, minus.h());
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (!plus.masked(i, j)) continue;
        if (!minus.masked(i, j) && vis(i, j, m) && vis(i + 1, j, m) && vis(i, j + 1, m) &&
            vis(i + 1, j + 1, m))
          continue;  // fully drawn-over: removed
        d.set_cell(i, j, true);
      }
    for (const CrackEdge& e : minus.cracks()) {
      const bool both = e.axis == 0 ? (vis(e.i + 1, e.j, m) && vis(e.i + 1, e.j + 1, m))
                                    : (vis(e.i, e.j + 1, m) && vis(e.i + 1, e.j + 1, m));
      if (both) d.add_crack(e);
    }
    for (const PinVertex& p : minus.pins())
      if (vis(p.i, p.j, m)) d.add_pin(p);
    // Transient pins along the drawn curve inside the not-yet-removed new cells.
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i) {
        if (!vis(i, j, m)) continue;
        bool touches_minus = false, touches_new = false;
        for (int dj = -1; dj <= 0; ++dj)
          for (int di = -1; di <= 0; ++di) {
            if (minus.masked(i + di, j + dj)) touches_minus = true;
            else if (d.masked(i + di, j + dj)) touches_new = true;
          }
        if (!touches_minus && touches_new) d.add_pin({i, j});
      }
    return d;
  };

  std::vector<double> plus_field = torsion(plus, cfg).values;
  RepairResult out;
  for (int k = 0; k < n_samples; ++k) {
    const double tau = static_cast<double>(k) / (n_samples - 1);
    const long m = std::lround((1.0 - tau) * total);
    const RasterDomain dom = domain_at(m);
    if (k == 0) out.start = dom;
    if (k == n_samples - 1) out.finish = dom;
    out.trace.samples.push_back(
        evaluate_sample(dom, tau, cfg, &plus_field, out.trace.warning));
  }
  finish_trace(out.trace, 0.0, 0.0);
  for (std::size_t k = 1; k < out.trace.samples.size(); ++k) {
    const double t0 = out.trace.samples[k - 1].torsion;
    const double t1 = out.trace.samples[k].torsion;
    if (std::isfinite(t0) && std::isfinite(t1))
      out.max_increment = std::max(out.max_increment, t1 - t0);
  }
  return out;
}

RasterDomain remove_fractures(const RasterDomain& d) {
  RasterDomain out = d;
  out.clear_obstructions();
  return out;
}

}  // namespace shapeflow
