#include "shapeflow/sections.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace shapeflow {

namespace {

constexpr double pi = 3.14159265358979323846;

void check_theta(double theta) {
  if (!std::isfinite(theta) || theta < 0.0 || theta >= pi)
    throw std::invalid_argument("theta must lie in [0, pi)");
}

// Distinguishes the two axis-aligned section directions; anything else cannot
// carry slits onto the grid.
enum class AxisCase { along_y, along_x, oblique };

AxisCase axis_case(double theta) {
  const double tol = 1e-12;
  if (std::abs(theta) <= tol) return AxisCase::along_y;
  if (std::abs(theta - pi / 2) <= tol) return AxisCase::along_x;
  return AxisCase::oblique;
}

struct Frame {
  double cx, cy;    // box center
  double ec_x, ec_y;  // column axis
  double es_x, es_y;  // section direction
};

Frame make_frame(const RasterDomain& d, double theta) {
  Frame f;
  f.cx = d.center_x();
  f.cy = d.center_y();
  f.ec_x = std::cos(theta);
  f.ec_y = std::sin(theta);
  f.es_x = -f.ec_y;
  f.es_y = f.ec_x;
  // Snap the axis-aligned cases so aligned geometry stays bitwise exact.
  switch (axis_case(theta)) {
    case AxisCase::along_y:
      f.ec_x = 1.0; f.ec_y = 0.0; f.es_x = 0.0; f.es_y = 1.0;
      break;
    case AxisCase::along_x:
      f.ec_x = 0.0; f.ec_y = 1.0; f.es_x = -1.0; f.es_y = 0.0;
      break;
    case AxisCase::oblique:
      break;
  }
  return f;
}

double proj_c(const Frame& f, double x, double y) {
  return (x - f.cx) * f.ec_x + (y - f.cy) * f.ec_y;
}
double proj_s(const Frame& f, double x, double y) {
  return (x - f.cx) * f.es_x + (y - f.cy) * f.es_y;
}

// s-range of the scanline through column center c_k inside cell (i,j), via the
// two axis slabs of the cell. Returns false when the line misses the cell.
bool line_cell_range(const Frame& f, double c_k, double h, int i, int j,
                     double& s_lo, double& s_hi) {
  const double ox = f.cx + c_k * f.ec_x;
  const double oy = f.cy + c_k * f.ec_y;
  double lo = -1e300, hi = 1e300;
  const double bounds[2][2] = {{i * h, (i + 1) * h}, {j * h, (j + 1) * h}};
  const double origin[2] = {ox, oy};
  const double dir[2] = {f.es_x, f.es_y};
  for (int ax = 0; ax < 2; ++ax) {
    if (dir[ax] == 0.0) {
      if (origin[ax] < bounds[ax][0] || origin[ax] > bounds[ax][1]) return false;
      continue;
    }
    double a = (bounds[ax][0] - origin[ax]) / dir[ax];
    double b = (bounds[ax][1] - origin[ax]) / dir[ax];
    if (a > b) std::swap(a, b);
    lo = std::max(lo, a);
    hi = std::min(hi, b);
  }
  if (!(lo < hi)) return false;
  s_lo = lo;
  s_hi = hi;
  return true;
}

}  // namespace

RasterDomain::RasterDomain(int nx, int ny, double h) : nx_(nx), ny_(ny), h_(h) {
  if (nx <= 0 || ny <= 0) throw std::invalid_argument("grid dimensions must be positive");
  if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("cell size must be positive");
  mask_.assign(static_cast<std::size_t>(nx) * ny, 0);
}

void RasterDomain::set_cell(int i, int j, bool on) {
  if (!in_grid(i, j)) throw std::out_of_range("cell outside grid");
  mask_[idx(i, j)] = on ? 1 : 0;
}

long RasterDomain::cell_count() const {
  long n = 0;
  for (auto v : mask_) n += v;
  return n;
}

void RasterDomain::add_crack(const CrackEdge& e) {
  const int ni = e.axis == 0 ? e.i + 1 : e.i;
  const int nj = e.axis == 0 ? e.j : e.j + 1;
  if (e.axis != 0 && e.axis != 1) throw std::invalid_argument("crack axis must be 0 or 1");
  if (!masked(e.i, e.j) || !masked(ni, nj))
    throw std::invalid_argument("crack edge must separate two masked cells");
  auto it = std::lower_bound(cracks_.begin(), cracks_.end(), e);
  if (it != cracks_.end() && *it == e) return;
  cracks_.insert(it, e);
}

void RasterDomain::add_pin(const PinVertex& v) {
  if (v.i < 0 || v.i > nx_ || v.j < 0 || v.j > ny_)
    throw std::invalid_argument("pin vertex outside grid");
  bool touches = false;
  for (int dj = -1; dj <= 0 && !touches; ++dj)
    for (int di = -1; di <= 0 && !touches; ++di)
      if (masked(v.i + di, v.j + dj)) touches = true;
  if (!touches) throw std::invalid_argument("pin vertex must touch a masked cell");
  auto it = std::lower_bound(pins_.begin(), pins_.end(), v);
  if (it != pins_.end() && *it == v) return;
  pins_.insert(it, v);
}

void RasterDomain::clear_obstructions() {
  cracks_.clear();
  pins_.clear();
}

bool RasterDomain::grid_matches(const RasterDomain& o) const {
  return nx_ == o.nx_ && ny_ == o.ny_ && h_ == o.h_;
}

SectionedDomain section(const RasterDomain& d, double theta, int supersample) {
  check_theta(theta);
  if (supersample < 1) throw std::invalid_argument("supersample must be >= 1");
  const Frame f = make_frame(d, theta);
  const double h = d.h();
  const double dx = h / supersample;
  // Half-extent of the box projected on the column axis.
  const double half =
      0.5 * (d.box_width() * std::abs(f.ec_x) + d.box_height() * std::abs(f.ec_y));

  SectionedDomain out;
  out.theta = theta;
  out.dx = dx;
  out.x_lo = -half;
  const int n_cols = static_cast<int>(std::ceil(2.0 * half / dx - 1e-9));
  out.columns.assign(std::max(n_cols, 0), IntervalUnion{});

  std::vector<std::vector<Interval>> buckets(out.columns.size());
  for (int j = 0; j < d.ny(); ++j) {
    for (int i = 0; i < d.nx(); ++i) {
      if (!d.masked(i, j)) continue;
      // Column range spanned by this cell's projection.
      double cs[4] = {proj_c(f, i * h, j * h), proj_c(f, (i + 1) * h, j * h),
                      proj_c(f, i * h, (j + 1) * h), proj_c(f, (i + 1) * h, (j + 1) * h)};
      double cmin = std::min(std::min(cs[0], cs[1]), std::min(cs[2], cs[3]));
      double cmax = std::max(std::max(cs[0], cs[1]), std::max(cs[2], cs[3]));
      int k_lo = std::max(0, static_cast<int>(std::floor((cmin - out.x_lo) / dx)) - 1);
      int k_hi = std::min(n_cols - 1, static_cast<int>(std::floor((cmax - out.x_lo) / dx)) + 1);
      for (int k = k_lo; k <= k_hi; ++k) {
        const double c_k = out.x_lo + (k + 0.5) * dx;
        double s_lo, s_hi;
        if (line_cell_range(f, c_k, h, i, j, s_lo, s_hi))
          buckets[k].push_back(Interval(s_lo, s_hi));
      }
    }
  }
  for (std::size_t k = 0; k < buckets.size(); ++k)
    if (!buckets[k].empty())
      out.columns[k] = IntervalUnion::merged(std::move(buckets[k]), 1e-9 * h);
  return out;
}

SectionedDomain css(const SectionedDomain& s, double tau) {
  const double t = reparametrize(tau);
  SectionedDomain out = s;
  for (auto& col : out.columns)
    if (!col.empty()) col = flow_union(col, t);
  return out;
}

CssLeftLimit css_left_limit(const SectionedDomain& s, double tau) {
  const double t = reparametrize(tau);
  CssLeftLimit out;
  out.domain = s;
  for (std::size_t k = 0; k < s.columns.size(); ++k) {
    if (s.columns[k].empty()) continue;
    LeftLimitFlow lf = flow_union_left_limit(s.columns[k], t);
    out.domain.columns[k] = IntervalUnion::merged(std::move(lf.parts), 0.0);
    for (double sc : lf.touch_points)
      out.slits.push_back({static_cast<int>(k), sc});
  }
  return out;
}

Rasterized rasterize(const SectionedDomain& s, const RasterDomain& grid_template,
                     const std::vector<SlitMark>* slits) {
  const Frame f = make_frame(grid_template, s.theta);
  const double h = grid_template.h();
  Rasterized out;
  out.domain = RasterDomain(grid_template.nx(), grid_template.ny(), h);
  const AxisCase ac = axis_case(s.theta);
  if (slits && !slits->empty() && ac == AxisCase::oblique)
    throw std::invalid_argument("slit rasterization requires axis-aligned sections");
  if (s.columns.empty()) return out;
  if (!(s.dx > 0.0)) throw std::invalid_argument("sectioned domain has no column width");

  if (ac == AxisCase::oblique) {
    // Oblique angles: per-column cell quotas fragment the mask, because the
    // centers available to one column are spaced wider than h along the
    // section direction (up to h*sqrt(2) on the diagonal), so quota filling
    // strings cells into corner-connected needles.  Instead paint the region
    // itself: rank every cell by the signed distance from its center to the
    // column's section set and keep exactly round(measure / h^2) cells, so the
    // global cell count matches the sectioned measure while the mask stays a
    // solid discretization of the region between the section envelopes.
    double sect_measure = 0.0;
    for (const IntervalUnion& col : s.columns) sect_measure += col.total_length() * s.dx;
    const long target = std::lround(sect_measure / (h * h));
    struct Scored {
      double dist;
      int j, i;
    };
    std::vector<Scored> scored;
    scored.reserve(static_cast<std::size_t>(grid_template.nx()) * grid_template.ny());
    for (int j = 0; j < grid_template.ny(); ++j) {
      for (int i = 0; i < grid_template.nx(); ++i) {
        const double x = grid_template.cell_center_x(i);
        const double y = grid_template.cell_center_y(j);
        const double c = proj_c(f, x, y);
        const int k = static_cast<int>(std::floor((c - s.x_lo) / s.dx));
        if (k < 0 || k >= static_cast<int>(s.columns.size())) continue;
        const IntervalUnion& col = s.columns[k];
        if (col.empty()) continue;
        const double sc = proj_s(f, x, y);
        double dist = std::numeric_limits<double>::infinity();
        for (const Interval& p : col.parts()) {
          if (sc < p.a)
            dist = std::min(dist, p.a - sc);
          else if (sc > p.b)
            dist = std::min(dist, sc - p.b);
          else {
            dist = std::max(p.a - sc, sc - p.b);  // inside: negative depth
            break;
          }
        }
        scored.push_back({dist, j, i});
      }
    }
    std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
      if (a.dist != b.dist) return a.dist < b.dist;
      if (a.j != b.j) return a.j < b.j;
      return a.i < b.i;
    });
    const long take = std::min<long>(target, static_cast<long>(scored.size()));
    for (long q = 0; q < take; ++q) out.domain.set_cell(scored[q].i, scored[q].j, true);
    out.column_deficit = target - take;
    out.measure_error = std::abs(take * h * h - sect_measure);
    return out;
  }

  // Bin cell centers by column.
  struct Cell {
    int i, j;
    double sc;   // section coordinate of the center
    bool taken = false;
  };
  std::vector<std::vector<Cell>> buckets(s.columns.size());
  for (int j = 0; j < grid_template.ny(); ++j) {
    for (int i = 0; i < grid_template.nx(); ++i) {
      const double x = grid_template.cell_center_x(i);
      const double y = grid_template.cell_center_y(j);
      const double c = proj_c(f, x, y);
      const int k = static_cast<int>(std::floor((c - s.x_lo) / s.dx));
      if (k < 0 || k >= static_cast<int>(s.columns.size())) continue;
      buckets[k].push_back({i, j, proj_s(f, x, y)});
    }
  }

  // Greedy claim of `want` untaken cells for the part [a,b]; cells must
  // overlap the part unless `any_near` allows merely-nearby ones.
  auto take_from = [&](std::vector<std::size_t>& order_buf, auto& bucket, double a,
                       double b, double mid, long want, bool any_near) {
    order_buf.clear();
    std::vector<std::pair<std::pair<double, double>, std::size_t>> rank;
    for (std::size_t q = 0; q < bucket.size(); ++q) {
      if (bucket[q].taken) continue;
      const double lo = bucket[q].sc - 0.5 * h;
      const double hi = bucket[q].sc + 0.5 * h;
      const double overlap = std::min(hi, b) - std::max(lo, a);
      if (overlap <= 1e-12 * h) {
        if (!any_near || std::abs(bucket[q].sc - mid) > 0.5 * (b - a) + 2.0 * h) continue;
      }
      rank.push_back({{-std::max(overlap, 0.0), std::abs(bucket[q].sc - mid)}, q});
    }
    std::sort(rank.begin(), rank.end(), [&](const auto& u, const auto& v) {
      if (u.first.first != v.first.first) return u.first.first < v.first.first;
      if (u.first.second != v.first.second) return u.first.second < v.first.second;
      return bucket[u.second].sc < bucket[v.second].sc;
    });
    long taken = 0;
    for (std::size_t q = 0; q < rank.size() && taken < want; ++q) {
      auto& cell = bucket[rank[q].second];
      out.domain.set_cell(cell.i, cell.j, true);
      cell.taken = true;
      ++taken;
    }
    return taken;
  };
  std::vector<std::size_t> scratch;

  struct Need {
    int k;
    double a, b, mid;
    long missing;
  };
  std::vector<Need> needs;

  double sect_measure = 0.0;
  long placed_total = 0;
  for (std::size_t k = 0; k < s.columns.size(); ++k) {
    const IntervalUnion& col = s.columns[k];
    if (col.empty()) continue;
    const double len = col.total_length();
    sect_measure += len * s.dx;
    long target = std::lround(len * s.dx / (h * h));
    if (target <= 0) continue;

    // Largest-remainder apportionment of `target` cells among the parts.
    const auto& parts = col.parts();
    std::vector<long> counts(parts.size());
    std::vector<std::pair<double, std::size_t>> rema(parts.size());
    long assigned = 0;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      const double ideal = parts[p].length() * s.dx / (h * h);
      counts[p] = static_cast<long>(std::floor(ideal + 1e-9));
      assigned += counts[p];
      rema[p] = {ideal - counts[p], p};
    }
    std::sort(rema.begin(), rema.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    for (std::size_t r = 0; assigned < target && r < rema.size(); ++r, ++assigned)
      ++counts[rema[r].second];
    while (assigned > target) {  // can happen only through the floor snap
      for (auto it = rema.rbegin(); it != rema.rend(); ++it)
        if (counts[it->second] > 0) { --counts[it->second]; --assigned; break; }
    }

    auto& bucket = buckets[k];
    std::sort(bucket.begin(), bucket.end(), [](const Cell& a, const Cell& b) {
      if (a.sc != b.sc) return a.sc < b.sc;
      if (a.j != b.j) return a.j < b.j;
      return a.i < b.i;
    });
    for (std::size_t p = 0; p < parts.size(); ++p) {
      if (counts[p] == 0) continue;
      const double a = parts[p].a, b = parts[p].b;
      const double mid = 0.5 * (a + b);
      const long got = take_from(scratch, bucket, a, b, mid, counts[p], false);
      placed_total += got;
      if (got < counts[p])
        needs.push_back({static_cast<int>(k), a, b, mid, counts[p] - got});
    }
  }

  // Some columns own no cell centers (the projection lattice can skip a
  // column entirely at diagonal angles); let their demand spill to nearby
  // columns, closest first.
  for (Need& nd : needs) {
    for (int radius = 1; radius <= 4 && nd.missing > 0; ++radius) {
      for (int dir : {-1, 1}) {
        if (nd.missing <= 0) break;
        const int kk = nd.k + dir * radius;
        if (kk < 0 || kk >= static_cast<int>(buckets.size())) continue;
        const long got = take_from(scratch, buckets[kk], nd.a, nd.b, nd.mid, nd.missing, true);
        placed_total += got;
        nd.missing -= got;
      }
    }
    out.column_deficit += nd.missing;
  }
  out.measure_error = std::abs(placed_total * h * h - sect_measure);

  if (slits && !slits->empty()) {
    for (const SlitMark& m : *slits) {
      if (m.column < 0 || m.column >= static_cast<int>(s.columns.size())) continue;
      if (ac == AxisCase::along_y) {
        // Columns follow x; section coordinate is y - cy. Face at grid line j.
        const double c_k = s.x_lo + (m.column + 0.5) * s.dx;
        const int i = static_cast<int>(std::floor((c_k + f.cx) / h));
        const int jline = static_cast<int>(std::lround((m.s + f.cy) / h));
        CrackEdge e{i, jline - 1, 1};
        if (out.domain.masked(e.i, e.j) && out.domain.masked(e.i, e.j + 1))
          out.domain.add_crack(e);
      } else {
        // Columns follow y; section coordinate is -(x - cx). Face at line i.
        const double c_k = s.x_lo + (m.column + 0.5) * s.dx;
        const int j = static_cast<int>(std::floor((c_k + f.cy) / h));
        const int iline = static_cast<int>(std::lround((f.cx - m.s) / h));
        CrackEdge e{iline - 1, j, 0};
        if (out.domain.masked(e.i, e.j) && out.domain.masked(e.i + 1, e.j))
          out.domain.add_crack(e);
      }
    }
  }
  return out;
}

RasterDomain steiner_symmetrize(const RasterDomain& d, double theta) {
  SectionedDomain sec = section(d, theta);
  SectionedDomain sym = css(sec, 1.0);
  return rasterize(sym, d).domain;
}

double symm_difference_measure(const RasterDomain& a, const RasterDomain& b) {
  if (!a.grid_matches(b)) throw std::invalid_argument("domains live on different grids");
  long n = 0;
  const auto& ma = a.mask();
  const auto& mb = b.mask();
  for (std::size_t q = 0; q < ma.size(); ++q) n += (ma[q] != mb[q]) ? 1 : 0;
  return n * a.h() * a.h();
}

}  // namespace shapeflow
