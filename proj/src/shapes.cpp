#include "shapeflow/shapes.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

namespace shapeflow {

namespace {

constexpr double pi = 3.14159265358979323846;

int cells_for(double extent, double h) {
  const int n = static_cast<int>(std::lround(extent / h));
  return std::max(n, 1);
}

RasterDomain fill(double box_w, double box_h, double h,
                  const std::function<bool(double, double)>& inside) {
  RasterDomain d(cells_for(box_w, h), cells_for(box_h, h), h);
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i)
      if (inside(d.cell_center_x(i) - d.center_x(), d.cell_center_y(j) - d.center_y()))
        d.set_cell(i, j, true);
  return d;
}

void check_pos(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

RasterDomain rectangle_domain(double width, double height, double h, double pad) {
  check_pos(width, "width");
  check_pos(height, "height");
  check_pos(h, "cell size");
  const double hw = width / 2, hh = height / 2;
  return fill(width + 2 * pad, height + 2 * pad, h, [=](double x, double y) {
    return std::abs(x) < hw && std::abs(y) < hh;
  });
}

RasterDomain disk_domain(double radius, double h, double pad) {
  check_pos(radius, "radius");
  check_pos(h, "cell size");
  return fill(2 * radius + 2 * pad, 2 * radius + 2 * pad, h, [=](double x, double y) {
    return x * x + y * y < radius * radius;
  });
}

RasterDomain ellipse_domain(double a, double b, double h, double pad) {
  check_pos(a, "semi-axis");
  check_pos(b, "semi-axis");
  check_pos(h, "cell size");
  return fill(2 * a + 2 * pad, 2 * b + 2 * pad, h, [=](double x, double y) {
    return (x * x) / (a * a) + (y * y) / (b * b) < 1.0;
  });
}

RasterDomain l_shape_domain(double size, double h, double pad) {
  check_pos(size, "size");
  check_pos(h, "cell size");
  const double hs = size / 2;
  return fill(size + 2 * pad, size + 2 * pad, h, [=](double x, double y) {
    if (!(std::abs(x) < hs && std::abs(y) < hs)) return false;
    return !(x > 0 && y > 0);  // drop the upper-right quadrant
  });
}

RasterDomain stadium_domain(double length, double radius, double h, double pad) {
  check_pos(length, "length");
  check_pos(radius, "radius");
  check_pos(h, "cell size");
  const double hl = length / 2;
  return fill(length + 2 * radius + 2 * pad, 2 * radius + 2 * pad, h,
              [=](double x, double y) {
                const double dx = std::max(std::abs(x) - hl, 0.0);
                return dx * dx + y * y < radius * radius;
              });
}

RasterDomain notched_square_domain(double side, double depth, double width, double h,
                                   double pad, double taper) {
  check_pos(side, "side");
  check_pos(depth, "depth");
  check_pos(width, "width");
  check_pos(h, "cell size");
  if (depth >= side) throw std::invalid_argument("notch depth must be below the side length");
  const double hs = side / 2;
  return fill(side + 2 * pad, side + 2 * pad, h, [=](double x, double y) {
    if (!(std::abs(x) < hs && std::abs(y) < hs)) return false;
    const double floor_y = hs - depth;  // bottom of the slot
    if (y <= floor_y) return true;
    const double half_gap = width / 2 + taper * (y - floor_y);
    return std::abs(x) >= half_gap;
  });
}

RasterDomain blob_domain(std::uint64_t seed, double h, double pad, double r_lo,
                         double r_hi, int knots) {
  check_pos(h, "cell size");
  if (!(0.0 < r_lo && r_lo <= r_hi)) throw std::invalid_argument("need 0 < r_lo <= r_hi");
  if (knots < 3) throw std::invalid_argument("need at least 3 knots");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(r_lo, r_hi);
  std::vector<double> r(knots);
  for (auto& v : r) v = uni(rng);
  // Smooth periodic radius: cosine blend between successive knots.
  auto radius_at = [&](double ang) {
    double u = ang / (2 * pi) * knots;
    int k = static_cast<int>(std::floor(u)) % knots;
    if (k < 0) k += knots;
    const double f = u - std::floor(u);
    const double w = 0.5 - 0.5 * std::cos(pi * f);
    return r[k] * (1 - w) + r[(k + 1) % knots] * w;
  };
  return fill(2 * r_hi + 2 * pad, 2 * r_hi + 2 * pad, h, [&](double x, double y) {
    const double rho = std::hypot(x, y);
    if (rho == 0.0) return true;
    return rho < radius_at(std::atan2(y, x) + pi);
  });
}

RasterDomain matched_disk(const RasterDomain& like) {
  const double r = std::sqrt(like.measure() / pi);
  RasterDomain d(like.nx(), like.ny(), like.h());
  for (int j = 0; j < d.ny(); ++j)
    for (int i = 0; i < d.nx(); ++i) {
      const double x = d.cell_center_x(i) - d.center_x();
      const double y = d.cell_center_y(j) - d.center_y();
      if (x * x + y * y < r * r) d.set_cell(i, j, true);
    }
  return d;
}

}  // namespace shapeflow
