#include "shapeflow/pde.hpp"

#include <cmath>

namespace shapeflow {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

StencilSystem::StencilSystem(const RasterDomain& d)
    : nx_(d.nx()), ny_(d.ny()), h_(d.h()), mask_(d.mask()) {
  if (d.empty()) throw std::invalid_argument("empty domain has no stencil");
  n_masked_ = d.cell_count();
  const std::size_t n = mask_.size();
  open_x_.assign(n, 0);
  open_y_.assign(n, 0);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const std::size_t q = d.idx(i, j);
      if (i + 1 < nx_ && mask_[q] && mask_[q + 1]) open_x_[q] = 1;
      if (j + 1 < ny_ && mask_[q] && mask_[q + nx_]) open_y_[q] = 1;
    }
  }
  for (const CrackEdge& e : d.cracks()) {
    const std::size_t q = d.idx(e.i, e.j);
    if (e.axis == 0) open_x_[q] = 0; else open_y_[q] = 0;
  }
  for (const PinVertex& v : d.pins()) {
    auto sever_x = [&](int i, int j) {
      if (i >= 0 && i + 1 < nx_ && j >= 0 && j < ny_) open_x_[d.idx(i, j)] = 0;
    };
    auto sever_y = [&](int i, int j) {
      if (i >= 0 && i < nx_ && j >= 0 && j + 1 < ny_) open_y_[d.idx(i, j)] = 0;
    };
    sever_x(v.i - 1, v.j - 1);
    sever_x(v.i - 1, v.j);
    sever_y(v.i - 1, v.j - 1);
    sever_y(v.i, v.j - 1);
  }
}

void StencilSystem::apply(const std::vector<double>& x, std::vector<double>& y) const {
  const double inv_h2 = 1.0 / (h_ * h_);
  y.assign(mask_.size(), 0.0);
  for (int j = 0; j < ny_; ++j) {
    for (int i = 0; i < nx_; ++i) {
      const std::size_t q = static_cast<std::size_t>(j) * nx_ + i;
      if (!mask_[q]) continue;
      double v = 0.0;
      // +x / -x
      if (i + 1 < nx_ && open_x_[q]) v += x[q] - x[q + 1]; else v += 2.0 * x[q];
      if (i > 0 && open_x_[q - 1]) v += x[q] - x[q - 1]; else v += 2.0 * x[q];
      // +y / -y
      if (j + 1 < ny_ && open_y_[q]) v += x[q] - x[q + nx_]; else v += 2.0 * x[q];
      if (j > 0 && open_y_[q - nx_]) v += x[q] - x[q - nx_]; else v += 2.0 * x[q];
      y[q] = v * inv_h2;
    }
  }
}

int StencilSystem::cg(const std::vector<double>& b, std::vector<double>& x,
                      double tol, int max_iter, double& residual) const {
  const std::size_t n = mask_.size();
  if (x.size() != n) x.assign(n, 0.0);
  std::vector<double> r(n), p(n), ap(n);
  apply(x, ap);
  for (std::size_t q = 0; q < n; ++q) r[q] = mask_[q] ? b[q] - ap[q] : 0.0;
  p = r;
  double rr = dot(r, r);
  double bb = 0.0;
  for (std::size_t q = 0; q < n; ++q) bb += mask_[q] ? b[q] * b[q] : 0.0;
  const double stop2 = tol * tol * (bb > 0.0 ? bb : 1.0);
  int it = 0;
  while (rr > stop2 && it < max_iter) {
    apply(p, ap);
    const double pap = dot(p, ap);
    if (!(pap > 0.0)) throw SolverError("stencil lost positive definiteness", std::sqrt(rr));
    const double alpha = rr / pap;
    for (std::size_t q = 0; q < n; ++q) {
      x[q] += alpha * p[q];
      r[q] -= alpha * ap[q];
    }
    const double rr_new = dot(r, r);
    const double beta = rr_new / rr;
    for (std::size_t q = 0; q < n; ++q) p[q] = r[q] + beta * p[q];
    rr = rr_new;
    ++it;
  }
  residual = std::sqrt(rr);
  if (rr > stop2)
    throw SolverError("conjugate gradients did not converge", residual);
  for (std::size_t q = 0; q < n; ++q)
    if (!mask_[q]) x[q] = 0.0;
  return it;
}

FieldSolution torsion(const RasterDomain& d, const SolverConfig& cfg) {
  StencilSystem sys(d);
  const std::size_t n = d.mask().size();
  std::vector<double> b(n, 0.0);
  for (std::size_t q = 0; q < n; ++q) b[q] = d.mask()[q] ? 1.0 : 0.0;
  FieldSolution out;
  out.values.assign(n, 0.0);
  out.iterations = sys.cg(b, out.values, cfg.cg_tol, cfg.cg_max_iter, out.residual);
  double s = 0.0;
  for (double v : out.values) s += v;
  out.functional_value = s * d.h() * d.h();
  return out;
}

FieldSolution eigen1(const RasterDomain& d, const SolverConfig& cfg) {
  StencilSystem sys(d);
  const std::size_t n = d.mask().size();
  const double h2 = d.h() * d.h();
  std::vector<double> v(n, 0.0), w(n, 0.0), av(n);
  for (std::size_t q = 0; q < n; ++q) v[q] = d.mask()[q] ? 1.0 : 0.0;
  double nv = std::sqrt(dot(v, v) * h2);
  for (auto& x : v) x /= nv;

  double lambda = 0.0;
  FieldSolution out;
  for (int it = 1; it <= cfg.eig_max_iter; ++it) {
    // Warm start: w ~ v / lambda from the previous step.
    if (lambda > 0.0)
      for (std::size_t q = 0; q < n; ++q) w[q] = v[q] / lambda;
    else
      std::fill(w.begin(), w.end(), 0.0);
    double res;
    out.iterations += sys.cg(v, w, cfg.cg_tol, cfg.cg_max_iter, res);
    const double nw = std::sqrt(dot(w, w) * h2);
    if (!(nw > 0.0)) throw SolverError("inverse iteration collapsed", res);
    for (std::size_t q = 0; q < n; ++q) v[q] = w[q] / nw;
    sys.apply(v, av);
    const double lambda_new = dot(v, av) / dot(v, v);
    const bool done = it > 1 && std::abs(lambda_new - lambda) <= cfg.eig_tol * std::abs(lambda_new);
    lambda = lambda_new;
    if (done) {
      double r2 = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        const double rq = av[q] - lambda * v[q];
        r2 += rq * rq;
      }
      out.values = v;
      out.functional_value = lambda;
      out.residual = std::sqrt(r2) / std::sqrt(dot(v, v));
      return out;
    }
  }
  throw SolverError("inverse power iteration did not converge", 0.0);
}

double perimeter(const RasterDomain& d) {
  long faces = 0;
  for (int j = 0; j < d.ny(); ++j) {
    for (int i = 0; i < d.nx(); ++i) {
      if (!d.masked(i, j)) continue;
      if (!d.masked(i + 1, j)) ++faces;
      if (!d.masked(i - 1, j)) ++faces;
      if (!d.masked(i, j + 1)) ++faces;
      if (!d.masked(i, j - 1)) ++faces;
    }
  }
  return faces * d.h();
}

double gamma_dist(const RasterDomain& a, const RasterDomain& b, const SolverConfig& cfg) {
  if (!a.grid_matches(b)) throw std::invalid_argument("domains live on different grids");
  const bool a_empty = a.empty(), b_empty = b.empty();
  std::vector<double> ua, ub;
  if (!a_empty) ua = torsion(a, cfg).values;
  if (!b_empty) ub = torsion(b, cfg).values;
  if (a_empty && b_empty) return 0.0;
  if (ua.empty()) ua.assign(ub.size(), 0.0);
  if (ub.empty()) ub.assign(ua.size(), 0.0);
  double s = 0.0;
  for (std::size_t q = 0; q < ua.size(); ++q) {
    const double dq = ua[q] - ub[q];
    s += dq * dq;
  }
  return std::sqrt(s * a.h() * a.h());
}

}  // namespace shapeflow
