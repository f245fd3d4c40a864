#pragma once
// Dirichlet Laplacian on the masked cells of a RasterDomain, five-point
// stencil. Boundary faces (to unmasked/outside cells), severed faces, and
// pinned vertices impose u = 0 at the face center, contributing 2*u/h^2 to the
// diagonal; interior faces contribute (u_p - u_q)/h^2. The operator stays
// symmetric positive definite with a discrete maximum principle.

#include <stdexcept>
#include <string>
#include <vector>

#include "shapeflow/sections.hpp"

namespace shapeflow {

struct SolverConfig {
  double cg_tol = 1e-10;    // relative residual for linear solves
  int cg_max_iter = 20000;
  double eig_tol = 1e-9;    // relative eigenvalue increment
  int eig_max_iter = 500;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Scalar field over the full grid (unmasked entries zero) plus solve metadata.
struct FieldSolution {
  std::vector<double> values;
  double functional_value = 0.0;
  double residual = 0.0;
  int iterations = 0;
};

class StencilSystem {
 public:
  explicit StencilSystem(const RasterDomain& d);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double h() const { return h_; }
  long unknowns() const { return n_masked_; }

  // y = A x over full-grid vectors; entries off the mask are forced to zero.
  void apply(const std::vector<double>& x, std::vector<double>& y) const;

  // Conjugate gradients for A x = b. Returns iterations; x holds the solution.
  int cg(const std::vector<double>& b, std::vector<double>& x, double tol,
         int max_iter, double& residual) const;

  const std::vector<std::uint8_t>& mask() const { return mask_; }

 private:
  int nx_ = 0, ny_ = 0;
  double h_ = 0.0;
  long n_masked_ = 0;
  std::vector<std::uint8_t> mask_;
  std::vector<std::uint8_t> open_x_;  // face (i,j)-(i+1,j) conducts
  std::vector<std::uint8_t> open_y_;  // face (i,j)-(i,j+1) conducts
};

// -Laplace u = 1, u = 0 on the boundary; functional_value = h^2 * sum(u).
FieldSolution torsion(const RasterDomain& d, const SolverConfig& cfg = {});

// First Dirichlet eigenvalue by inverse power iteration on the stencil;
// functional_value = lambda_1, values = L2-normalized eigenfunction.
FieldSolution eigen1(const RasterDomain& d, const SolverConfig& cfg = {});

// Boundary length of the mask: h per face between masked and unmasked/outside.
double perimeter(const RasterDomain& d);

// L2 distance of the torsion fields on a shared grid.
double gamma_dist(const RasterDomain& a, const RasterDomain& b,
                  const SolverConfig& cfg = {});

}  // namespace shapeflow
