#pragma once
// Discrete minimizing-movement scheme on raster shapes: each step minimizes
//   F(domain) + |domain xor anchor|^2 / (2 epsilon)
// over volume-preserving cell swaps (remove one boundary cell, add one
// exterior cell adjacent to the mask), with the previous state as anchor.
// Accepted moves strictly lower the objective, so F itself never increases
// along the trajectory. Fully deterministic for a fixed seed.

#include <cstdint>
#include <vector>

#include "shapeflow/flows.hpp"
#include "shapeflow/pde.hpp"
#include "shapeflow/sections.hpp"

namespace shapeflow {

enum class ShapeFunctional { lambda1, neg_torsion, perimeter, combination };

struct Functional {
  ShapeFunctional kind = ShapeFunctional::perimeter;
  double w_lambda = 0.0, w_neg_torsion = 0.0, w_perimeter = 0.0;

  static Functional lambda1();
  static Functional neg_torsion();
  static Functional perim();
  static Functional combo(double wl, double wt, double wp);

  double evaluate(const RasterDomain& d, const SolverConfig& cfg = {}) const;
};

struct MinMovConfig {
  double epsilon = 1e-2;
  int n_steps = 10;
  enum class Search { greedy, annealing };
  Search search = Search::greedy;
  int swap_budget = 64;  // functional evaluations allowed per step
  std::uint64_t seed = 1;
  double anneal_t0 = 1e-2;     // initial temperature, relative to |F|
  double anneal_alpha = 0.95;  // geometric cooling factor
};

double mm_objective(const RasterDomain& d, const RasterDomain& anchor,
                    const Functional& f, double epsilon, const SolverConfig& cfg = {});

// One movement step from `cur`; returns `cur` itself when no swap improves.
RasterDomain minmov_step(const RasterDomain& cur, const Functional& f,
                         const MinMovConfig& mmc, const SolverConfig& cfg = {});

struct MinMovResult {
  FlowTrace trace;               // one sample per state, tau = k / n_steps
  std::vector<double> f_values;  // minimized functional at each state
  std::vector<std::vector<std::uint8_t>> masks;  // state masks, for replay checks
  RasterDomain final_domain;
  double max_f_increase = 0.0;  // positive only if monotonicity ever failed
};

MinMovResult minmov_trajectory(const RasterDomain& omega0, const Functional& f,
                               const MinMovConfig& mmc, const SolverConfig& cfg = {});

}  // namespace shapeflow
