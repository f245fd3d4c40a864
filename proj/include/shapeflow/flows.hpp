#pragma once
// Shape evolutions driven by the section flow, with functional traces:
//  - css_path: one-direction continuous symmetrization, sampled in tau,
//    with detection of torsion jumps (discontinuities of the path).
//  - round_to_ball: iterated symmetrization cycles until the domain is close
//    to the disk of equal measure.
//  - repair_path: continuous route from an obstructed domain to its healed
//    version, guided by a space-filling curve that progressively draws the
//    obstruction; higher curve order refines the path.

#include <cstdint>
#include <optional>
#include <vector>

#include "shapeflow/pde.hpp"
#include "shapeflow/sections.hpp"

namespace shapeflow {

struct FlowSample {
  double tau = 0.0;
  double measure = 0.0;
  double lambda = 0.0;
  double torsion = 0.0;
  double perimeter = 0.0;
  double gamma_to_target = 0.0;  // NaN when no target is tracked
  std::string note;              // nonempty when a solve failed
};

struct JumpEvent {
  double tau_before = 0.0;
  double tau_after = 0.0;
  double delta_torsion = 0.0;
};

struct FlowTrace {
  std::vector<FlowSample> samples;
  std::vector<JumpEvent> jumps;
  double max_torsion_decrease = 0.0;  // largest violation of upward monotonicity
  double max_lambda_increase = 0.0;
  bool warning = false;
};

struct DirectionSchedule {
  std::vector<double> angles;
  static DirectionSchedule eighth_turns();
};

// Functionals of one snapshot. Solve failures set NaN, append to the note, and
// raise `warning` instead of throwing. `target_field` (optional) is a torsion
// field on the same grid; the L2 gap to it fills gamma_to_target.
FlowSample evaluate_sample(const RasterDomain& d, double tau, const SolverConfig& cfg,
                           const std::vector<double>* target_field, bool& warning);

// Trace of tau -> functionals along the symmetrization flow in one direction.
// A jump is an upward torsion increment exceeding
// max(jump_factor * median increment, jump_floor_rel * torsion(omega0)).
FlowTrace css_path(const RasterDomain& omega0, double theta, int n_samples,
                   const SolverConfig& cfg = {}, double jump_factor = 10.0,
                   double jump_floor_rel = 1e-3,
                   const RasterDomain* gamma_target = nullptr);

struct RoundToBallResult {
  FlowTrace trace;             // one sample per completed cycle (tau = cycle)
  std::vector<double> symdiff_ratio;  // |domain xor ball| / |omega0| per sample
  RasterDomain final_domain;
  RasterDomain ball;
  bool converged = false;
  int cycles = 0;
};

// Apply one symmetrization per angle per cycle until the symmetric difference
// to the measure-matched disk drops below stop_tol * measure.
RoundToBallResult round_to_ball(const RasterDomain& omega0,
                                const DirectionSchedule& schedule,
                                double stop_tol = 0.05, int max_cycles = 12,
                                const SolverConfig& cfg = {});

// Order of visitation of all grid vertices along a Hilbert curve of the given
// order, mapped onto the vertex lattice surjectively and deduplicated.
// Requires 2^order >= max(nx, ny) + 1.
std::vector<PinVertex> hilbert_visit_sequence(int nx, int ny, int order);

struct RepairResult {
  FlowTrace trace;         // tau = 0 is the obstructed domain, tau = 1 healed
  double max_increment = 0.0;  // largest per-sample torsion increase
  RasterDomain start;      // reconstructed endpoint at tau = 0
  RasterDomain finish;     // reconstructed endpoint at tau = 1
};

// Continuous path from `minus` (obstructed: cracks, pins, missing cells) to
// `plus` (healed superset). The curve draws the obstruction; at trace
// parameter tau the suffix not yet drawn is healed. Endpoints reproduce the
// inputs exactly. minus's mask must be contained in plus's.
RepairResult repair_path(const RasterDomain& minus, const RasterDomain& plus,
                         int curve_order, int n_samples,
                         const SolverConfig& cfg = {},
                         std::optional<PinVertex> anchor = std::nullopt);

// Same mask without cracks or pins.
RasterDomain remove_fractures(const RasterDomain& d);

}  // namespace shapeflow
