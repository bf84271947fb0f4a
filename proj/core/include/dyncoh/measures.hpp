#pragma once

// Divergences and coherence monotones, all in bits (base-2 logs).
//
//   dmax_state / dmax_channel     closed form via whitening
//   lr_state / lr_channel         single SDP against the incoherent /
//                                 classical-channel cone
//   cr_channel                    2^LR - 1 (shared optimizer)
//   lr_dephasing (+ smoothed)     D_max against the dephased channel;
//                                 the smoothed version bisects an outer
//                                 lambda over a feasibility SDP
//   lr_smoothed                   single SDP with the half-diamond-ball
//                                 encoded through its dual characterization
//   diamond_distance              (1/2)||N - M||_diamond
//   htest_state                   hypothesis-testing relative entropy
//   ch_coherence_lb / ch_dephasing_lb
//                                 certified lower bounds; the outer input
//                                 maximization is heuristic (sampled pure
//                                 inputs + local refinement)

#include <optional>
#include <string>
#include <vector>

#include "dyncoh/conic.hpp"
#include "dyncoh/qobj.hpp"

namespace dyncoh {

struct MeasureResult {
  std::string name;
  double value = 0.0;  // bits
  bool infinite = false;
  bool lower_bound_only = false;
  std::optional<ComplexMatrix> witness_classical;  // optimal classical Choi / incoherent state
  std::optional<ComplexMatrix> witness_channel;    // smoothing channel Choi / test operator
  std::optional<ComplexMatrix> witness_input;      // achieving input state
  double crosscheck = 0.0;  // primal/dual or re-substitution discrepancy
  conic::SolveReport report;
};

// Solver options honoring the DYNCOH_SOLVER_TOL environment override.
conic::SolverOptions default_solver_options();

// D_max(rho||sigma); +inf (infinite flag through the return value) when
// supp rho is not contained in supp sigma. Whitening cutoff 1e-10.
double dmax_state(const ComplexMatrix& rho, const ComplexMatrix& sigma);
double dmax_channel(const QuantumChannel& n, const QuantumChannel& m);

MeasureResult lr_state(const ComplexMatrix& rho,
                       const conic::SolverOptions& opts = default_solver_options());
MeasureResult lr_channel(const QuantumChannel& n,
                         const conic::SolverOptions& opts = default_solver_options());
double cr_channel(const QuantumChannel& n,
                  const conic::SolverOptions& opts = default_solver_options());

double lr_dephasing(const QuantumChannel& n);
MeasureResult lr_dephasing_smoothed(const QuantumChannel& n, double eps,
                                    const conic::SolverOptions& opts = default_solver_options());

MeasureResult lr_smoothed(const QuantumChannel& n, double eps,
                          const conic::SolverOptions& opts = default_solver_options());

double diamond_distance(const QuantumChannel& n, const QuantumChannel& m,
                        const conic::SolverOptions& opts = default_solver_options());

MeasureResult htest_state(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                          double eps,
                          const conic::SolverOptions& opts = default_solver_options());

// Certified lower bound on the hypothesis-testing coherence of a channel.
// For each input psi on R (x) A0 the inner problem (optimal classical
// channel against the optimal test) is one convex program; the outer input
// choice is phi+ plus `samples` Haar inputs plus `refine_rounds` local
// refinements, all seeded. Pass explicit `inputs` to pin the input set.
MeasureResult ch_coherence_lb(const QuantumChannel& n, double eps,
                              std::vector<ComplexMatrix> inputs = {},
                              std::uint64_t seed = 0, int samples = 64,
                              int refine_rounds = 20,
                              const conic::SolverOptions& opts = default_solver_options());

// Same input scheme against the fixed second argument Delta[N].
MeasureResult ch_dephasing_lb(const QuantumChannel& n, double eps,
                              std::vector<ComplexMatrix> inputs = {},
                              std::uint64_t seed = 0, int samples = 64,
                              int refine_rounds = 20,
                              const conic::SolverOptions& opts = default_solver_options());

// Channel of the dephasing superchannel image, J -> pinch(J).
QuantumChannel dephased_channel(const QuantumChannel& n);

}  // namespace dyncoh
