#pragma once

// Executable forms of the one-shot manipulation results: cost and
// distillation bounds, the QFT twirl, the catalytic construction, and the
// golden-unit conversions. Every constructed superchannel is re-certified
// (admissibility + declared membership) before a rate is reported.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dyncoh/measures.hpp"
#include "dyncoh/supermap.hpp"

namespace dyncoh {

struct CertificateEntry {
  std::string name;
  bool pass = false;
  double residual = 0.0;
  double tolerance = 0.0;
  std::string note;
};

struct ProtocolReport {
  std::string protocol;
  std::string channel_desc;
  double eps = 0.0;
  double delta = 0.0;
  std::string cls;  // "MISC" or "DISC"
  bool degenerate = false;

  int d0 = 0;  // simulating QFT dimension
  int l = 0;   // catalyst dimension
  double rate_bits = 0.0;
  double bound_lower = 0.0;
  double bound_upper = 0.0;

  std::optional<Superchannel> superchannel;
  std::vector<CertificateEntry> certificates;
  std::map<std::string, double> values;
  std::vector<std::string> notes;

  bool all_pass() const {
    for (const auto& c : certificates)
      if (!c.pass) return false;
    return true;
  }
  void add_cert(std::string name, bool pass, double residual, double tol,
                std::string note = "") {
    certificates.push_back({std::move(name), pass, residual, tol, std::move(note)});
  }
};

// Smallest lambda with lambda*M - J >= -1e-11, found by bisection on the
// minimum eigenvalue. Used to turn solver-accurate dominations into
// eigensolver-accurate ones before building superchannel branches.
double domination_lambda(const ComplexMatrix& j, const ComplexMatrix& m,
                         double hint = 1.0);

// Cheap certified upper bound on the half diamond distance:
// (1/2)||N-M||_diamond <= din * (1/2)||J^N - J^M||_1.
double diamond_upper_cheap(const QuantumChannel& n, const QuantumChannel& m);

// One-shot simulation cost of n from a QFT golden unit under the given
// superchannel class, with the explicit MeasurePrepare construction.
ProtocolReport one_shot_cost(const QuantumChannel& n, double eps, SuperProperty cls,
                             const conic::SolverOptions& opts = default_solver_options());

// Upper bound on one-shot distillation (hypothesis-testing flavor) plus the
// trivially achievable self-distillation rate.
ProtocolReport one_shot_distill_bound(const QuantumChannel& n, double eps,
                                      SuperProperty cls, std::uint64_t seed = 0,
                                      const conic::SolverOptions& opts = default_solver_options());

// Twirl superchannel: fixes F_d, sends every classical channel to I/d^2.
Superchannel qft_twirl(int d);

struct CatalystDecomposition {
  double eps_prime = 0.0;
  double lr_smoothed_bits = 0.0;  // LR_{eps'}(N (x) F_l)
  double p = 0.0;
  QuantumChannel m_ab;       // twirled smoothing witness, exactly CPTP
  ComplexMatrix n_eps_raw;   // conditional Choi, near-CPTP
  QuantumChannel n_eps;      // trace-repaired conditional channel
  std::optional<ComplexMatrix> l_ab;  // residual branch (Choi, near-CPTP)
  double reassembly_residual = 0.0;
  double repair_distance = 0.0;  // trace distance raw -> repaired
  double half_diamond_to_n = 0.0;
  std::vector<CertificateEntry> certificates;
};

CatalystDecomposition catalyst_decomposition(const QuantumChannel& n, double eps, int l,
                              const conic::SolverOptions& opts = default_solver_options());

ProtocolReport catalytic_cost(const QuantumChannel& n, double eps, double delta,
                              const conic::SolverOptions& opts = default_solver_options());

struct GoldenUnitResult {
  Superchannel theta;
  QuantumChannel post;  // the coherence-consuming post-processing
  ProtocolReport report;
};

// Golden-unit conversion F_d -> n with the fixed pre-processing
// rho -> |0><0| (x) rho and a measurement-based post-processing that
// consumes the maximally coherent output of F_d. Exact reproduction always;
// the MISC certificate is evaluated honestly and holds iff LR(n) <= log d.
GoldenUnitResult golden_unit_misc(const QuantumChannel& n, int d,
                                  const conic::SolverOptions& opts = default_solver_options());

// The dephasing-covariant conversion F_d -> R_d by discarding into an
// incoherent environment.
Superchannel replacement_from_qft_disc(int d);

struct RegularizationRow {
  int k = 0;
  double lr_per_copy = 0.0;
  double sandwich_width = 0.0;  // 2/k
};

std::vector<RegularizationRow> regularization_sanity(
    const QuantumChannel& n, double eps, int nmax,
    const conic::SolverOptions& opts = default_solver_options());

// A small delta-MISC family used by the growth-bound suites:
// Theta[X] = (1-w) Delta[X] + w F_l with w = delta/(l^2-1).
Superchannel mixed_delta_misc(int l, double delta);

}  // namespace dyncoh
