#pragma once

// Quantum states and channels in normalized Choi form, the fixed channel
// constructions (QFT, dephasing, replacement, deterministic), and the
// channel-class membership tests (classical / MIO / DIO / DI).
//
// Conventions, fixed once for the whole library:
//   * A channel N: A0 -> A1 is stored as the normalized Choi matrix
//     J^N = (id (x) N)(phi+) on A0 (x) A1, trace 1.
//   * Basis index on A0 (x) A1 is i*dout + j  (input leg first).
//   * CPTP  <=>  J PSD and Tr_out J = I/din.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dyncoh/matrix.hpp"

namespace dyncoh {

struct QuantumState {
  int dim = 0;
  ComplexMatrix density;

  QuantumState() = default;
  QuantumState(ComplexMatrix rho, double tol = 1e-9);

  static QuantumState pure(const ComplexVector& ket);
  static QuantumState basis(int d, int i);
  static QuantumState maximally_mixed(int d);
  // psi+_d = (1/d) sum_jk |j><k|, the maximally coherent state.
  static QuantumState maximally_coherent(int d);
  // phi+ on d (x) d.
  static QuantumState maximally_entangled(int d);
};

class QuantumChannel {
 public:
  QuantumChannel() = default;
  // `choi` is the normalized Choi matrix. Validates CPTP within `tol`
  // unless `validate` is false (used internally for sub-normalized objects).
  QuantumChannel(int din, int dout, ComplexMatrix choi, double tol = 1e-8,
                 bool validate = true);

  int din() const { return din_; }
  int dout() const { return dout_; }
  const ComplexMatrix& choi() const { return choi_; }

  // Kraus view via eigendecomposition of the Choi matrix.
  std::vector<ComplexMatrix> kraus(double cutoff = 1e-12) const;

  // Transfer (superoperator) matrix T with vec(N(rho)) = T vec(rho),
  // row-major vec.
  ComplexMatrix transfer() const;

  QuantumState apply(const QuantumState& rho) const;
  ComplexMatrix apply_raw(const ComplexMatrix& x) const;

  double cptp_residual() const;

 private:
  int din_ = 0, dout_ = 0;
  ComplexMatrix choi_;
};

// --- constructors -----------------------------------------------------------

QuantumChannel choi_of_kraus(const std::vector<ComplexMatrix>& kraus, int din,
                             int dout, double tol = 1e-9);

QuantumChannel identity_channel(int d);
QuantumChannel unitary_channel(const ComplexMatrix& u);
// F_d = (1/sqrt d) sum_jk e^{2 pi i jk/d} |j><k|, d >= 2.
QuantumChannel qft_channel(int d);
ComplexMatrix qft_matrix(int d);
QuantumChannel dephasing_channel(int d);
// R_d(X) = Tr(X) psi+_d.
QuantumChannel replacement_channel(int d);
QuantumChannel deterministic_channel(const std::vector<int>& f, int din, int dout);
// Fully depolarizing: X -> Tr(X) I/d.
QuantumChannel depolarizing_channel(int d);

// --- algebra ----------------------------------------------------------------

// Choi of the unnormalized/general linear map given by transfer matrix T.
ComplexMatrix choi_from_transfer(const ComplexMatrix& t, int din, int dout);
ComplexMatrix transfer_from_choi(const ComplexMatrix& choi, int din, int dout);

// Tensor product channel on A0B0 -> A1B1; Choi legs permuted from
// kron(J^N, J^M) into the (A0 B0)(A1 B1) order.
QuantumChannel tensor(const QuantumChannel& n, const QuantumChannel& m);
// compose(n, m) = n after m  (first m, then n).
QuantumChannel compose(const QuantumChannel& n, const QuantumChannel& m);

// Output-leg dephasing of the Choi matrix: J -> (id (x) D)(J).
ComplexMatrix choi_dephase_output(const ComplexMatrix& choi, int din, int dout);
ComplexMatrix choi_dephase_input(const ComplexMatrix& choi, int din, int dout);
// Full pinch (D (x) D)(J), the Choi matrix of D o N o D.
ComplexMatrix choi_pinch(const ComplexMatrix& choi);

// --- class membership -------------------------------------------------------

enum class ChannelClass { CPTP, Classical, MIO, DIO, DI };

struct ChannelClassVerdict {
  ChannelClass cls = ChannelClass::CPTP;
  bool pass = false;
  double residual = 0.0;
  // Violation exhibit: offending operator (e.g. a coherent output state or
  // a Choi off-diagonal pattern), plus the basis index when meaningful.
  std::optional<ComplexMatrix> witness;
  int witness_index = -1;
};

ChannelClassVerdict cptp_check(const QuantumChannel& n, double tol = 1e-8);
// N classical <=> N = D o N o D <=> J^N diagonal.
ChannelClassVerdict classical_check(const QuantumChannel& n, double tol = 1e-9);
ChannelClassVerdict mio_check(const QuantumChannel& n, double tol = 1e-9);
ChannelClassVerdict dio_check(const QuantumChannel& n, double tol = 1e-9);
ChannelClassVerdict di_check(const QuantumChannel& n, double tol = 1e-9);

std::string to_string(ChannelClass c);

// All deterministic classical channels din -> dout (dout^din of them).
// These are the extreme points of the classical polytope.
std::vector<QuantumChannel> deterministic_channels(int din, int dout);

class Rng;

// Haar-isometry (Stinespring) channel with the given Kraus rank.
QuantumChannel random_channel(int din, int dout, int kraus_rank, Rng& rng);
QuantumChannel random_unitary_channel(int d, Rng& rng);

}  // namespace dyncoh
