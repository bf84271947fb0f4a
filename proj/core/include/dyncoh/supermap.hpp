#pragma once

// Superchannels as first-class objects. A superchannel Theta maps channels
// A0 -> A1 to channels B0 -> B1. Three realizations are supported:
//
//  * PrePost: Theta[N] = post o (N (x) id_E) o pre with pre: B0 -> A0 (x) E
//    and post: A1 (x) E -> B1. The slot channel always acts on the FIRST
//    tensor factor.
//  * MeasurePrepare: Theta[N] = sum_k (a_k + c_k Tr[E_k J^N]) T_k with
//    Hermitian effects E_k on the A Choi space and channel targets T_k.
//  * LinearAction: an explicit matrix on the row-major vectorization of the
//    normalized Choi space.
//
// All realizations extend complex-linearly to the whole Choi operator space
// (the affine part of MeasurePrepare extends through Tr X), which is what
// the admissibility and covariance checks operate on.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dyncoh/qobj.hpp"

namespace dyncoh {

struct SuperDims {
  int dA0 = 0, dA1 = 0, dB0 = 0, dB1 = 0;
  int in_choi_dim() const { return dA0 * dA1; }
  int out_choi_dim() const { return dB0 * dB1; }
};

struct PrePost {
  QuantumChannel pre;   // B0 -> A0 (x) E
  QuantumChannel post;  // A1 (x) E -> B1
  int denv = 1;
};

struct MeasurePrepareBranch {
  double affine = 0.0;
  double coeff = 0.0;
  ComplexMatrix effect;   // Hermitian, on A0 (x) A1
  QuantumChannel target;  // B0 -> B1
};

struct MeasurePrepare {
  std::vector<MeasurePrepareBranch> branches;
};

struct LinearAction {
  ComplexMatrix matrix;  // (dB0*dB1)^2 x (dA0*dA1)^2
};

class Superchannel {
 public:
  Superchannel(SuperDims dims, PrePost pp);
  Superchannel(SuperDims dims, MeasurePrepare mp);
  Superchannel(SuperDims dims, LinearAction la);

  const SuperDims& dims() const { return dims_; }
  bool is_prepost() const { return std::holds_alternative<PrePost>(real_); }
  bool is_measure_prepare() const { return std::holds_alternative<MeasurePrepare>(real_); }
  bool is_linear() const { return std::holds_alternative<LinearAction>(real_); }
  const PrePost& prepost() const { return std::get<PrePost>(real_); }
  const MeasurePrepare& measure_prepare() const { return std::get<MeasurePrepare>(real_); }

  // Linear extension of the supermap to arbitrary operators on the input
  // Choi space.
  ComplexMatrix apply_choi(const ComplexMatrix& x) const;

  // Apply to a channel; the output is validated CPTP within `tol`.
  QuantumChannel apply(const QuantumChannel& n, double tol = 1e-7) const;

  // Action matrix on vectorized Choi space (LinearAction form).
  ComplexMatrix action_matrix() const;

  // Choi operator of the supermap itself, on (A Choi space) (x) (B Choi
  // space); PSD iff the supermap is completely positive.
  ComplexMatrix supermap_choi() const;

  static Superchannel identity_super(int d);

 private:
  SuperDims dims_;
  std::variant<PrePost, MeasurePrepare, LinearAction> real_;
};

// Delta_B: N -> D o N o D.
Superchannel dephasing_super(int dB0, int dB1);

// Composition (outer after inner) and tensor on LinearAction matrices.
Superchannel compose_super(const Superchannel& outer, const Superchannel& inner);
Superchannel tensor_super(const Superchannel& a, const Superchannel& b);

enum class SuperProperty { Admissible, MISC, DISC, DeltaMISC };

struct SuperchannelVerdict {
  SuperProperty property = SuperProperty::Admissible;
  bool pass = false;
  double residual = 0.0;
  double delta = 0.0;  // for DeltaMISC
  std::optional<ComplexMatrix> witness;
  int witness_index = -1;
  std::string note;
};

// Criterion: supermap Choi PSD  +  trace-preservation compatibility on a
// spanning basis of the input Choi space. Both are necessary; the pair is
// what every certificate discloses (see admissibility_criterion_version).
SuperchannelVerdict admissibility_check(const Superchannel& t, double tol = 1e-8);

// MISC: Theta[Q] classical for every deterministic classical Q. Extreme-point
// enumeration suffices by linearity; capped at dA0 <= 4.
SuperchannelVerdict misc_check(const Superchannel& t, double tol = 1e-8);

// DISC: Delta_B o Theta = Theta o Delta_A on the full matrix-unit basis.
SuperchannelVerdict disc_check(const Superchannel& t, double tol = 1e-8);

// delta-MISC: max over deterministic Q of C_R(Theta[Q]) <= delta + 1e-7.
SuperchannelVerdict delta_misc_check(const Superchannel& t, double delta);

inline const char* admissibility_criterion_version() {
  return "supermap-choi-psd+tp-on-basis/v1";
}

std::string to_string(SuperProperty p);

// Partial application of a MeasurePrepare superchannel to the B factor of a
// channel on A (x) B: [id_A (x) Theta_B]. Returns the output channel and the
// per-branch contractions X_k on the A Choi space, so that the output Choi
// is reorder(sum_k X_k (x) J^{T_k}).
struct PartialApplyResult {
  QuantumChannel out;
  std::vector<ComplexMatrix> branch_ops;
};
PartialApplyResult apply_super_on_B(const Superchannel& theta_B,
                                    const QuantumChannel& nab, int dA0, int dA1);

}  // namespace dyncoh
