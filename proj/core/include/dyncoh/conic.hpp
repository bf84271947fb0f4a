#pragma once

// Small dense SDP kernel. Programs are affine-constrained cone problems
//
//     minimize  c^T x   s.t.  A x = b,   x in K,
//
// where K is a product of complex-Hermitian PSD blocks, a nonnegative
// orthant, and free scalars. Hermitian blocks are carried in an isometric
// real parametrization ("svec": diagonal, then sqrt(2)-scaled real and
// imaginary upper-triangle), so Frobenius inner products are plain dot
// products and cone projection is one eigendecomposition per block.
//
// PSD constraints on affine expressions are written by allocating a PSD
// block and equating it to the expression. Products of a scalar variable
// with a matrix variable are not expressible; such problems go through
// bisect_feasibility instead.
//
// The solver is operator splitting: alternate projections onto the affine
// set (cached factorization) and the cone, with over-relaxation and
// residual-balanced penalty adaptation.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dyncoh/matrix.hpp"

namespace dyncoh {
namespace conic {

struct SolverError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SolveStatus { Optimal, Infeasible, MaxIter };

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIter;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  long iterations = 0;
};

struct SolverOptions {
  double tol = 1e-8;
  long max_iter = 200000;
};

class Program;

// Handle to a variable block inside a Program.
struct Var {
  int id = -1;
  int offset = 0;  // first coordinate in the packed real vector
  int n = 0;       // matrix edge for PSD blocks, count for scalar blocks
  int size = 0;    // number of real coordinates
  enum Kind { Psd, Nonneg, Free, FreeHerm } kind = Free;
};

class Program {
 public:
  Var add_psd(int n);        // Hermitian n x n, constrained to the PSD cone
  Var add_herm_free(int n);  // Hermitian n x n, unconstrained
  Var add_nonneg(int count);
  Var add_free(int count);

  // objective += coeff * Tr(C X_v) for a PSD block (C Hermitian), or
  // objective += dot(c, scalars).
  void add_objective(const Var& v, const ComplexMatrix& c);
  void add_objective_scalar(const Var& v, int index, double coeff);

  // One scalar equality row: sum of Tr(C_k X_{v_k}) + sum a_k s_k = rhs.
  class RowBuilder {
   public:
    explicit RowBuilder(Program& p) : p_(p) {}
    RowBuilder& trace(const Var& v, const ComplexMatrix& c);
    RowBuilder& scalar(const Var& v, int index, double coeff);
    void equals(double rhs);

   private:
    Program& p_;
    std::vector<std::pair<int, double>> entries_;
  };
  RowBuilder row() { return RowBuilder(*this); }

  // Hermitian-matrix equality:  sum_k map_k(X_{v_k}) + sum_k coeff_k s_k M_k
  // + C0 = 0, expanded into n^2 scalar rows. `map` receives the block value
  // and must return an n x n Hermitian-compatible matrix; it is sampled on a
  // Hermitian operator basis, so it must be real-linear.
  struct MatTerm {
    Var v;
    std::function<ComplexMatrix(const ComplexMatrix&)> map;
  };
  struct ScalarTerm {
    Var v;
    int index = 0;
    ComplexMatrix coeff;  // Hermitian
  };
  void add_herm_eq(int n, const std::vector<MatTerm>& terms,
                   const std::vector<ScalarTerm>& scalars, const ComplexMatrix& c0);

  // expr >= 0 in the PSD order: allocates a slack block S and adds expr - S = 0.
  Var require_psd(int n, const std::vector<MatTerm>& terms,
                  const std::vector<ScalarTerm>& scalars, const ComplexMatrix& c0);

  int num_vars() const { return total_; }
  int num_rows() const { return static_cast<int>(rhs_.size()); }

  // --- solution access (valid after solve) ---
  ComplexMatrix value(const Var& v) const;             // PSD block as a matrix
  double scalar_value(const Var& v, int index) const;  // scalar coordinate

  SolveReport solve(const SolverOptions& opts = {});

  // Warm start from a previous solve of a structurally identical program.
  void warm_start(const std::vector<double>& z, const std::vector<double>& u);
  const std::vector<double>& raw_cone_point() const { return z_; }
  const std::vector<double>& raw_dual() const { return u_; }

 private:
  friend class RowBuilder;
  void append_row(const std::vector<std::pair<int, double>>& entries, double rhs);

  std::vector<Var> vars_;
  int total_ = 0;
  std::vector<double> cost_;
  // Sparse rows
  std::vector<std::vector<std::pair<int, double>>> rows_;
  std::vector<double> rhs_;

  std::vector<double> x_, z_, u_;
  bool warm_ = false;
};

// svec packing helpers (exposed for tests).
int svec_size(int n);
void svec_pack(const ComplexMatrix& m, double* out);
ComplexMatrix svec_unpack(const double* in, int n);

// Monotone threshold search: `feasible(lambda)` must be monotone
// (infeasible below the threshold, feasible above). Returns lambda* within
// `tol`. Throws SolverError if infeasible at `hi`.
double bisect_feasibility(const std::function<bool(double)>& feasible, double lo,
                          double hi, double tol);

}  // namespace conic
}  // namespace dyncoh
