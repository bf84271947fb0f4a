#pragma once

// Dense complex linear algebra substrate. Everything downstream (states,
// Choi matrices, SDP cone projections) runs through the operations here.

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dyncoh {

using Complex = std::complex<double>;

// Row-major so that vec() of a matrix is simply its storage order and the
// serialized nested-array form matches memory.
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline ComplexMatrix identity(Eigen::Index n) {
  return ComplexMatrix::Identity(n, n);
}

inline ComplexMatrix zeros(Eigen::Index r, Eigen::Index c) {
  return ComplexMatrix::Zero(r, c);
}

// |i><j| on a d-dimensional space.
inline ComplexMatrix matrix_unit(Eigen::Index d, Eigen::Index i, Eigen::Index j) {
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(i, j) = Complex(1, 0);
  return m;
}

// (M + M^dag)/2; absorbs round-off before spectral calls.
inline ComplexMatrix symmetrize(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

inline double herm_deviation(const ComplexMatrix& m) {
  return (m - ComplexMatrix(m.adjoint())).cwiseAbs().maxCoeff();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

// Partial trace over the subsystems NOT listed in `keep`. `dims` are the
// subsystem dimensions in tensor order; their product must match the matrix
// dimension. Kept subsystems retain their relative order.
ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep);

// Reorders tensor factors of a square matrix on H_{0} x H_{1} x ... so that
// factor k of the result is factor perm[k] of the input.
ComplexMatrix reorder_subsystems(const ComplexMatrix& m, const std::vector<int>& dims,
                                 const std::vector<int>& perm);

struct EigResult {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // columns
};

// Hermitian eigendecomposition. Input must be Hermitian within `herm_tol`;
// it is symmetrized before the solve.
EigResult eig_hermitian(const ComplexMatrix& m, double herm_tol = 1e-10);

bool psd_check(const ComplexMatrix& m, double tol = 1e-9);

double min_eigenvalue(const ComplexMatrix& m);

// Sum of singular values.
double trace_norm(const ComplexMatrix& m);

double operator_norm(const ComplexMatrix& m);

// Hermitian square root via eigendecomposition, negative dust clipped.
ComplexMatrix sqrtm_psd(const ComplexMatrix& m);

// Uhlmann fidelity F(rho,sigma) = ||sqrt(rho) sqrt(sigma)||_1^2.
// Both arguments must be states (PSD, unit trace within state_tol).
double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                double state_tol = 1e-9);

// Row-major vectorization and its inverse.
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

}  // namespace dyncoh
