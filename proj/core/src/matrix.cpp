#include "dyncoh/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dyncoh {

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

namespace {

// Decomposes a flat index into per-subsystem digits (big-endian tensor order).
void split_index(Eigen::Index flat, const std::vector<int>& dims, std::vector<int>& out) {
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    out[k] = static_cast<int>(flat % dims[k]);
    flat /= dims[k];
  }
}

}  // namespace

ComplexMatrix partial_trace(const ComplexMatrix& m, const std::vector<int>& dims,
                            const std::vector<int>& keep) {
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  if (m.rows() != total || m.cols() != total)
    throw DimensionError("partial_trace: dims do not factor the matrix dimension");

  std::vector<int> traced;
  for (int k = 0; k < static_cast<int>(dims.size()); ++k)
    if (std::find(keep.begin(), keep.end(), k) == keep.end()) traced.push_back(k);

  Eigen::Index dkeep = 1, dtr = 1;
  for (int k : keep) dkeep *= dims[k];
  for (int k : traced) dtr *= dims[k];

  ComplexMatrix out = ComplexMatrix::Zero(dkeep, dkeep);
  const int n = static_cast<int>(dims.size());
  std::vector<int> rowd(n), cold(n);

  // Walk kept row/col indices and sum the diagonal of the traced factors.
  for (Eigen::Index rk = 0; rk < dkeep; ++rk) {
    for (Eigen::Index ck = 0; ck < dkeep; ++ck) {
      Complex acc(0, 0);
      for (Eigen::Index t = 0; t < dtr; ++t) {
        // assemble full flat indices
        Eigen::Index r = rk, tt = t;
        std::vector<int> kd(keep.size()), td(traced.size());
        for (int k = static_cast<int>(keep.size()) - 1; k >= 0; --k) {
          kd[k] = static_cast<int>(r % dims[keep[k]]);
          r /= dims[keep[k]];
        }
        for (int k = static_cast<int>(traced.size()) - 1; k >= 0; --k) {
          td[k] = static_cast<int>(tt % dims[traced[k]]);
          tt /= dims[traced[k]];
        }
        for (size_t k = 0; k < keep.size(); ++k) rowd[keep[k]] = kd[k];
        for (size_t k = 0; k < traced.size(); ++k) rowd[traced[k]] = td[k];
        cold = rowd;
        for (int k = static_cast<int>(keep.size()) - 1, cc = static_cast<int>(ck); k >= 0; --k) {
          cold[keep[k]] = cc % dims[keep[k]];
          cc /= dims[keep[k]];
        }
        Eigen::Index fr = 0, fc = 0;
        for (int k = 0; k < n; ++k) {
          fr = fr * dims[k] + rowd[k];
          fc = fc * dims[k] + cold[k];
        }
        acc += m(fr, fc);
      }
      out(rk, ck) = acc;
    }
  }
  return out;
}

ComplexMatrix reorder_subsystems(const ComplexMatrix& m, const std::vector<int>& dims,
                                 const std::vector<int>& perm) {
  const int n = static_cast<int>(dims.size());
  Eigen::Index total = 1;
  for (int d : dims) total *= d;
  if (m.rows() != total || m.cols() != total)
    throw DimensionError("reorder_subsystems: dims do not factor the matrix dimension");

  std::vector<int> newdims(n);
  for (int k = 0; k < n; ++k) newdims[k] = dims[perm[k]];

  // new flat index -> old flat index
  std::vector<Eigen::Index> map(total);
  std::vector<int> digits(n);
  for (Eigen::Index idx = 0; idx < total; ++idx) {
    split_index(idx, newdims, digits);
    std::vector<int> old(n);
    for (int k = 0; k < n; ++k) old[perm[k]] = digits[k];
    Eigen::Index flat = 0;
    for (int k = 0; k < n; ++k) flat = flat * dims[k] + old[k];
    map[idx] = flat;
  }

  ComplexMatrix out(total, total);
  for (Eigen::Index r = 0; r < total; ++r)
    for (Eigen::Index c = 0; c < total; ++c) out(r, c) = m(map[r], map[c]);
  return out;
}

EigResult eig_hermitian(const ComplexMatrix& m, double herm_tol) {
  if (m.rows() != m.cols()) throw DimensionError("eig_hermitian: matrix not square");
  if (herm_deviation(m) > herm_tol * std::max(1.0, m.cwiseAbs().maxCoeff()))
    throw std::runtime_error("eig_hermitian: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(symmetrize(m));
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eig_hermitian: eigensolver failed to converge");
  EigResult r;
  r.values = es.eigenvalues();
  r.vectors = es.eigenvectors();
  return r;
}

double min_eigenvalue(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(symmetrize(m),
                                                     Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

bool psd_check(const ComplexMatrix& m, double tol) {
  return min_eigenvalue(m) >= -tol;
}

double trace_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().sum();
}

double operator_norm(const ComplexMatrix& m) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

ComplexMatrix sqrtm_psd(const ComplexMatrix& m) {
  auto eg = eig_hermitian(m, 1e-8);
  RealVector s = eg.values.cwiseMax(0.0).cwiseSqrt();
  return eg.vectors * s.asDiagonal() * eg.vectors.adjoint();
}

double fidelity(const ComplexMatrix& rho, const ComplexMatrix& sigma, double state_tol) {
  auto check_state = [&](const ComplexMatrix& s, const char* name) {
    if (std::abs(s.trace().real() - 1.0) > state_tol || std::abs(s.trace().imag()) > state_tol ||
        !psd_check(s, state_tol))
      throw std::runtime_error(std::string("fidelity: ") + name + " is not a state");
  };
  check_state(rho, "rho");
  check_state(sigma, "sigma");
  ComplexMatrix sr = sqrtm_psd(rho);
  double f = trace_norm(sr * sqrtm_psd(sigma));
  return std::min(1.0, f * f);
}

ComplexVector vec(const ComplexMatrix& m) {
  ComplexVector v(m.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(k++) = m(i, j);
  return v;
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) throw DimensionError("unvec: size mismatch");
  ComplexMatrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(k++);
  return m;
}

}  // namespace dyncoh
