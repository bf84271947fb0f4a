#include "dyncoh/qobj.hpp"

#include <cmath>

#include "dyncoh/rng.hpp"

namespace dyncoh {

QuantumState::QuantumState(ComplexMatrix rho, double tol) {
  if (rho.rows() != rho.cols()) throw DimensionError("QuantumState: not square");
  dim = static_cast<int>(rho.rows());
  density = symmetrize(rho);
  if (std::abs(density.trace().real() - 1.0) > tol)
    throw std::runtime_error("QuantumState: trace != 1");
  if (!psd_check(density, tol)) throw std::runtime_error("QuantumState: not PSD");
}

QuantumState QuantumState::pure(const ComplexVector& ket) {
  ComplexVector k = ket.normalized();
  ComplexMatrix rho = k * k.adjoint();
  return QuantumState(rho);
}

QuantumState QuantumState::basis(int d, int i) {
  return QuantumState(matrix_unit(d, i, i));
}

QuantumState QuantumState::maximally_mixed(int d) {
  return QuantumState(identity(d) / double(d));
}

QuantumState QuantumState::maximally_coherent(int d) {
  ComplexVector k = ComplexVector::Constant(d, Complex(1.0 / std::sqrt(double(d)), 0));
  return pure(k);
}

QuantumState QuantumState::maximally_entangled(int d) {
  ComplexVector k = ComplexVector::Zero(d * d);
  for (int i = 0; i < d; ++i) k(i * d + i) = Complex(1.0 / std::sqrt(double(d)), 0);
  return pure(k);
}

QuantumChannel::QuantumChannel(int din, int dout, ComplexMatrix choi, double tol,
                               bool validate)
    : din_(din), dout_(dout), choi_(symmetrize(choi)) {
  if (choi_.rows() != Eigen::Index(din) * dout)
    throw DimensionError("QuantumChannel: Choi dimension != din*dout");
  if (validate) {
    double r = cptp_residual();
    if (r > tol)
      throw std::runtime_error("QuantumChannel: CPTP violation, residual " +
                               std::to_string(r));
  }
}

double QuantumChannel::cptp_residual() const {
  double neg = std::max(0.0, -min_eigenvalue(choi_));
  ComplexMatrix marg = partial_trace(choi_, {din_, dout_}, {0});
  double tp = (marg - identity(din_) / double(din_)).cwiseAbs().maxCoeff();
  return std::max(neg, tp);
}

std::vector<ComplexMatrix> QuantumChannel::kraus(double cutoff) const {
  // J = (1/din) sum_e |v_e><v_e| with v_e = vec of K_e over the (in,out) legs.
  auto eg = eig_hermitian(choi_);
  std::vector<ComplexMatrix> ks;
  for (Eigen::Index e = eg.values.size() - 1; e >= 0; --e) {
    double lam = eg.values(e);
    if (lam < cutoff) continue;
    ComplexVector v = eg.vectors.col(e) * std::sqrt(lam * din_);
    // v index (i,j) = i*dout + j; K(j,i) = v(i*dout+j)
    ComplexMatrix k = ComplexMatrix::Zero(dout_, din_);
    for (int i = 0; i < din_; ++i)
      for (int j = 0; j < dout_; ++j) k(j, i) = v(Eigen::Index(i) * dout_ + j);
    ks.push_back(k);
  }
  return ks;
}

ComplexMatrix QuantumChannel::transfer() const {
  return transfer_from_choi(choi_, din_, dout_);
}

ComplexMatrix QuantumChannel::apply_raw(const ComplexMatrix& x) const {
  if (x.rows() != din_ || x.cols() != din_)
    throw DimensionError("QuantumChannel::apply: dimension mismatch");
  // N(X) = din * Tr_in[(X^T (x) I) J]
  ComplexMatrix xt = x.transpose();
  ComplexMatrix big = kron(xt, identity(dout_)) * choi_;
  return double(din_) * partial_trace(big, {din_, dout_}, {1});
}

QuantumState QuantumChannel::apply(const QuantumState& rho) const {
  return QuantumState(apply_raw(rho.density));
}

QuantumChannel choi_of_kraus(const std::vector<ComplexMatrix>& kraus, int din,
                             int dout, double tol) {
  ComplexMatrix tp = ComplexMatrix::Zero(din, din);
  for (const auto& k : kraus) {
    if (k.rows() != dout || k.cols() != din)
      throw DimensionError("choi_of_kraus: Kraus operator has wrong shape");
    tp += k.adjoint() * k;
  }
  if ((tp - identity(din)).cwiseAbs().maxCoeff() > tol)
    throw std::runtime_error("choi_of_kraus: Kraus set is not trace preserving");

  ComplexMatrix j = ComplexMatrix::Zero(Eigen::Index(din) * dout, Eigen::Index(din) * dout);
  for (const auto& k : kraus) {
    ComplexVector v(Eigen::Index(din) * dout);
    for (int i = 0; i < din; ++i)
      for (int jo = 0; jo < dout; ++jo) v(Eigen::Index(i) * dout + jo) = k(jo, i);
    j += v * v.adjoint();
  }
  return QuantumChannel(din, dout, j / double(din), std::max(tol, 1e-8));
}

QuantumChannel identity_channel(int d) {
  return choi_of_kraus({identity(d)}, d, d);
}

QuantumChannel unitary_channel(const ComplexMatrix& u) {
  int d = static_cast<int>(u.rows());
  if ((ComplexMatrix(u.adjoint() * u) - identity(d)).cwiseAbs().maxCoeff() > 1e-9)
    throw std::runtime_error("unitary_channel: matrix is not unitary");
  return choi_of_kraus({u}, d, static_cast<int>(u.rows()));
}

ComplexMatrix qft_matrix(int d) {
  ComplexMatrix f(d, d);
  const double w = 2.0 * 3.14159265358979323846 / double(d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      f(j, k) = Complex(std::cos(w * j * k), std::sin(w * j * k)) / std::sqrt(double(d));
  return f;
}

QuantumChannel qft_channel(int d) {
  if (d < 2) throw std::runtime_error("qft_channel: d must be >= 2");
  return unitary_channel(qft_matrix(d));
}

QuantumChannel dephasing_channel(int d) {
  std::vector<ComplexMatrix> ks;
  for (int i = 0; i < d; ++i) ks.push_back(matrix_unit(d, i, i));
  return choi_of_kraus(ks, d, d);
}

QuantumChannel replacement_channel(int d) {
  ComplexVector plus = ComplexVector::Constant(d, Complex(1.0 / std::sqrt(double(d)), 0));
  std::vector<ComplexMatrix> ks;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix k = ComplexMatrix::Zero(d, d);
    k.col(i) = plus;
    ks.push_back(k);
  }
  return choi_of_kraus(ks, d, d);
}

QuantumChannel deterministic_channel(const std::vector<int>& f, int din, int dout) {
  if (static_cast<int>(f.size()) != din)
    throw std::runtime_error("deterministic_channel: f must assign every input index");
  ComplexMatrix j = ComplexMatrix::Zero(Eigen::Index(din) * dout, Eigen::Index(din) * dout);
  for (int i = 0; i < din; ++i) {
    if (f[i] < 0 || f[i] >= dout)
      throw std::runtime_error("deterministic_channel: f value out of range");
    Eigen::Index idx = Eigen::Index(i) * dout + f[i];
    j(idx, idx) = Complex(1.0 / din, 0);
  }
  return QuantumChannel(din, dout, j);
}

QuantumChannel depolarizing_channel(int d) {
  ComplexMatrix j = kron(identity(d) / double(d), identity(d) / double(d));
  return QuantumChannel(d, d, j);
}

ComplexMatrix choi_from_transfer(const ComplexMatrix& t, int din, int dout) {
  // T index ((k,l),(i,j)) = <k|N(|i><j|)|l>;   J~ index ((i,k),(j,l)) = same.
  ComplexMatrix j(Eigen::Index(din) * dout, Eigen::Index(din) * dout);
  for (int i = 0; i < din; ++i)
    for (int k = 0; k < dout; ++k)
      for (int jj = 0; jj < din; ++jj)
        for (int l = 0; l < dout; ++l)
          j(Eigen::Index(i) * dout + k, Eigen::Index(jj) * dout + l) =
              t(Eigen::Index(k) * dout + l, Eigen::Index(i) * din + jj);
  return j / double(din);
}

ComplexMatrix transfer_from_choi(const ComplexMatrix& choi, int din, int dout) {
  ComplexMatrix t(Eigen::Index(dout) * dout, Eigen::Index(din) * din);
  for (int i = 0; i < din; ++i)
    for (int k = 0; k < dout; ++k)
      for (int jj = 0; jj < din; ++jj)
        for (int l = 0; l < dout; ++l)
          t(Eigen::Index(k) * dout + l, Eigen::Index(i) * din + jj) =
              double(din) * choi(Eigen::Index(i) * dout + k, Eigen::Index(jj) * dout + l);
  return t;
}

QuantumChannel tensor(const QuantumChannel& n, const QuantumChannel& m) {
  // kron order: (A0 A1 B0 B1); target order: (A0 B0 A1 B1)
  ComplexMatrix big = kron(n.choi(), m.choi());
  std::vector<int> dims = {n.din(), n.dout(), m.din(), m.dout()};
  ComplexMatrix perm = reorder_subsystems(big, dims, {0, 2, 1, 3});
  return QuantumChannel(n.din() * m.din(), n.dout() * m.dout(), perm);
}

QuantumChannel compose(const QuantumChannel& n, const QuantumChannel& m) {
  if (n.din() != m.dout()) throw DimensionError("compose: inner dimensions differ");
  ComplexMatrix t = n.transfer() * m.transfer();
  return QuantumChannel(m.din(), n.dout(), choi_from_transfer(t, m.din(), n.dout()));
}

ComplexMatrix choi_dephase_output(const ComplexMatrix& choi, int din, int dout) {
  ComplexMatrix out = ComplexMatrix::Zero(choi.rows(), choi.cols());
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < din; ++j)
      for (int k = 0; k < dout; ++k)
        out(Eigen::Index(i) * dout + k, Eigen::Index(j) * dout + k) =
            choi(Eigen::Index(i) * dout + k, Eigen::Index(j) * dout + k);
  return out;
}

ComplexMatrix choi_dephase_input(const ComplexMatrix& choi, int din, int dout) {
  ComplexMatrix out = ComplexMatrix::Zero(choi.rows(), choi.cols());
  for (int i = 0; i < din; ++i)
    for (int k = 0; k < dout; ++k)
      for (int l = 0; l < dout; ++l)
        out(Eigen::Index(i) * dout + k, Eigen::Index(i) * dout + l) =
            choi(Eigen::Index(i) * dout + k, Eigen::Index(i) * dout + l);
  return out;
}

ComplexMatrix choi_pinch(const ComplexMatrix& choi) {
  return choi.diagonal().asDiagonal();
}

namespace {

ChannelClassVerdict diagonal_verdict(ChannelClass cls, const ComplexMatrix& diff,
                                     double tol) {
  ChannelClassVerdict v;
  v.cls = cls;
  v.residual = trace_norm(diff);
  v.pass = v.residual <= tol;
  if (!v.pass) {
    v.witness = diff;
    // largest off-diagonal entry index, flattened
    double best = 0;
    for (Eigen::Index r = 0; r < diff.rows(); ++r)
      for (Eigen::Index c = 0; c < diff.cols(); ++c)
        if (std::abs(diff(r, c)) > best) {
          best = std::abs(diff(r, c));
          v.witness_index = static_cast<int>(r * diff.cols() + c);
        }
  }
  return v;
}

}  // namespace

ChannelClassVerdict cptp_check(const QuantumChannel& n, double tol) {
  ChannelClassVerdict v;
  v.cls = ChannelClass::CPTP;
  v.residual = n.cptp_residual();
  v.pass = v.residual <= tol;
  if (!v.pass) v.witness = n.choi();
  return v;
}

ChannelClassVerdict classical_check(const QuantumChannel& n, double tol) {
  ComplexMatrix diff = n.choi() - choi_pinch(n.choi());
  return diagonal_verdict(ChannelClass::Classical, diff, tol);
}

ChannelClassVerdict mio_check(const QuantumChannel& n, double tol) {
  ChannelClassVerdict v;
  v.cls = ChannelClass::MIO;
  v.pass = true;
  for (int i = 0; i < n.din(); ++i) {
    ComplexMatrix out = n.apply_raw(matrix_unit(n.din(), i, i));
    ComplexMatrix off = out - ComplexMatrix(out.diagonal().asDiagonal());
    double r = trace_norm(off);
    if (r > v.residual) {
      v.residual = r;
      if (r > tol) {
        v.pass = false;
        v.witness = out;
        v.witness_index = i;
      }
    }
  }
  return v;
}

namespace {

ComplexMatrix dephase(const ComplexMatrix& x) {
  return x.diagonal().asDiagonal();
}

}  // namespace

ChannelClassVerdict dio_check(const QuantumChannel& n, double tol) {
  // D o N = N o D on all matrix units.
  ChannelClassVerdict v;
  v.cls = ChannelClass::DIO;
  v.pass = true;
  for (int i = 0; i < n.din(); ++i)
    for (int j = 0; j < n.din(); ++j) {
      ComplexMatrix e = matrix_unit(n.din(), i, j);
      ComplexMatrix lhs = dephase(n.apply_raw(e));
      ComplexMatrix rhs = n.apply_raw(dephase(e));
      double r = trace_norm(lhs - rhs);
      if (r > v.residual) {
        v.residual = r;
        if (r > tol) {
          v.pass = false;
          v.witness = lhs - rhs;
          v.witness_index = i * n.din() + j;
        }
      }
    }
  return v;
}

ChannelClassVerdict di_check(const QuantumChannel& n, double tol) {
  // D o N = D o N o D on all matrix units.
  ChannelClassVerdict v;
  v.cls = ChannelClass::DI;
  v.pass = true;
  for (int i = 0; i < n.din(); ++i)
    for (int j = 0; j < n.din(); ++j) {
      ComplexMatrix e = matrix_unit(n.din(), i, j);
      ComplexMatrix lhs = dephase(n.apply_raw(e));
      ComplexMatrix rhs = dephase(n.apply_raw(dephase(e)));
      double r = trace_norm(lhs - rhs);
      if (r > v.residual) {
        v.residual = r;
        if (r > tol) {
          v.pass = false;
          v.witness = lhs - rhs;
          v.witness_index = i * n.din() + j;
        }
      }
    }
  return v;
}

std::string to_string(ChannelClass c) {
  switch (c) {
    case ChannelClass::CPTP: return "CPTP";
    case ChannelClass::Classical: return "classical";
    case ChannelClass::MIO: return "MIO";
    case ChannelClass::DIO: return "DIO";
    case ChannelClass::DI: return "DI";
  }
  return "?";
}

std::vector<QuantumChannel> deterministic_channels(int din, int dout) {
  std::vector<QuantumChannel> out;
  long count = 1;
  for (int i = 0; i < din; ++i) count *= dout;
  out.reserve(count);
  std::vector<int> f(din, 0);
  for (long idx = 0; idx < count; ++idx) {
    long t = idx;
    for (int i = 0; i < din; ++i) {
      f[i] = static_cast<int>(t % dout);
      t /= dout;
    }
    out.push_back(deterministic_channel(f, din, dout));
  }
  return out;
}

}  // namespace dyncoh

namespace dyncoh {

QuantumChannel random_channel(int din, int dout, int kraus_rank, Rng& rng) {
  ComplexMatrix g = rng.ginibre(Eigen::Index(dout) * kraus_rank, din);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  ComplexMatrix w = q.leftCols(din);
  std::vector<ComplexMatrix> ks;
  for (int e = 0; e < kraus_rank; ++e) {
    ComplexMatrix k(dout, din);
    for (int o = 0; o < dout; ++o)
      for (int i = 0; i < din; ++i) k(o, i) = w(Eigen::Index(e) * dout + o, i);
    ks.push_back(k);
  }
  return choi_of_kraus(ks, din, dout);
}

QuantumChannel random_unitary_channel(int d, Rng& rng) {
  return unitary_channel(random_unitary(d, rng));
}

}  // namespace dyncoh
