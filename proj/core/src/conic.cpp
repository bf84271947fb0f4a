#include "dyncoh/conic.hpp"

#include <algorithm>
#include <cmath>

namespace dyncoh {
namespace conic {

int svec_size(int n) { return n * n; }

void svec_pack(const ComplexMatrix& m, double* out) {
  const int n = static_cast<int>(m.rows());
  const double s2 = std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < n; ++i) out[k++] = m(i, i).real();
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      out[k++] = s2 * m(i, j).real();
      out[k++] = s2 * m(i, j).imag();
    }
}

ComplexMatrix svec_unpack(const double* in, int n) {
  ComplexMatrix m(n, n);
  const double is2 = 1.0 / std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < n; ++i) m(i, i) = Complex(in[k++], 0);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      double re = in[k++] * is2;
      double im = in[k++] * is2;
      m(i, j) = Complex(re, im);
      m(j, i) = Complex(re, -im);
    }
  return m;
}

namespace {

// Hermitian basis element for svec coordinate `a` of an n x n block.
ComplexMatrix svec_basis(int n, int a) {
  std::vector<double> e(svec_size(n), 0.0);
  e[a] = 1.0;
  return svec_unpack(e.data(), n);
}

}  // namespace

Var Program::add_psd(int n) {
  Var v{static_cast<int>(vars_.size()), total_, n, svec_size(n), Var::Psd};
  vars_.push_back(v);
  total_ += v.size;
  cost_.resize(total_, 0.0);
  return v;
}

Var Program::add_herm_free(int n) {
  Var v{static_cast<int>(vars_.size()), total_, n, svec_size(n), Var::FreeHerm};
  vars_.push_back(v);
  total_ += v.size;
  cost_.resize(total_, 0.0);
  return v;
}

Var Program::add_nonneg(int count) {
  Var v{static_cast<int>(vars_.size()), total_, count, count, Var::Nonneg};
  vars_.push_back(v);
  total_ += count;
  cost_.resize(total_, 0.0);
  return v;
}

Var Program::add_free(int count) {
  Var v{static_cast<int>(vars_.size()), total_, count, count, Var::Free};
  vars_.push_back(v);
  total_ += count;
  cost_.resize(total_, 0.0);
  return v;
}

void Program::add_objective(const Var& v, const ComplexMatrix& c) {
  std::vector<double> s(v.size);
  svec_pack(symmetrize(c), s.data());
  for (int k = 0; k < v.size; ++k) cost_[v.offset + k] += s[k];
}

void Program::add_objective_scalar(const Var& v, int index, double coeff) {
  cost_[v.offset + index] += coeff;
}

Program::RowBuilder& Program::RowBuilder::trace(const Var& v, const ComplexMatrix& c) {
  std::vector<double> s(v.size);
  svec_pack(symmetrize(c), s.data());
  for (int k = 0; k < v.size; ++k)
    if (s[k] != 0.0) entries_.emplace_back(v.offset + k, s[k]);
  return *this;
}

Program::RowBuilder& Program::RowBuilder::scalar(const Var& v, int index, double coeff) {
  entries_.emplace_back(v.offset + index, coeff);
  return *this;
}

void Program::RowBuilder::equals(double rhs) { p_.append_row(entries_, rhs); }

void Program::append_row(const std::vector<std::pair<int, double>>& entries, double rhs) {
  rows_.push_back(entries);
  rhs_.push_back(rhs);
}

void Program::add_herm_eq(int n, const std::vector<MatTerm>& terms,
                          const std::vector<ScalarTerm>& scalars,
                          const ComplexMatrix& c0) {
  const int nrows = svec_size(n);
  // Sample each linear map on the Hermitian basis of its variable block.
  struct Col {
    int offset;
    std::vector<double> coeffs;  // nrows entries
  };
  std::vector<Col> cols;
  for (const auto& t : terms) {
    for (int a = 0; a < t.v.size; ++a) {
      ComplexMatrix img = t.map(svec_basis(t.v.n, a));
      Col c{t.v.offset + a, std::vector<double>(nrows)};
      svec_pack(symmetrize(img), c.coeffs.data());
      cols.push_back(std::move(c));
    }
  }
  for (const auto& s : scalars) {
    Col c{s.v.offset + s.index, std::vector<double>(nrows)};
    svec_pack(symmetrize(s.coeff), c.coeffs.data());
    cols.push_back(std::move(c));
  }
  std::vector<double> rhs(nrows);
  svec_pack(symmetrize(-c0), rhs.data());

  for (int r = 0; r < nrows; ++r) {
    std::vector<std::pair<int, double>> entries;
    for (const auto& c : cols)
      if (c.coeffs[r] != 0.0) entries.emplace_back(c.offset, c.coeffs[r]);
    append_row(entries, rhs[r]);
  }
}

Var Program::require_psd(int n, const std::vector<MatTerm>& terms,
                         const std::vector<ScalarTerm>& scalars,
                         const ComplexMatrix& c0) {
  Var slack = add_psd(n);
  auto all = terms;
  all.push_back({slack, [](const ComplexMatrix& x) { return ComplexMatrix(-x); }});
  add_herm_eq(n, all, scalars, c0);
  return slack;
}

ComplexMatrix Program::value(const Var& v) const {
  if (v.kind != Var::Psd && v.kind != Var::FreeHerm)
    throw SolverError("value(): not a matrix block");
  return svec_unpack(z_.data() + v.offset, v.n);
}

double Program::scalar_value(const Var& v, int index) const {
  return z_[v.offset + index];
}

void Program::warm_start(const std::vector<double>& z, const std::vector<double>& u) {
  if (static_cast<int>(z.size()) != total_ || static_cast<int>(u.size()) != total_)
    throw SolverError("warm_start: size mismatch");
  z_ = z;
  u_ = u;
  warm_ = true;
}

SolveReport Program::solve(const SolverOptions& opts) {
  const int n = total_;
  const int m = num_rows();

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, n);
  Eigen::VectorXd b(m);
  for (int r = 0; r < m; ++r) {
    for (const auto& [c, val] : rows_[r]) A(r, c) = val;
    b(r) = rhs_[r];
  }
  // Row equilibration.
  for (int r = 0; r < m; ++r) {
    double s = A.row(r).norm();
    if (s > 1e-12) {
      A.row(r) /= s;
      b(r) /= s;
    }
  }
  Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(cost_.data(), n);
  double cscale = std::max(1.0, c.norm());
  Eigen::VectorXd cs = c / cscale;

  Eigen::MatrixXd gram = A * A.transpose();
  gram.diagonal().array() += 1e-12;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success) throw SolverError("solve: affine factorization failed");

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  if (warm_) {
    z = Eigen::Map<const Eigen::VectorXd>(z_.data(), n);
    u = Eigen::Map<const Eigen::VectorXd>(u_.data(), n);
  }

  double rho = 1.0;
  const double alpha = 1.6;  // over-relaxation

  auto project_cone = [&](Eigen::VectorXd& w) {
    for (const auto& v : vars_) {
      switch (v.kind) {
        case Var::Psd: {
          ComplexMatrix blk = svec_unpack(w.data() + v.offset, v.n);
          Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(blk);
          Eigen::VectorXd ev = es.eigenvalues().cwiseMax(0.0);
          ComplexMatrix proj = es.eigenvectors() * ev.asDiagonal() *
                               es.eigenvectors().adjoint();
          svec_pack(proj, w.data() + v.offset);
          break;
        }
        case Var::Nonneg:
          for (int k = 0; k < v.size; ++k)
            w(v.offset + k) = std::max(0.0, w(v.offset + k));
          break;
        case Var::Free:
        case Var::FreeHerm:
          break;
      }
    }
  };

  SolveReport rep;
  Eigen::VectorXd zprev = z, y = Eigen::VectorXd::Zero(m);
  double rp = 1e30, rd = 1e30, eqres = 1e30;
  double best_progress = 1e30;
  long last_progress_iter = 0;

  long it = 0;
  for (; it < opts.max_iter; ++it) {
    Eigen::VectorXd v = z - u - cs / rho;
    y = ldlt.solve(A * v - b);
    x = v - A.transpose() * y;
    Eigen::VectorXd xh = alpha * x + (1.0 - alpha) * z;
    zprev = z;
    z = xh + u;
    project_cone(z);
    u += xh - z;

    if (it % 25 == 24 || it == opts.max_iter - 1) {
      double xs = std::max(1.0, std::max(x.norm(), z.norm()));
      rp = (x - z).norm() / xs;
      rd = rho * (z - zprev).norm() / std::max(1.0, rho * u.norm());
      eqres = (A * z - b).norm() / std::max(1.0, b.norm());
      if (rp <= opts.tol && rd <= opts.tol && eqres <= 10 * opts.tol) {
        rep.status = SolveStatus::Optimal;
        ++it;
        break;
      }
      double progress = rp + eqres;
      if (progress < 0.5 * best_progress) {
        best_progress = progress;
        last_progress_iter = it;
      }
      // Stalled feasibility residual indicates an infeasible program; the
      // dual vector carries the certificate direction.
      if (it > 30000 && it - last_progress_iter > 25000 && eqres > 1e-3) {
        rep.status = SolveStatus::Infeasible;
        ++it;
        break;
      }
    }
    if (it % 100 == 99) {
      if (rp > 10 * rd && rho < 1e6) {
        rho *= 2;
        u /= 2;
      } else if (rd > 10 * rp && rho > 1e-6) {
        rho /= 2;
        u *= 2;
      }
    }
  }

  x_.assign(x.data(), x.data() + n);
  z_.assign(z.data(), z.data() + n);
  u_.assign(u.data(), u.data() + n);
  warm_ = false;

  rep.iterations = it;
  rep.objective = c.dot(z);
  rep.primal_residual = std::max(rp, eqres);
  rep.dual_residual = rd;
  // Multiplier for Ax=b is rho*cscale*y; dual objective is -b.(rho y) * cscale.
  double dual_obj = -b.dot(y) * rho * cscale;
  rep.gap = std::abs(rep.objective - dual_obj) / (1.0 + std::abs(rep.objective));
  return rep;
}

double bisect_feasibility(const std::function<bool(double)>& feasible, double lo,
                          double hi, double tol) {
  if (!feasible(hi)) throw SolverError("bisect_feasibility: predicate infeasible at hi");
  if (feasible(lo)) return lo;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    if (feasible(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace conic
}  // namespace dyncoh
