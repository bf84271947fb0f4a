#include "dyncoh/measures.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "dyncoh/rng.hpp"

namespace dyncoh {

namespace {

constexpr double kWhiteningCutoff = 1e-10;

double log2_safe(double x) { return std::log2(std::max(x, 1e-300)); }

void require_solved(const conic::SolveReport& rep, const char* what) {
  if (rep.status == conic::SolveStatus::Infeasible)
    throw conic::SolverError(std::string(what) + ": program reported infeasible");
  if (rep.status == conic::SolveStatus::MaxIter)
    throw conic::SolverError(std::string(what) + ": solver hit the iteration cap");
}

}  // namespace

conic::SolverOptions default_solver_options() {
  conic::SolverOptions o;
  if (const char* env = std::getenv("DYNCOH_SOLVER_TOL")) {
    double t = std::atof(env);
    if (t > 0) o.tol = t;
  }
  return o;
}

double dmax_state(const ComplexMatrix& rho, const ComplexMatrix& sigma) {
  auto eg = eig_hermitian(sigma, 1e-8);
  const Eigen::Index d = sigma.rows();
  // support projector and inverse square root on the support
  ComplexMatrix isqrt = ComplexMatrix::Zero(d, d);
  ComplexMatrix proj = ComplexMatrix::Zero(d, d);
  for (Eigen::Index k = 0; k < d; ++k) {
    if (eg.values(k) > kWhiteningCutoff) {
      ComplexVector v = eg.vectors.col(k);
      isqrt += (1.0 / std::sqrt(eg.values(k))) * (v * v.adjoint());
      proj += v * v.adjoint();
    }
  }
  ComplexMatrix outside = rho - proj * rho * proj;
  if (outside.cwiseAbs().maxCoeff() > 1e-9)
    return std::numeric_limits<double>::infinity();
  ComplexMatrix w = isqrt * rho * isqrt;
  auto ew = eig_hermitian(w, 1e-7);
  return log2_safe(ew.values(ew.values.size() - 1));
}

double dmax_channel(const QuantumChannel& n, const QuantumChannel& m) {
  if (n.din() != m.din() || n.dout() != m.dout())
    throw DimensionError("dmax_channel: dimension mismatch");
  return dmax_state(n.choi(), m.choi());
}

MeasureResult lr_state(const ComplexMatrix& rho, const conic::SolverOptions& opts) {
  const int d = static_cast<int>(rho.rows());
  conic::Program p;
  auto t = p.add_nonneg(d);
  std::vector<conic::Program::ScalarTerm> sts;
  for (int i = 0; i < d; ++i) sts.push_back({t, i, matrix_unit(d, i, i)});
  p.require_psd(d, {}, sts, -rho);
  for (int i = 0; i < d; ++i) p.add_objective_scalar(t, i, 1.0);

  MeasureResult r;
  r.name = "lr_state";
  r.report = p.solve(opts);
  require_solved(r.report, "lr_state");
  double lam = 0;
  ComplexMatrix sigma = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    double ti = p.scalar_value(t, i);
    lam += ti;
    sigma(i, i) = ti;
  }
  r.value = log2_safe(std::max(lam, 1.0));
  r.witness_classical = ComplexMatrix(sigma / lam);
  return r;
}

MeasureResult lr_channel(const QuantumChannel& n, const conic::SolverOptions& opts) {
  const int din = n.din(), dout = n.dout(), nn = din * dout;
  conic::Program p;
  auto x = p.add_nonneg(nn);
  auto t = p.add_free(1);
  for (int i = 0; i < din; ++i) {
    auto row = p.row();
    for (int j = 0; j < dout; ++j) row.scalar(x, i * dout + j, 1.0);
    row.scalar(t, 0, -1.0);
    row.equals(0.0);
  }
  std::vector<conic::Program::ScalarTerm> sts;
  for (int k = 0; k < nn; ++k) sts.push_back({x, k, matrix_unit(nn, k, k)});
  p.require_psd(nn, {}, sts, -n.choi());
  p.add_objective_scalar(t, 0, double(din));

  MeasureResult r;
  r.name = "lr_channel";
  r.report = p.solve(opts);
  require_solved(r.report, "lr_channel");
  double lam = din * p.scalar_value(t, 0);
  lam = std::max(lam, 1.0);  // LR >= 0 for channels
  ComplexMatrix m = ComplexMatrix::Zero(nn, nn);
  for (int k = 0; k < nn; ++k) m(k, k) = p.scalar_value(x, k) / lam;
  r.value = log2_safe(lam);
  r.witness_classical = m;
  // back-substitution: J <= lam * M must hold at solver accuracy
  r.crosscheck = std::max(0.0, -min_eigenvalue(lam * m - n.choi()));
  return r;
}

double cr_channel(const QuantumChannel& n, const conic::SolverOptions& opts) {
  return std::exp2(lr_channel(n, opts).value) - 1.0;
}

QuantumChannel dephased_channel(const QuantumChannel& n) {
  return QuantumChannel(n.din(), n.dout(), choi_pinch(n.choi()));
}

double lr_dephasing(const QuantumChannel& n) {
  // supp J is always inside supp pinch(J) for PSD J
  return std::max(0.0, dmax_state(n.choi(), choi_pinch(n.choi())));
}

namespace {

// Shared constraint group: J' is a channel Choi within half-diamond eps of
// J^N. Returns the J' block.
struct BallVars {
  conic::Var jp, z;
};

BallVars add_channel_ball(conic::Program& p, const QuantumChannel& n, double eps) {
  const int din = n.din(), dout = n.dout(), nn = din * dout;
  BallVars v;
  v.jp = p.add_psd(nn);
  v.z = p.add_psd(nn);
  // marginal: Tr_out J' = I/din
  p.add_herm_eq(din,
                {{v.jp, [din, dout](const ComplexMatrix& x) {
                    return partial_trace(x, {din, dout}, {0});
                  }}},
                {}, -(identity(din) / double(din)).eval());
  // Z >= din (J' - J^N)
  p.require_psd(nn,
                {{v.z, [](const ComplexMatrix& x) { return x; }},
                 {v.jp, [din](const ComplexMatrix& x) { return ComplexMatrix(-double(din) * x); }}},
                {}, ComplexMatrix(double(din) * n.choi()));
  // eps I - Tr_out Z >= 0
  p.require_psd(din,
                {{v.z, [din, dout](const ComplexMatrix& x) {
                    return ComplexMatrix(-partial_trace(x, {din, dout}, {0}));
                  }}},
                {}, ComplexMatrix(eps * identity(din)));
  return v;
}

}  // namespace

MeasureResult lr_smoothed(const QuantumChannel& n, double eps,
                          const conic::SolverOptions& opts) {
  if (eps < 0 || eps >= 1) throw std::runtime_error("lr_smoothed: eps must be in [0,1)");
  const int din = n.din(), dout = n.dout(), nn = din * dout;
  conic::Program p;
  auto ball = add_channel_ball(p, n, eps);
  auto x = p.add_nonneg(nn);
  auto t = p.add_free(1);
  for (int i = 0; i < din; ++i) {
    auto row = p.row();
    for (int j = 0; j < dout; ++j) row.scalar(x, i * dout + j, 1.0);
    row.scalar(t, 0, -1.0);
    row.equals(0.0);
  }
  // diag(x) - J' >= 0
  std::vector<conic::Program::ScalarTerm> sts;
  for (int k = 0; k < nn; ++k) sts.push_back({x, k, matrix_unit(nn, k, k)});
  p.require_psd(nn, {{ball.jp, [](const ComplexMatrix& m) { return ComplexMatrix(-m); }}},
                sts, zeros(nn, nn));
  p.add_objective_scalar(t, 0, double(din));

  MeasureResult r;
  r.name = "lr_smoothed";
  r.report = p.solve(opts);
  require_solved(r.report, "lr_smoothed");
  double lam = std::max(1.0, din * p.scalar_value(t, 0));
  r.value = log2_safe(lam);
  ComplexMatrix m = ComplexMatrix::Zero(nn, nn);
  for (int k = 0; k < nn; ++k) m(k, k) = p.scalar_value(x, k) / lam;
  r.witness_classical = m;
  r.witness_channel = p.value(ball.jp);
  return r;
}

MeasureResult lr_dephasing_smoothed(const QuantumChannel& n, double eps,
                                    const conic::SolverOptions& opts) {
  if (eps < 0 || eps >= 1)
    throw std::runtime_error("lr_dephasing_smoothed: eps must be in [0,1)");
  const int din = n.din(), dout = n.dout(), nn = din * dout;

  MeasureResult r;
  r.name = "lr_dephasing_smoothed";

  ComplexMatrix best_jp = n.choi();
  // Feasibility in lambda via a min-slack program: s* <= 0 iff feasible.
  // Consecutive lambdas share the structure, so each solve warm starts from
  // the previous one.
  std::vector<double> wz, wu;
  auto feasible = [&](double lam) {
    conic::Program p;
    auto ball = add_channel_ball(p, n, eps);
    auto s = p.add_free(1);
    p.require_psd(nn,
                  {{ball.jp, [lam](const ComplexMatrix& x) {
                      ComplexMatrix pin = x.diagonal().asDiagonal();
                      return ComplexMatrix(lam * pin - x);
                    }}},
                  {{s, 0, identity(nn)}}, zeros(nn, nn));
    p.add_objective_scalar(s, 0, 1.0);
    if (!wz.empty()) p.warm_start(wz, wu);
    auto rep = p.solve(opts);
    require_solved(rep, "lr_dephasing_smoothed");
    wz = p.raw_cone_point();
    wu = p.raw_dual();
    r.report = rep;
    bool ok = p.scalar_value(s, 0) <= 1e-8;
    if (ok) best_jp = p.value(ball.jp);
    return ok;
  };

  // The unsmoothed value is always a feasible upper bracket.
  double hi = std::min(std::exp2(lr_dephasing(n)) + 1e-6, 4.0 * din * dout);
  double lam = conic::bisect_feasibility(feasible, 1.0, hi, 1e-7);
  r.value = log2_safe(lam);
  r.witness_channel = best_jp;
  return r;
}

double diamond_distance(const QuantumChannel& n, const QuantumChannel& m,
                        const conic::SolverOptions& opts) {
  if (n.din() != m.din() || n.dout() != m.dout())
    throw DimensionError("diamond_distance: dimension mismatch");
  const int din = n.din(), dout = n.dout(), nn = din * dout;
  conic::Program p;
  auto z = p.add_psd(nn);
  auto lam = p.add_free(1);
  // Z >= din (J^N - J^M)
  p.require_psd(nn, {{z, [](const ComplexMatrix& x) { return x; }}}, {},
                ComplexMatrix(double(din) * (m.choi() - n.choi())));
  // lam I - Tr_out Z >= 0
  p.require_psd(din,
                {{z, [din, dout](const ComplexMatrix& x) {
                    return ComplexMatrix(-partial_trace(x, {din, dout}, {0}));
                  }}},
                {{lam, 0, identity(din)}}, zeros(din, din));
  p.add_objective_scalar(lam, 0, 1.0);
  auto rep = p.solve(opts);
  require_solved(rep, "diamond_distance");
  return std::max(0.0, p.scalar_value(lam, 0));
}

namespace {

ComplexMatrix support_projector(const ComplexMatrix& rho, double cutoff = 1e-9) {
  auto eg = eig_hermitian(rho, 1e-7);
  ComplexMatrix proj = zeros(rho.rows(), rho.cols());
  for (Eigen::Index k = 0; k < eg.values.size(); ++k)
    if (eg.values(k) > cutoff) proj += eg.vectors.col(k) * eg.vectors.col(k).adjoint();
  return proj;
}

}  // namespace

MeasureResult htest_state(const ComplexMatrix& rho, const ComplexMatrix& sigma,
                          double eps, const conic::SolverOptions& opts) {
  if (eps < 0 || eps >= 1) throw std::runtime_error("htest_state: eps must be in [0,1)");
  const int d = static_cast<int>(rho.rows());

  if (eps < 1e-12) {
    // At eps = 0 the constraint Tr(P rho) = 1 pins P to the support of rho,
    // so the optimum is Tr(Pi sigma) in closed form. (The SDP dual is not
    // attained here, which stalls first-order solvers.)
    MeasureResult r;
    r.name = "htest_state";
    ComplexMatrix proj = support_projector(rho);
    double beta = (proj * sigma).trace().real();
    if (beta < 1e-12) {
      r.infinite = true;
      r.value = std::numeric_limits<double>::infinity();
    } else {
      r.value = -std::log2(beta);
    }
    r.witness_channel = proj;
    r.report.status = conic::SolveStatus::Optimal;
    r.report.objective = beta;
    return r;
  }
  conic::Program p;
  auto pv = p.add_psd(d);
  auto s = p.add_nonneg(1);
  p.require_psd(d, {{pv, [](const ComplexMatrix& x) { return ComplexMatrix(-x); }}}, {},
                identity(d));
  p.row().trace(pv, rho).scalar(s, 0, -1.0).equals(1.0 - eps);
  p.add_objective(pv, sigma);

  MeasureResult r;
  r.name = "htest_state";
  r.report = p.solve(opts);
  require_solved(r.report, "htest_state");
  double beta = r.report.objective;
  if (beta < 1e-12) {
    r.infinite = true;
    r.value = std::numeric_limits<double>::infinity();
  } else {
    r.value = -std::log2(beta);
  }
  r.witness_channel = p.value(pv);

  // Dual cross-check: max (1-eps) mu - Tr Z  s.t.  mu rho - Z <= sigma.
  conic::Program q;
  auto mu = q.add_nonneg(1);
  auto zz = q.add_psd(d);
  q.require_psd(d, {{zz, [](const ComplexMatrix& x) { return x; }}},
                {{mu, 0, ComplexMatrix(-rho)}}, sigma);
  q.add_objective_scalar(mu, 0, -(1.0 - eps));
  q.add_objective(zz, identity(d));
  auto drep = q.solve(opts);
  if (drep.status == conic::SolveStatus::Optimal)
    r.crosscheck = std::abs(-drep.objective - beta);
  return r;
}

namespace {

// Conditional input blocks psi_i = <i|_A psi |i>_A for psi on R (x) A0.
std::vector<ComplexMatrix> conditional_blocks(const ComplexMatrix& psi, int dr, int din) {
  std::vector<ComplexMatrix> blocks;
  for (int i = 0; i < din; ++i) {
    ComplexMatrix b(dr, dr);
    for (int r = 0; r < dr; ++r)
      for (int rp = 0; rp < dr; ++rp)
        b(r, rp) = psi(Eigen::Index(r) * din + i, Eigen::Index(rp) * din + i);
    blocks.push_back(b);
  }
  return blocks;
}

// Inner certified program: beta(psi) = max_M min_P Tr(P sigma_M) through the
// Lagrangian dual, jointly convex in (M, mu, Z).
double ch_inner(const QuantumChannel& n, double eps, const ComplexMatrix& psi,
                const conic::SolverOptions& opts, ComplexMatrix* m_witness) {
  const int din = n.din(), dout = n.dout();
  const int dr = static_cast<int>(psi.rows()) / din;
  QuantumChannel idn = tensor(identity_channel(dr), n);
  ComplexMatrix rho = idn.apply_raw(psi);
  auto blocks = conditional_blocks(psi, dr, din);

  if (eps < 1e-12) {
    // Closed form: the optimal test is the support projector of rho, so the
    // best classical channel maximizes Tr(Pi sigma_M) row by row.
    ComplexMatrix proj = support_projector(symmetrize(rho));
    ComplexMatrix m = ComplexMatrix::Zero(din * dout, din * dout);
    double beta = 0;
    for (int i = 0; i < din; ++i) {
      double best = -1;
      int bestj = 0;
      for (int j = 0; j < dout; ++j) {
        double val =
            (proj * kron(blocks[i], matrix_unit(dout, j, j))).trace().real() * din;
        if (val > best) {
          best = val;
          bestj = j;
        }
      }
      beta += best / din;
      m(Eigen::Index(i) * dout + bestj, Eigen::Index(i) * dout + bestj) = 1.0 / din;
    }
    if (m_witness) *m_witness = m;
    return beta;
  }

  conic::Program p;
  auto mu = p.add_nonneg(1);
  auto z = p.add_psd(dr * dout);
  auto m = p.add_nonneg(din * dout);
  for (int i = 0; i < din; ++i) {
    auto row = p.row();
    for (int j = 0; j < dout; ++j) row.scalar(m, i * dout + j, 1.0);
    row.equals(1.0 / din);
  }
  // sigma_M - mu rho + Z >= 0 with sigma_M = din sum_ij m_ij psi_i (x) |j><j|
  std::vector<conic::Program::ScalarTerm> sts;
  for (int i = 0; i < din; ++i)
    for (int j = 0; j < dout; ++j)
      sts.push_back({m, i * dout + j,
                     ComplexMatrix(double(din) * kron(blocks[i], matrix_unit(dout, j, j)))});
  sts.push_back({mu, 0, ComplexMatrix(-rho)});
  p.require_psd(dr * dout, {{z, [](const ComplexMatrix& x) { return x; }}}, sts,
                zeros(dr * dout, dr * dout));
  p.add_objective_scalar(mu, 0, -(1.0 - eps));
  p.add_objective(z, identity(dr * dout));
  auto rep = p.solve(opts);
  require_solved(rep, "ch_coherence_lb");
  if (m_witness) {
    ComplexMatrix mm = ComplexMatrix::Zero(din * dout, din * dout);
    for (int k = 0; k < din * dout; ++k) mm(k, k) = p.scalar_value(m, k);
    *m_witness = mm;
  }
  return -rep.objective;
}

std::vector<ComplexMatrix> default_inputs(int dr, int din, std::uint64_t seed, int samples) {
  std::vector<ComplexMatrix> inputs;
  inputs.push_back(QuantumState::maximally_entangled(din).density);
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 17);
  for (int k = 0; k < samples; ++k) {
    ComplexVector v = random_pure_ket(Eigen::Index(dr) * din, rng);
    inputs.push_back(v * v.adjoint());
  }
  return inputs;
}

MeasureResult ch_generic(const QuantumChannel& n, double eps,
                         std::vector<ComplexMatrix> inputs, std::uint64_t seed,
                         int samples, int refine_rounds,
                         const conic::SolverOptions& opts, bool dephasing_flavor) {
  if (eps < 0 || eps >= 1) throw std::runtime_error("ch lower bound: eps must be in [0,1)");
  const int dr = n.din();
  bool own_inputs = inputs.empty();
  if (own_inputs) inputs = default_inputs(dr, n.din(), seed, samples);

  MeasureResult best;
  best.name = dephasing_flavor ? "ch_dephasing_lb" : "ch_coherence_lb";
  best.lower_bound_only = true;
  best.value = -1e30;

  QuantumChannel deph = dephased_channel(n);
  QuantumChannel idn = tensor(identity_channel(dr), n);
  QuantumChannel idd = tensor(identity_channel(dr), deph);

  auto eval = [&](const ComplexMatrix& psi) {
    MeasureResult r;
    if (dephasing_flavor) {
      ComplexMatrix rho = idn.apply_raw(psi);
      ComplexMatrix sig = idd.apply_raw(psi);
      r = htest_state(symmetrize(rho), symmetrize(sig), eps, opts);
    } else {
      ComplexMatrix mw;
      double beta = ch_inner(n, eps, psi, opts, &mw);
      r.value = beta < 1e-12 ? std::numeric_limits<double>::infinity() : -std::log2(beta);
      r.infinite = beta < 1e-12;
      r.witness_classical = mw;
    }
    return r;
  };

  ComplexMatrix best_psi;
  for (const auto& psi : inputs) {
    MeasureResult r = eval(psi);
    if (r.value > best.value) {
      best = r;
      best.name = dephasing_flavor ? "ch_dephasing_lb" : "ch_coherence_lb";
      best.lower_bound_only = true;
      best_psi = psi;
    }
  }
  if (own_inputs && refine_rounds > 0 && !best.infinite) {
    Rng rng(seed * 0x2545f4914f6cdd1dULL + 3);
    Eigen::Index dim = best_psi.rows();
    // local refinement around the current best input
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(best_psi);
    ComplexVector ket = es.eigenvectors().col(dim - 1);
    for (int round = 0; round < refine_rounds; ++round) {
      ComplexVector cand = ket + 0.15 * random_pure_ket(dim, rng);
      cand.normalize();
      ComplexMatrix psi = cand * cand.adjoint();
      MeasureResult r = eval(psi);
      if (r.value > best.value) {
        best = r;
        best.name = dephasing_flavor ? "ch_dephasing_lb" : "ch_coherence_lb";
        best.lower_bound_only = true;
        best_psi = psi;
        ket = cand;
      }
    }
  }
  best.witness_input = best_psi;
  return best;
}

}  // namespace

MeasureResult ch_coherence_lb(const QuantumChannel& n, double eps,
                              std::vector<ComplexMatrix> inputs, std::uint64_t seed,
                              int samples, int refine_rounds,
                              const conic::SolverOptions& opts) {
  return ch_generic(n, eps, std::move(inputs), seed, samples, refine_rounds, opts, false);
}

MeasureResult ch_dephasing_lb(const QuantumChannel& n, double eps,
                              std::vector<ComplexMatrix> inputs, std::uint64_t seed,
                              int samples, int refine_rounds,
                              const conic::SolverOptions& opts) {
  return ch_generic(n, eps, std::move(inputs), seed, samples, refine_rounds, opts, true);
}

}  // namespace dyncoh
