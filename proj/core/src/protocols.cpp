#include "dyncoh/protocols.hpp"

#include <cmath>

namespace dyncoh {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Exact row renormalization of a diagonal classical-channel Choi.
ComplexMatrix clean_classical(const ComplexMatrix& m, int din, int dout) {
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  for (int i = 0; i < din; ++i) {
    double s = 0;
    for (int j = 0; j < dout; ++j)
      s += std::max(0.0, m(Eigen::Index(i) * dout + j, Eigen::Index(i) * dout + j).real());
    for (int j = 0; j < dout; ++j) {
      Eigen::Index k = Eigen::Index(i) * dout + j;
      double v = std::max(0.0, m(k, k).real());
      out(k, k) = s > 1e-14 ? v / (din * s) : (j == 0 ? 1.0 / din : 0.0);
    }
  }
  return out;
}

ComplexMatrix clip_psd(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(symmetrize(m));
  Eigen::VectorXd v = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * v.asDiagonal() * es.eigenvectors().adjoint();
}

QuantumChannel trivial_channel() {
  return QuantumChannel(1, 1, ComplexMatrix::Constant(1, 1, Complex(1, 0)));
}

QuantumChannel qft_or_trivial(int d) {
  return d >= 2 ? qft_channel(d) : trivial_channel();
}

int min_qft_dim(double bits, double slack = 1e-9) {
  int d = 1;
  while (std::log2(double(d) * d) < bits - slack) ++d;
  return d;
}

// certificates carry empty notes unless set


}  // namespace

double domination_lambda(const ComplexMatrix& j, const ComplexMatrix& m, double hint) {
  auto ok = [&](double lam) {
    return min_eigenvalue(lam * m - j) >= -1e-11;
  };
  double hi = std::max(1.0, hint);
  int guard = 0;
  while (!ok(hi)) {
    hi *= 2;
    if (++guard > 60)
      throw std::runtime_error("domination_lambda: no dominating multiple found");
  }
  double lo = 0.0;
  for (int it = 0; it < 80; ++it) {
    double mid = 0.5 * (lo + hi);
    if (ok(mid))
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double diamond_upper_cheap(const QuantumChannel& n, const QuantumChannel& m) {
  return n.din() * 0.5 * trace_norm(n.choi() - m.choi());
}

ProtocolReport one_shot_cost(const QuantumChannel& n, double eps, SuperProperty cls,
                             const conic::SolverOptions& opts) {
  if (cls != SuperProperty::MISC && cls != SuperProperty::DISC)
    throw std::runtime_error("one_shot_cost: class must be MISC or DISC");
  const bool misc = cls == SuperProperty::MISC;
  const int din = n.din(), dout = n.dout();

  ProtocolReport rep;
  rep.protocol = "one_shot_cost";
  rep.cls = misc ? "MISC" : "DISC";
  rep.eps = eps;

  MeasureResult mr = misc ? lr_smoothed(n, eps, opts) : lr_dephasing_smoothed(n, eps, opts);
  ComplexMatrix jprime = *mr.witness_channel;

  ComplexMatrix second_target =
      misc ? clean_classical(*mr.witness_classical, din, dout) : choi_pinch(jprime);
  double lam_dom = domination_lambda(jprime, second_target, std::exp2(mr.value));

  // Solver dust can leave lam_dom a few 1e-8 above an exact integer square.
  // Mixing a sliver of the dominating classical Choi into N_eps pulls the
  // certified lambda back below the boundary at negligible ball cost; if the
  // value is genuinely above the boundary the pull fails and d0 rises.
  {
    int d_snap = min_qft_dim(mr.value, 5e-7);
    double target = double(d_snap) * d_snap;
    for (int round = 0; round < 6 && lam_dom > target; ++round) {
      double gamma =
          std::min(2e-8, 1.5 * (lam_dom - target) / std::max(lam_dom - 1.0, 1e-6));
      if (gamma <= 0) break;
      jprime = (1.0 - gamma) * jprime + gamma * second_target;
      if (!misc) second_target = choi_pinch(jprime);
      lam_dom = domination_lambda(jprime, second_target, lam_dom);
    }
  }
  QuantumChannel n_eps(din, dout, jprime, 1e-5);
  double bits_dom = std::log2(std::max(1.0, lam_dom));

  // The witness domination is certified at eigensolver accuracy and is often
  // tighter than the solver objective near integer boundaries.
  double bound_est = std::min(mr.value, bits_dom);
  rep.bound_lower = bound_est;
  // minimal d covering the certified bound, raised if the witness domination
  // still demands it
  int d0 = std::max(min_qft_dim(bound_est), min_qft_dim(bits_dom, 1e-12));
  rep.d0 = d0;
  rep.rate_bits = std::log2(double(d0) * d0);
  rep.bound_upper =
      d0 >= 2 ? bound_est + 2.0 * std::log2(double(d0) / (d0 - 1)) : bound_est;
  rep.values["lr_smoothed_bits"] = mr.value;
  rep.values["lambda_dominating"] = lam_dom;

  QuantumChannel target2(din, dout, clip_psd(second_target), 1e-5);

  if (d0 <= 1) {
    rep.degenerate = true;
    rep.notes.push_back("degenerate: smoothed log-robustness is zero; no-op superchannel");
    QuantumChannel target = dephased_channel(n_eps);
    MeasurePrepare mp;
    mp.branches.push_back({1.0, 0.0, zeros(1, 1), target});
    rep.superchannel = Superchannel(SuperDims{1, 1, din, dout}, std::move(mp));
    n_eps = target;
  } else {
    double c = double(d0) * d0 / (double(d0) * d0 - 1.0);
    ComplexMatrix eff = qft_channel(d0).choi();
    MeasurePrepare mp;
    mp.branches.push_back({-c / (double(d0) * d0), c, eff, n_eps});
    mp.branches.push_back({c, -c, eff, target2});
    rep.superchannel = Superchannel(SuperDims{d0, d0, din, dout}, std::move(mp));
  }
  const Superchannel& theta = *rep.superchannel;

  auto adm = admissibility_check(theta);
  rep.add_cert("admissible", adm.pass, adm.residual, 1e-8, adm.note);
  auto mem = misc ? misc_check(theta) : disc_check(theta);
  rep.add_cert(misc ? "misc" : "disc", mem.pass, mem.residual, 1e-8);

  QuantumChannel image = theta.apply(qft_or_trivial(d0), 1e-5);
  double repro = diamond_upper_cheap(image, n_eps);
  rep.add_cert("reproduction_halfdiamond", repro <= 1e-8, repro, 1e-8,
               "Theta[F_d0] vs N_eps, trace-norm upper bound");

  double ball = diamond_distance(n_eps, n, opts);
  rep.add_cert("smoothing_ball", ball <= eps + 1e-6, ball, eps + 1e-6,
               "half diamond distance N_eps to N");

  bool lower_ok = rep.bound_lower <= rep.rate_bits + 1e-7;
  bool upper_ok = d0 <= 1 || rep.rate_bits < rep.bound_upper + 1e-7;
  rep.add_cert("sandwich", lower_ok && upper_ok,
               std::max(rep.bound_lower - rep.rate_bits, rep.rate_bits - rep.bound_upper),
               1e-7, "bound <= log d0^2 < bound + log(d0/(d0-1))^2");
  return rep;
}

ProtocolReport one_shot_distill_bound(const QuantumChannel& n, double eps,
                                      SuperProperty cls, std::uint64_t seed,
                                      const conic::SolverOptions& opts) {
  if (cls != SuperProperty::MISC && cls != SuperProperty::DISC)
    throw std::runtime_error("one_shot_distill_bound: class must be MISC or DISC");
  const bool misc = cls == SuperProperty::MISC;

  ProtocolReport rep;
  rep.protocol = "one_shot_distill_bound";
  rep.cls = misc ? "MISC" : "DISC";
  rep.eps = eps;

  // Trivially achievable rate: exact (within eps) self-distillation.
  double achievable = 0.0;
  if (n.din() == n.dout() && n.din() >= 2) {
    double dd = diamond_distance(n, qft_channel(n.din()), opts);
    rep.values["self_distance"] = dd;
    if (dd <= eps + 1e-9) achievable = 2.0 * std::log2(double(n.din()));
  }
  rep.bound_lower = achievable;

  MeasureResult ch = misc ? ch_coherence_lb(n, std::min(2 * eps, 1.0 - 1e-9), {}, seed,
                                            64, 20, opts)
                          : ch_dephasing_lb(n, std::min(2 * eps, 1.0 - 1e-9), {}, seed,
                                            64, 20, opts);
  rep.bound_upper = ch.value;
  rep.rate_bits = achievable;
  rep.values["ch_bound_bits"] = ch.value;
  rep.notes.push_back(
      "upper bound evaluated as a certified LOWER bound on the hypothesis-testing "
      "coherence (heuristic input maximization); see measure docs");
  rep.add_cert("bound_geq_achievable", ch.value >= achievable - 1e-5,
               achievable - ch.value, 1e-5);
  return rep;
}

Superchannel qft_twirl(int d) {
  QuantumChannel f = qft_channel(d);
  ComplexMatrix jg = (identity(d * d) - f.choi()) / (double(d) * d - 1.0);
  QuantumChannel g(d, d, jg);
  MeasurePrepare mp;
  mp.branches.push_back({0.0, 1.0, f.choi(), f});
  mp.branches.push_back({1.0, -1.0, f.choi(), g});
  return Superchannel(SuperDims{d, d, d, d}, std::move(mp));
}

namespace {

// Alternate PSD clipping with exact marginal restoration.
ComplexMatrix repair_channel_choi(const ComplexMatrix& raw, int din, int dout) {
  ComplexMatrix j = symmetrize(raw);
  for (int it = 0; it < 60; ++it) {
    ComplexMatrix marg = partial_trace(j, {din, dout}, {0});
    ComplexMatrix h = identity(din) / double(din) - marg;
    j += kron(h, identity(dout) / double(dout));
    double neg = -min_eigenvalue(j);
    if (neg <= 1e-13) break;
    j = clip_psd(j);
  }
  // final marginal restoration keeps trace exactly 1
  ComplexMatrix marg = partial_trace(j, {din, dout}, {0});
  j += kron(ComplexMatrix(identity(din) / double(din) - marg),
            ComplexMatrix(identity(dout) / double(dout)));
  return j;
}

}  // namespace

CatalystDecomposition catalyst_decomposition(const QuantumChannel& n, double eps, int l,
                              const conic::SolverOptions& opts) {
  if (l < 2) throw std::runtime_error("catalyst_decomposition: l must be >= 2");
  const int din = n.din(), dout = n.dout();

  CatalystDecomposition res;
  res.eps_prime = eps * eps / (2.0 * din * din);

  QuantumChannel fl = qft_channel(l);
  QuantumChannel nf = tensor(n, fl);
  MeasureResult mr = lr_smoothed(nf, res.eps_prime, opts);
  res.lr_smoothed_bits = mr.value;
  QuantumChannel mtilde(nf.din(), nf.dout(), *mr.witness_channel, 1e-5);

  Superchannel twirl = qft_twirl(l);
  auto par = apply_super_on_B(twirl, mtilde, din, dout);
  res.m_ab = par.out;

  ComplexMatrix x0 = symmetrize(par.branch_ops[0]);
  ComplexMatrix x1 = symmetrize(par.branch_ops[1]);
  res.p = x0.trace().real();
  res.n_eps_raw = x0 / res.p;
  ComplexMatrix fixed = repair_channel_choi(res.n_eps_raw, din, dout);
  res.n_eps = QuantumChannel(din, dout, fixed, 1e-6);
  res.repair_distance = 0.5 * trace_norm(fixed - res.n_eps_raw);

  ComplexMatrix jg = (identity(l * l) - fl.choi()) / (double(l) * l - 1.0);
  if (res.p < 1.0 - 1e-12) {
    ComplexMatrix lab = kron(ComplexMatrix(x1 / (1.0 - res.p)), jg);
    res.l_ab = reorder_subsystems(lab, {din, dout, l, l}, {0, 2, 1, 3});
  }

  // reassembly against the twirl image
  ComplexMatrix rebuilt = kron(x0, fl.choi()) + kron(x1, jg);
  rebuilt = reorder_subsystems(rebuilt, {din, dout, l, l}, {0, 2, 1, 3});
  res.reassembly_residual = (rebuilt - res.m_ab.choi()).cwiseAbs().maxCoeff();
  if (res.reassembly_residual > 1e-7)
    throw std::runtime_error("catalyst_decomposition: decomposition residual above 1e-7");

  double lr_m = lr_channel(res.m_ab, opts).value;
  res.certificates.push_back({"twirl_lr_bound", lr_m <= mr.value + 1e-6,
                              lr_m - mr.value, 1e-6, "LR(M) <= LR_eps'(N x F_l)"});
  res.certificates.push_back({"p_bound", res.p >= 1.0 - 2.0 * res.eps_prime - 1e-9,
                              1.0 - 2.0 * res.eps_prime - res.p, 1e-9, "p >= 1-2eps'"});
  res.half_diamond_to_n = diamond_distance(res.n_eps, n, opts);
  res.certificates.push_back({"half_diamond", res.half_diamond_to_n <= eps + 1e-6,
                              res.half_diamond_to_n, eps + 1e-6,
                              "half diamond distance N_eps to N"});
  res.certificates.push_back({"reassembly", true, res.reassembly_residual, 1e-9, ""});
  return res;
}

ProtocolReport catalytic_cost(const QuantumChannel& n, double eps, double delta,
                              const conic::SolverOptions& opts) {
  if (delta <= 0) throw std::runtime_error("catalytic_cost: delta must be positive");
  if (eps < 0) throw std::runtime_error("catalytic_cost: eps must be nonnegative");

  ProtocolReport rep;
  rep.protocol = "catalytic_cost";
  rep.eps = eps;
  rep.delta = delta;
  rep.notes.push_back(
      "eps' convention: eps^2 / (2 |A0|^2); the source derivation uses the square "
      "in one place and |A0| in another, the smaller value keeps every inequality");

  int l = 2;
  while (double(l) * l < 1.0 + 1.0 / delta - 1e-9) ++l;
  rep.l = l;

  CatalystDecomposition l5 = catalyst_decomposition(n, eps, l, opts);
  for (const auto& c : l5.certificates) rep.certificates.push_back(c);
  double epsp = l5.eps_prime;
  rep.values["eps_prime"] = epsp;
  rep.values["p"] = l5.p;
  rep.values["lr_eps_prime_bits"] = l5.lr_smoothed_bits;

  double s = std::exp2(l5.lr_smoothed_bits - std::log2(1.0 - 2.0 * epsp)) - 1.0;
  rep.values["s"] = s;

  QuantumChannel fl = qft_channel(l);
  QuantumChannel nf_fix = tensor(l5.n_eps, fl);
  const int nin = nf_fix.din(), nout = nf_fix.dout(), nn = nin * nout;

  // Feasibility program for the filler channel G: classicality of
  // (target + s G)/(1+s), interior point picked by maximizing the minimum
  // eigenvalue of G.
  auto solve_g = [&](double sv) -> std::pair<ComplexMatrix, double> {
    conic::Program p;
    auto g = p.add_herm_free(nn);
    auto tau = p.add_free(1);
    // off-diagonals of target + s G vanish
    p.add_herm_eq(nn,
                  {{g, [sv](const ComplexMatrix& x) {
                      ComplexMatrix pin = x.diagonal().asDiagonal();
                      return ComplexMatrix(sv * (x - pin));
                    }}},
                  {}, ComplexMatrix(nf_fix.choi() - choi_pinch(nf_fix.choi())));
    p.add_herm_eq(nin,
                  {{g, [nin, nout](const ComplexMatrix& x) {
                      return partial_trace(x, {nin, nout}, {0});
                    }}},
                  {}, ComplexMatrix(-identity(nin) / double(nin)));
    p.require_psd(nn, {{g, [](const ComplexMatrix& x) { return x; }}},
                  {{tau, 0, ComplexMatrix(-identity(nn))}}, zeros(nn, nn));
    p.add_objective_scalar(tau, 0, -1.0);
    auto r = p.solve(opts);
    if (r.status != conic::SolveStatus::Optimal)
      throw conic::SolverError("catalytic_cost: G feasibility solve failed");
    return {p.value(g), p.scalar_value(tau, 0)};
  };

  auto gres = solve_g(s);
  ComplexMatrix gchoi = gres.first;
  double tau = gres.second;
  if (tau < -1e-9) {
    // bump s to the smallest classical domination of the fixed target
    MeasureResult lrfix = lr_channel(nf_fix, opts);
    double s2 = domination_lambda(nf_fix.choi(),
                                  clean_classical(*lrfix.witness_classical, nin, nout),
                                  std::exp2(lrfix.value)) -
                1.0;
    if (s2 > s) {
      rep.notes.push_back("s raised to restore G feasibility after trace repair");
      s = s2 * (1.0 + 1e-9);
      rep.values["s"] = s;
      gres = solve_g(s);
      gchoi = gres.first;
      tau = gres.second;
    }
  }
  rep.add_cert("g_feasible", tau >= -1e-9, -tau, 1e-9,
               "interior radius of the filler-channel program");
  QuantumChannel g(nin, nout, repair_channel_choi(clip_psd(gchoi), nin, nout), 1e-5);

  int d = 1;
  while (double(d) * l < std::sqrt(1.0 + s) * (1.0 - 1e-7)) ++d;
  rep.d0 = d;
  rep.rate_bits = 2.0 * std::log2(double(std::max(d, 1)));
  if (d <= 1) {
    rep.degenerate = true;
    rep.notes.push_back("degenerate: catalyst alone covers the cost (d = 1)");
  }

  // F_1 is the trivial one-dimensional unit; the effect then reduces to J^{F_l}
  QuantumChannel fdl = d >= 2 ? tensor(qft_channel(d), fl) : fl;
  MeasurePrepare mp;
  mp.branches.push_back({0.0, 1.0, fdl.choi(), nf_fix});
  mp.branches.push_back({1.0, -1.0, fdl.choi(), g});
  Superchannel theta(SuperDims{fdl.din(), fdl.dout(), nin, nout}, std::move(mp));
  rep.superchannel = theta;

  auto adm = admissibility_check(theta);
  rep.add_cert("admissible", adm.pass, adm.residual, 1e-8, adm.note);
  auto dm = delta_misc_check(theta, delta);
  rep.add_cert("delta_misc", dm.pass, dm.residual, delta + 1e-7,
               "max channel robustness over deterministic inputs");

  QuantumChannel image = theta.apply(fdl, 1e-5);
  double repro = diamond_upper_cheap(image, nf_fix);
  rep.add_cert("reproduction_exact", repro <= 1e-9, repro, 1e-9,
               "Theta[F_d x F_l] vs N_eps x F_l");

  double upper = l5.lr_smoothed_bits - std::log2(double(l) * l * (1.0 - 2.0 * epsp)) + 2.0;
  QuantumChannel nf_orig = tensor(n, fl);
  double lr_eps = eps > 0 ? lr_smoothed(nf_orig, eps, opts).value
                          : lr_channel(nf_orig, opts).value;
  double lower = lr_eps - std::log2(double(l) * l * (1.0 + delta));
  rep.bound_lower = lower;
  rep.bound_upper = upper;
  rep.values["lr_eps_bits"] = lr_eps;
  rep.add_cert("rate_upper", rep.rate_bits <= upper + 1e-6, rep.rate_bits - upper, 1e-6,
               "log d^2 <= LR_eps'(N x F_l) - log(l^2 (1-2eps')) + 2");
  rep.add_cert("rate_lower", rep.rate_bits >= lower - 1e-6, lower - rep.rate_bits, 1e-6,
               "log d^2 >= LR_eps(N x F_l) - log(l^2 (1+delta))");
  return rep;
}

GoldenUnitResult golden_unit_misc(const QuantumChannel& n, int d,
                                  const conic::SolverOptions& opts) {
  if (n.din() != d || n.dout() != d)
    throw std::runtime_error("golden_unit_misc: target must act on dimension d");

  // pre: rho -> |0><0|_{A0} (x) rho_E
  ComplexMatrix e0 = zeros(d, 1);
  e0(0, 0) = 1;
  QuantumChannel pre = choi_of_kraus({kron(e0, identity(d))}, d, d * d);

  MeasureResult lr = lr_channel(n, opts);
  ComplexMatrix cstar = clean_classical(*lr.witness_classical, d, d);
  double lam = domination_lambda(n.choi(), cstar, std::exp2(lr.value));

  bool witness_route = lam <= d + 1e-9;
  ComplexMatrix t_choi;
  if (witness_route)
    t_choi = (double(d) * cstar - n.choi()) / (d - 1.0);
  else
    t_choi = (double(d) * choi_dephase_output(n.choi(), d, d) - n.choi()) / (d - 1.0);
  QuantumChannel t(d, d, clip_psd(t_choi), 1e-6);

  // post: measure A1 in the maximally coherent basis {Z^a |+>}, feed the
  // matching correction into the kept input.
  std::vector<ComplexMatrix> qkraus;
  auto n_kraus = n.kraus();
  auto t_kraus = t.kraus();
  for (int a = 0; a < d; ++a) {
    Eigen::RowVectorXcd bra(d);
    for (int k = 0; k < d; ++k) {
      double ph = 2.0 * kPi * a * k / d;
      bra(k) = std::conj(Complex(std::cos(ph), std::sin(ph)) / std::sqrt(double(d)));
    }
    ComplexMatrix sel = zeros(d, Eigen::Index(d) * d);  // <b_a| (x) I_E
    for (int k = 0; k < d; ++k)
      for (int e = 0; e < d; ++e) sel(e, Eigen::Index(k) * d + e) = bra(k);
    const auto& branch = (a == 0) ? n_kraus : t_kraus;
    for (const auto& kmat : branch) qkraus.push_back(kmat * sel);
  }
  QuantumChannel post = choi_of_kraus(qkraus, d * d, d);

  GoldenUnitResult res{
      Superchannel(SuperDims{d, d, d, d}, PrePost{pre, post, d}), post, {}};
  ProtocolReport& rep = res.report;
  rep.protocol = "golden_unit_misc";
  rep.d0 = d;
  rep.values["lr_target_bits"] = lr.value;
  rep.values["lambda_dominating"] = lam;
  rep.notes.push_back(witness_route
                          ? "correction branch from the classical log-robustness witness"
                          : "target log-robustness exceeds log d; correction branch "
                            "falls back to output dephasing and the conversion cannot "
                            "be classical-preserving");

  QuantumChannel image = res.theta.apply(qft_channel(d), 1e-5);
  double repro = diamond_upper_cheap(image, n);
  rep.add_cert("reproduction_halfdiamond", repro <= 1e-9, repro, 1e-9,
               "Theta[F_d] vs target");

  auto adm = admissibility_check(res.theta);
  rep.add_cert("admissible", adm.pass, adm.residual, 1e-8, adm.note);
  auto mv = misc_check(res.theta);
  rep.add_cert("misc", mv.pass, mv.residual, 1e-8);
  auto qv = mio_check(post, 1e-8);
  rep.add_cert("post_mio", qv.pass, qv.residual, 1e-8);

  // LR(psi+_d) >= max_i LR(N(|i><i|)), the stated MIO feasibility condition.
  double lhs = lr_state(QuantumState::maximally_coherent(d).density, opts).value;
  double rhs = 0;
  for (int i = 0; i < d; ++i) {
    ComplexMatrix out = n.apply_raw(matrix_unit(d, i, i));
    rhs = std::max(rhs, lr_state(symmetrize(out), opts).value);
  }
  rep.values["lr_psi_plus"] = lhs;
  rep.values["lr_outputs_max"] = rhs;
  rep.add_cert("mio_feasibility_inequality", lhs >= rhs - 1e-6, rhs - lhs, 1e-6,
               "LR(psi+) >= max_i LR(N(|i><i|))");
  return res;
}

Superchannel replacement_from_qft_disc(int d) {
  if (d < 2) throw std::runtime_error("replacement_from_qft_disc: d must be >= 2");
  // pre: rho -> |0><0|_{A0} (x) |0><0|_E, post: Tr_E
  std::vector<ComplexMatrix> pk;
  ComplexMatrix v0 = zeros(Eigen::Index(d) * d, 1);
  v0(0, 0) = 1;  // |0>_{A0} |0>_E
  for (int i = 0; i < d; ++i) {
    ComplexMatrix k = zeros(Eigen::Index(d) * d, d);
    k.col(i) = v0.col(0);
    pk.push_back(k);
  }
  QuantumChannel pre = choi_of_kraus(pk, d, d * d);

  std::vector<ComplexMatrix> qk;
  for (int e = 0; e < d; ++e) {
    ComplexMatrix k = zeros(d, Eigen::Index(d) * d);
    for (int a = 0; a < d; ++a) k(a, Eigen::Index(a) * d + e) = 1;
    qk.push_back(k);
  }
  QuantumChannel post = choi_of_kraus(qk, d * d, d);
  return Superchannel(SuperDims{d, d, d, d}, PrePost{pre, post, d});
}

std::vector<RegularizationRow> regularization_sanity(const QuantumChannel& n, double eps,
                                                     int nmax,
                                                     const conic::SolverOptions& opts) {
  if (nmax > 2)
    throw std::runtime_error("regularization_sanity: copy count capped at 2");
  std::vector<RegularizationRow> rows;
  QuantumChannel cur = n;
  for (int k = 1; k <= nmax; ++k) {
    if (k > 1) cur = tensor(cur, n);
    double lr = lr_smoothed(cur, eps, opts).value;
    rows.push_back({k, lr / k, 2.0 / k});
  }
  return rows;
}

Superchannel mixed_delta_misc(int l, double delta) {
  if (l < 2) throw std::runtime_error("mixed_delta_misc: l must be >= 2");
  double w = delta / (double(l) * l - 1.0);
  const int nn = l * l;
  ComplexMatrix s = ComplexMatrix::Zero(Eigen::Index(nn) * nn, Eigen::Index(nn) * nn);
  // (1-w) * pinch
  for (int r = 0; r < nn; ++r)
    s(Eigen::Index(r) * nn + r, Eigen::Index(r) * nn + r) = 1.0 - w;
  // + w * Tr(.) J^{F_l}
  ComplexVector fvec = vec(qft_channel(l).choi());
  for (int r = 0; r < nn; ++r)
    for (Eigen::Index k = 0; k < fvec.size(); ++k)
      s(k, Eigen::Index(r) * nn + r) += w * fvec(k);
  return Superchannel(SuperDims{l, l, l, l}, LinearAction{std::move(s)});
}

}  // namespace dyncoh
