// Acceptance suite: one pass/fail line per criterion, every tolerance pinned
// in code. Desk scale is d in {2,3,4}. Exit code = number of failed criteria.
//
// criterion 10 note: the first clause asks the fixed-pre-processing golden
// unit conversion to be classical-preserving for arbitrary targets; the
// numerics show (and the suite reports) that this holds exactly when the
// target's log-robustness is at most log d, so the generic-target clause
// fails honestly while the construction itself reproduces every target
// exactly. See the diagnostic lines under that criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "dyncoh/protocols.hpp"
#include "dyncoh/rng.hpp"
#include "dyncoh/serialize.hpp"

using namespace dyncoh;

namespace {

struct Line {
  std::string text;
  bool pass;
};

struct Criterion {
  int id;
  std::string title;
  bool pass = true;
  double seconds = 0;
  std::vector<Line> details;

  void check(bool ok, const std::string& what) {
    details.push_back({what, ok});
    pass = pass && ok;
  }
  void close(const std::string& what, double value, double expected, double tol) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: value %.8g expected %.8g tol %.1e", what.c_str(),
                  value, expected, tol);
    check(std::abs(value - expected) <= tol, buf);
  }
  void bound(const std::string& what, double value, double limit, bool leq) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s: %.8g %s %.8g", what.c_str(), value,
                  leq ? "<=" : ">=", limit);
    check(leq ? value <= limit : value >= limit, buf);
  }
};

double logd(int d) { return std::log2(double(d)); }

std::string g_cli;

// ---------------------------------------------------------------------------

void criterion1(Criterion& c) {
  for (int d : {2, 3, 4}) {
    QuantumChannel f = qft_channel(d), r = replacement_channel(d);
    c.close("lr(F_" + std::to_string(d) + ")", lr_channel(f).value, 2 * logd(d), 1e-5);
    c.close("lrdelta(F_" + std::to_string(d) + ")", lr_dephasing(f), 2 * logd(d), 1e-5);
    c.close("lr(R_" + std::to_string(d) + ")", lr_channel(r).value, logd(d), 1e-5);
    c.close("lrdelta(R_" + std::to_string(d) + ")", lr_dephasing(r), logd(d), 1e-5);
  }
  // finite-copy sanity for the asymptotic claims: per-copy rate stays 2 bits
  // for F_2 and the sandwich width halves at two copies
  auto rows = regularization_sanity(qft_channel(2), 0.0, 2);
  c.close("regularization k=1 per-copy", rows[0].lr_per_copy, 2.0, 1e-5);
  c.close("regularization k=2 per-copy", rows[1].lr_per_copy, 2.0, 1e-5);
  c.close("regularization width ratio", rows[1].sandwich_width / rows[0].sandwich_width,
          0.5, 1e-12);
}

void criterion2(Criterion& c) {
  for (int d : {2, 3}) {
    ComplexMatrix jf = qft_channel(d).choi();
    double worst = 0;
    for (const auto& q : deterministic_channels(d, d))
      worst = std::max(worst, std::abs((jf * q.choi()).trace().real() - 1.0 / (d * d)));
    c.bound("overlap identity d=" + std::to_string(d), worst, 1e-12, true);
  }
}

void criterion3(Criterion& c) {
  for (int l : {2, 3})
    c.close("cr(F_" + std::to_string(l) + ")", cr_channel(qft_channel(l)),
            double(l) * l - 1.0, 1e-4);
}

void cost_harness(Criterion& c, SuperProperty cls) {
  Rng rng(cls == SuperProperty::MISC ? 100 : 200);
  int failures = 0;
  double worst_diamond = 0;
  for (int t = 0; t < 20; ++t) {
    QuantumChannel n = random_channel(2, 2, 2, rng);
    for (double eps : {0.0, 0.05, 0.1}) {
      auto rep = one_shot_cost(n, eps, cls);
      bool ok = true;
      for (const auto& ce : rep.certificates) {
        if (ce.name == "reproduction_halfdiamond") {
          worst_diamond = std::max(worst_diamond, ce.residual);
          ok = ok && ce.residual <= 1e-7;
        } else if (ce.name == "admissible" || ce.name == "misc" || ce.name == "disc" ||
                   ce.name == "sandwich") {
          ok = ok && ce.pass;
        }
      }
      ok = ok && rep.bound_lower <= rep.rate_bits + 1e-7;
      if (rep.d0 >= 2) ok = ok && rep.rate_bits < rep.bound_upper + 1e-7;
      if (!ok) ++failures;
    }
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "20 channels x eps {0, 0.05, 0.1}: %d failures, worst reproduction %.2e",
                failures, worst_diamond);
  c.check(failures == 0, buf);
}

void criterion4(Criterion& c) { cost_harness(c, SuperProperty::MISC); }
void criterion5(Criterion& c) { cost_harness(c, SuperProperty::DISC); }

void criterion6(Criterion& c) {
  for (int d : {2, 3}) {
    ComplexMatrix phi = QuantumState::maximally_entangled(d).density;
    QuantumChannel f = qft_channel(d);
    c.close("ch_lb(F_" + std::to_string(d) + ", phi+)",
            ch_coherence_lb(f, 0.0, {phi}).value, 2 * logd(d), 1e-5);
    c.close("ch_dephasing_lb(F_" + std::to_string(d) + ", phi+)",
            ch_dephasing_lb(f, 0.0, {phi}).value, 2 * logd(d), 1e-5);
  }
  Rng rng(300);
  int bad = 0;
  for (int t = 0; t < 10; ++t) {
    QuantumChannel n = random_channel(2, 2, 2, rng);
    double prev = -1;
    for (double eps : {0.0, 0.05, 0.1}) {
      auto rep = one_shot_distill_bound(n, eps, SuperProperty::MISC, 300 + t);
      if (rep.bound_upper < -1e-9 || rep.bound_upper < prev - 1e-6) ++bad;
      prev = rep.bound_upper;
    }
  }
  c.check(bad == 0, "10 random channels: bounds nonnegative and monotone in eps");
}

void criterion7(Criterion& c) {
  Rng rng(700);
  int viol = 0;
  // max-relative channel divergence under admissible superchannels
  for (int t = 0; t < 100; ++t) {
    PrePost pp{random_channel(2, 4, 2, rng), random_channel(4, 2, 2, rng), 2};
    Superchannel th(SuperDims{2, 2, 2, 2}, std::move(pp));
    QuantumChannel n = random_channel(2, 2, 2, rng);
    QuantumChannel m = random_channel(2, 2, 4, rng);
    double before = dmax_channel(n, m);
    double after = dmax_channel(th.apply(n), th.apply(m));
    if (std::isfinite(before) && after > before + 1e-6) ++viol;
  }
  c.check(viol == 0, "dmax data processing, 100 superchannels");

  // log-robustness under constructed classical-preserving superchannels
  viol = 0;
  for (int t = 0; t < 100; ++t) {
    Superchannel th = (t % 3 == 0) ? qft_twirl(2)
                      : (t % 3 == 1)
                          ? dephasing_super(2, 2)
                          : *one_shot_cost(random_channel(2, 2, 2, rng), 0.0,
                                           SuperProperty::MISC)
                               .superchannel;
    if (th.dims().dA0 != 2) continue;
    QuantumChannel input = random_channel(2, 2, 2, rng);
    if (lr_channel(th.apply(input)).value > lr_channel(input).value + 1e-6) ++viol;
  }
  c.check(viol == 0, "lr monotone under MISCs, 100 instances");

  // dephasing log-robustness under dephasing-covariant superchannels
  viol = 0;
  for (int t = 0; t < 100; ++t) {
    Superchannel th =
        (t % 2 == 0) ? dephasing_super(2, 2) : replacement_from_qft_disc(2);
    QuantumChannel input = random_channel(2, 2, 2, rng);
    if (lr_dephasing(th.apply(input)) > lr_dephasing(input) + 1e-6) ++viol;
  }
  c.check(viol == 0, "lr_dephasing monotone under DISCs, 100 instances");

  viol = 0;
  for (int t = 0; t < 100; ++t) {
    ComplexMatrix a = random_density(2, rng), b = random_density(2, rng);
    QuantumChannel n = random_channel(2, 2, 2, rng);
    double before = htest_state(a, b, 0.1).value;
    double after = htest_state(n.apply_raw(a), n.apply_raw(b), 0.1).value;
    if (after > before + 1e-6) ++viol;
  }
  c.check(viol == 0, "htest data processing, 100 channel instances");
}

void criterion8(Criterion& c) {
  Rng rng(800);
  for (double delta : {0.1, 0.5}) {
    Superchannel th = mixed_delta_misc(2, delta);
    auto dm = delta_misc_check(th, delta);
    c.check(dm.pass, "delta-MISC membership at delta=" + std::to_string(delta));
    int viol = 0;
    for (int t = 0; t < 20; ++t) {
      QuantumChannel n = random_channel(2, 2, 2, rng);
      double before = lr_channel(n).value;
      double after = lr_channel(th.apply(n)).value;
      if (after > before + std::log2(1.0 + delta) + 1e-5) ++viol;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf,
                  "growth bound, 20 channels at delta=%.1f: %d violations", delta, viol);
    c.check(viol == 0, buf);
  }
  // the catalytic construction itself is a delta-MISC; spot check one
  auto rep = catalytic_cost(dephasing_channel(2), 0.0, 0.5);
  bool dm_ok = false;
  for (const auto& ce : rep.certificates)
    if (ce.name == "delta_misc") dm_ok = ce.pass;
  c.check(dm_ok, "catalytic construction passes its delta-MISC certificate");
}

void criterion9(Criterion& c) {
  {
    auto rep = catalytic_cost(dephasing_channel(2), 0.0, 1.0 / 3.0);
    c.check(rep.l == 2, "l = 2 exactly at delta = 1/3");
  }
  Rng rng(900);
  int failures = 0;
  for (int t = 0; t < 5; ++t) {
    QuantumChannel n = random_channel(2, 2, 2, rng);
    auto rep = catalytic_cost(n, 0.1, 0.5);
    bool ok = rep.values.at("p") >= 1.0 - 2.0 * rep.values.at("eps_prime") - 1e-9;
    for (const auto& ce : rep.certificates)
      if (ce.name == "half_diamond" || ce.name == "delta_misc" ||
          ce.name == "rate_upper" || ce.name == "rate_lower" || ce.name == "g_feasible")
        ok = ok && ce.pass;
    if (!ok) ++failures;
  }
  char buf[128];
  std::snprintf(buf, sizeof buf,
                "5 random qubit channels (eps 0.1, delta 0.5): %d failures", failures);
  c.check(failures == 0, buf);
}

void criterion10(Criterion& c) {
  Rng rng(1000);
  for (int d : {2, 3}) {
    int repro_ok = 0, misc_ok = 0;
    int trials = 10;
    for (int t = 0; t < trials; ++t) {
      QuantumChannel n = random_channel(d, d, 2, rng);
      auto res = golden_unit_misc(n, d);
      for (const auto& ce : res.report.certificates) {
        if (ce.name == "reproduction_halfdiamond" && ce.residual <= 1e-8) ++repro_ok;
        if (ce.name == "misc" && ce.pass) ++misc_ok;
      }
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "golden unit d=%d: reproduction <= 1e-8 on %d/%d", d,
                  repro_ok, trials);
    c.check(repro_ok == trials, buf);
    std::snprintf(buf, sizeof buf,
                  "golden unit d=%d: MISC pass on %d/%d generic targets (holds only "
                  "when LR(target) <= log d; see suite header)",
                  d, misc_ok, trials);
    c.check(misc_ok == trials, buf);

    // diagnostic: targets inside the provable threshold convert freely
    int feas_ok = 0;
    for (int t = 0; t < trials; ++t) {
      QuantumChannel raw = random_channel(d, d, 2, rng);
      ComplexMatrix mixed =
          (2.0 / 3.0) * choi_pinch(raw.choi()) + (1.0 / 3.0) * raw.choi();
      QuantumChannel target(d, d, mixed);
      auto res = golden_unit_misc(target, d);
      bool ok = true;
      for (const auto& ce : res.report.certificates)
        if (ce.name == "misc" || ce.name == "reproduction_halfdiamond")
          ok = ok && ce.pass;
      if (ok) ++feas_ok;
    }
    std::snprintf(buf, sizeof buf,
                  "diagnostic d=%d: low-robustness targets convert with MISC pass %d/%d",
                  d, feas_ok, trials);
    c.details.push_back({buf, feas_ok == trials});
  }

  for (int d : {2, 3}) {
    Superchannel theta = replacement_from_qft_disc(d);
    QuantumChannel img = theta.apply(qft_channel(d));
    c.bound("replacement d=" + std::to_string(d) + ": |Theta[F_d] - R_d|",
            diamond_upper_cheap(img, replacement_channel(d)), 1e-10, true);
    c.check(disc_check(theta).pass, "replacement d=" + std::to_string(d) + ": DISC");
    c.check(dio_check(theta.prepost().pre).pass,
            "replacement d=" + std::to_string(d) + ": pre DIO");
    c.check(dio_check(theta.prepost().post).pass,
            "replacement d=" + std::to_string(d) + ": post DIO");
  }
}

void criterion11(Criterion& c) {
  Rng rng(1100);

  // diamond SDP against brute-force input maximization: random restarts plus
  // discriminator / top-eigenvector alternation
  auto brute = [&](const QuantumChannel& n, const QuantumChannel& m) {
    QuantumChannel in_ = tensor(identity_channel(n.din()), n);
    QuantumChannel im_ = tensor(identity_channel(n.din()), m);
    ComplexMatrix t = in_.transfer() - im_.transfer();
    Eigen::Index dim = Eigen::Index(n.din()) * n.din();
    auto output_diff = [&](const ComplexVector& k) {
      ComplexMatrix psi = k * k.adjoint();
      return ComplexMatrix(in_.apply_raw(psi) - im_.apply_raw(psi));
    };
    double best = 0;
    for (int r = 0; r < 12; ++r) {
      ComplexVector k = random_pure_ket(dim, rng);
      double cur = 0;
      for (int it = 0; it < 60; ++it) {
        ComplexMatrix x = output_diff(k);
        auto eg = eig_hermitian(x, 1e-7);
        ComplexMatrix proj = zeros(x.rows(), x.cols());
        for (Eigen::Index e = 0; e < eg.values.size(); ++e)
          if (eg.values(e) > 0)
            proj += eg.vectors.col(e) * eg.vectors.col(e).adjoint();
        double val = (proj * x).trace().real();
        // input step: top eigenvector of the pulled-back discriminator
        ComplexMatrix h = symmetrize(unvec(ComplexVector(t.adjoint() * vec(proj)),
                                           dim, dim));
        auto eh = eig_hermitian(h, 1e-7);
        k = eh.vectors.col(dim - 1);
        if (val <= cur + 1e-12) break;
        cur = val;
      }
      best = std::max(best, cur);
    }
    return best;
  };
  double worst = 0;
  for (int t = 0; t < 10; ++t) {
    QuantumChannel a = random_channel(2, 2, 2, rng), b = random_channel(2, 2, 2, rng);
    double sdp = diamond_distance(a, b);
    double bf = brute(a, b);
    worst = std::max(worst, std::abs(sdp - bf));
  }
  c.bound("diamond SDP vs brute force, 10 pairs, worst gap", worst, 1e-3, true);

  // analytic qubit determinant solution for the state log-robustness
  worst = 0;
  for (int t = 0; t < 10; ++t) {
    ComplexMatrix rho = random_density(2, rng);
    double expect = std::log2(1.0 + 2.0 * std::abs(rho(0, 1)));
    worst = std::max(worst, std::abs(lr_state(rho).value - expect));
  }
  c.bound("lr_state vs 2x2 determinant solution, worst gap", worst, 1e-6, true);

  // hypothesis tests against the threshold-operator scan
  auto oracle = [&](const ComplexMatrix& rho, const ComplexMatrix& sigma, double eps) {
    auto at = [&](double mu) {
      auto eg = eig_hermitian(ComplexMatrix(mu * rho - sigma), 1e-6);
      struct D {
        double a, b, s;
      };
      std::vector<D> ds;
      for (Eigen::Index k = 0; k < rho.rows(); ++k) {
        ComplexVector v = eg.vectors.col(k);
        ds.push_back({(v.adjoint() * rho * v).value().real(),
                      (v.adjoint() * sigma * v).value().real(), eg.values(k)});
      }
      std::sort(ds.begin(), ds.end(), [](const D& x, const D& y) { return x.s > y.s; });
      double need = 1.0 - eps, got = 0, cost = 0;
      for (const auto& d : ds) {
        if (got >= need - 1e-15) break;
        double f = std::min(1.0, d.a > 1e-15 ? (need - got) / d.a : 1.0);
        got += f * d.a;
        cost += f * d.b;
      }
      return got >= need - 1e-12 ? cost : 1e30;
    };
    double best = 1e30, bm = 1;
    for (double mu = 1e-4; mu < 1e5; mu *= 1.01) {
      double v = at(mu);
      if (v < best) {
        best = v;
        bm = mu;
      }
    }
    double w = 0.01;
    for (int it = 0; it < 260; ++it) {
      for (double mu : {bm * (1 - w), bm * (1 + w)}) {
        double v = at(mu);
        if (v < best) {
          best = v;
          bm = mu;
        }
      }
      w *= 0.97;
    }
    return best;
  };
  worst = 0;
  for (int t = 0; t < 6; ++t) {
    ComplexMatrix a = random_density(2, rng), b = random_density(2, rng);
    double eps = (t % 2) ? 0.15 : 0.3;
    double sdp = std::exp2(-htest_state(a, b, eps).value);
    worst = std::max(worst, std::abs(sdp - oracle(a, b, eps)));
  }
  // eps = 0 closed form against the rank-support route
  for (int t = 0; t < 4; ++t) {
    ComplexMatrix a = random_density(2, rng, 1), b = random_density(2, rng);
    auto eg = eig_hermitian(a);
    ComplexMatrix proj = eg.vectors.col(1) * eg.vectors.col(1).adjoint();
    double expect = (proj * b).trace().real();
    worst = std::max(worst, std::abs(std::exp2(-htest_state(a, b, 0.0).value) - expect));
  }
  c.bound("htest vs extreme-point oracle, worst gap", worst, 1e-6, true);
}

void criterion12(Criterion& c) {
  if (g_cli.empty()) {
    c.check(false, "CLI path not given (--cli); cannot run the determinism check");
    return;
  }
  std::string out1 = "acceptance_repro_1.json", out2 = "acceptance_repro_2.json";
  std::string base = g_cli + " reproduce all --seed 0 --format json";
  int rc1 = std::system((base + " --out " + out1 + " > /dev/null 2>&1").c_str());
  int rc2 = std::system((base + " --out " + out2 + " > /dev/null 2>&1").c_str());
  (void)rc1;
  (void)rc2;
  std::string a, b;
  try {
    a = read_file(out1);
    b = read_file(out2);
  } catch (const std::exception& e) {
    c.check(false, std::string("reproduce runs left no reports: ") + e.what());
    return;
  }
  c.check(!a.empty() && a == b,
          "two `reproduce all --seed 0` runs are byte-identical (" +
              std::to_string(a.size()) + " bytes)");
  std::remove(out1.c_str());
  std::remove(out2.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) g_cli = argv[++i];
    if (arg == "--criterion" && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  std::vector<std::pair<std::string, std::function<void(Criterion&)>>> crits = {
      {"golden-unit log-robustness values", criterion1},
      {"classical overlap identity", criterion2},
      {"channel robustness of the QFT unit", criterion3},
      {"one-shot cost end-to-end, classical-preserving class", criterion4},
      {"one-shot cost end-to-end, dephasing-covariant class", criterion5},
      {"distillation bounds", criterion6},
      {"monotonicity suites", criterion7},
      {"delta-MISC growth bound", criterion8},
      {"catalytic construction", criterion9},
      {"golden-unit conversions (fixed pre-processing) and replacement", criterion10},
      {"solver cross-validation", criterion11},
      {"determinism of reproduce all", criterion12},
  };

  int failures = 0;
  for (size_t k = 0; k < crits.size(); ++k) {
    int id = static_cast<int>(k) + 1;
    if (only && id != only) continue;
    Criterion c{id, crits[k].first};
    auto t0 = std::chrono::steady_clock::now();
    try {
      crits[k].second(c);
    } catch (const std::exception& e) {
      c.check(false, std::string("exception: ") + e.what());
    }
    c.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    // pinned runtime budgets
    if (id == 1 && c.seconds >= 60.0) c.check(false, "runtime budget 60 s exceeded");
    if ((id == 4 || id == 5) && c.seconds >= 600.0)
      c.check(false, "runtime budget 600 s exceeded");

    std::printf("[%s] criterion %02d: %s (%.1f s)\n", c.pass ? "PASS" : "FAIL", id,
                c.title.c_str(), c.seconds);
    for (const auto& l : c.details)
      if (!l.pass || only)
        std::printf("    [%s] %s\n", l.pass ? "ok" : "FAIL", l.text.c_str());
    if (!c.pass) ++failures;
  }
  std::printf("%d criterion(s) failed\n", failures);
  return failures;
}
