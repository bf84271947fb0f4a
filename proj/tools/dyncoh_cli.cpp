// Command-line frontend: spec ingestion, measure and protocol dispatch,
// reproduction suites, report emission.
//
// Exit codes: 0 pass, 1 input error, 2 solver failure, 3 certificate failure.

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "dyncoh/protocols.hpp"
#include "dyncoh/rng.hpp"
#include "dyncoh/serialize.hpp"

using namespace dyncoh;
using ojson = nlohmann::ordered_json;

namespace {

struct Output {
  std::string path;
  std::string format = "text";

  void emit(const std::string& json_text, const std::string& text_summary) const {
    if (format == "json") {
      std::cout << json_text << "\n";
    } else if (format == "csv") {
      std::vector<std::pair<std::string, std::string>> sidecars;
      std::string csv = json_to_csv(json_text, &sidecars);
      std::cout << csv;
      if (!path.empty()) {
        std::filesystem::path dir = std::filesystem::path(path).parent_path();
        for (const auto& [name, payload] : sidecars)
          write_file_atomic((dir / name).string(), payload);
      }
    } else {
      std::cout << text_summary;
    }
    if (!path.empty() && format != "csv") write_file_atomic(path, json_text);
    if (!path.empty() && format == "csv")
      write_file_atomic(path, json_to_csv(json_text, nullptr));
  }
};

QuantumChannel load_channel(const std::string& spec) {
  if (spec.empty()) throw SpecError("no channel given");
  if (std::filesystem::exists(spec)) return channel_from_json(read_file(spec));
  if (spec.find(':') != std::string::npos) return channel_from_builder(spec);
  throw SpecError("channel '" + spec + "' is neither a file nor a builder spec");
}

std::string fmt_cert_lines(const std::vector<CertificateEntry>& certs) {
  std::ostringstream os;
  for (const auto& c : certs)
    os << "  [" << (c.pass ? "PASS" : "FAIL") << "] " << c.name
       << "  residual=" << c.residual << " tol=" << c.tolerance
       << (c.note.empty() ? "" : "  (" + c.note + ")") << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// reproduce suites

struct SuiteRow {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
};

struct SuiteResult {
  std::string suite;
  std::vector<SuiteRow> rows;
  void row(std::string name, double value, double expected, double tol) {
    rows.push_back({std::move(name), std::abs(value - expected) <= tol, value, expected, tol});
  }
  void check(std::string name, bool pass, double value = 0, double expected = 0,
             double tol = 0) {
    rows.push_back({std::move(name), pass, value, expected, tol});
  }
  bool all_pass() const {
    for (const auto& r : rows)
      if (!r.pass) return false;
    return true;
  }
};

double log2d(int d) { return std::log2(double(d)); }

SuiteResult suite_appendix_b(const std::vector<int>& dims, const conic::SolverOptions& opts) {
  SuiteResult s{"appendix-b", {}};
  for (int d : dims) {
    QuantumChannel f = qft_channel(d), r = replacement_channel(d);
    s.row("lr(F_" + std::to_string(d) + ")", lr_channel(f, opts).value, 2 * log2d(d), 1e-5);
    s.row("lrdelta(F_" + std::to_string(d) + ")", lr_dephasing(f), 2 * log2d(d), 1e-5);
    s.row("lr(R_" + std::to_string(d) + ")", lr_channel(r, opts).value, log2d(d), 1e-5);
    s.row("lrdelta(R_" + std::to_string(d) + ")", lr_dephasing(r), log2d(d), 1e-5);
  }
  return s;
}

SuiteResult suite_overlap(const std::vector<int>& dims) {
  SuiteResult s{"classical-overlap", {}};
  for (int d : dims) {
    ComplexMatrix jf = qft_channel(d).choi();
    double worst = 0;
    for (const auto& q : deterministic_channels(d, d))
      worst = std::max(worst, std::abs((jf * q.choi()).trace().real() - 1.0 / (d * d)));
    s.check("Tr(J^F J^Q)=1/d^2 d=" + std::to_string(d), worst <= 1e-12, worst, 0, 1e-12);
  }
  return s;
}

SuiteResult suite_cost(SuperProperty cls, const std::vector<double>& epss, int trials,
                       std::uint64_t seed, const conic::SolverOptions& opts) {
  SuiteResult s{cls == SuperProperty::MISC ? "thm1" : "thm2", {}};
  for (auto& r : suite_overlap({2, 3}).rows) s.rows.push_back(r);
  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    QuantumChannel n = random_channel(2, 2, 2, rng);
    for (double eps : epss) {
      auto rep = one_shot_cost(n, eps, cls, opts);
      std::ostringstream name;
      name << "cost trial " << t << " eps " << eps;
      s.check(name.str(), rep.all_pass(), rep.rate_bits, rep.bound_lower, 2.1);
    }
  }
  return s;
}

SuiteResult suite_distill(SuperProperty cls, int trials, std::uint64_t seed,
                          const conic::SolverOptions& opts) {
  SuiteResult s{cls == SuperProperty::MISC ? "thm3" : "thm4", {}};
  bool deph = cls == SuperProperty::DISC;
  for (int d : {2, 3}) {
    ComplexMatrix phi = QuantumState::maximally_entangled(d).density;
    QuantumChannel f = qft_channel(d);
    MeasureResult m = deph ? ch_dephasing_lb(f, 0, {phi}, 0, 0, 0, opts)
                           : ch_coherence_lb(f, 0, {phi}, 0, 0, 0, opts);
    s.row("ch(F_" + std::to_string(d) + ") at phi+", m.value, 2 * log2d(d), 1e-5);
  }
  Rng rng(seed + 7);
  for (int t = 0; t < trials; ++t) {
    QuantumChannel n = random_channel(2, 2, 2, rng);
    double prev = -1;
    bool mono = true, nonneg = true;
    for (double eps : {0.0, 0.05, 0.1}) {
      auto rep = one_shot_distill_bound(n, eps, cls, seed + t, opts);
      if (rep.bound_upper < -1e-9) nonneg = false;
      if (rep.bound_upper < prev - 1e-6) mono = false;
      prev = rep.bound_upper;
    }
    s.check("distill bound trial " + std::to_string(t) + " nonneg+monotone",
            nonneg && mono, prev, 0, 0);
  }
  return s;
}

SuiteResult suite_thm5(int trials, std::uint64_t seed, const conic::SolverOptions& opts) {
  SuiteResult s{"thm5", {}};
  for (int l : {2, 3})
    s.row("cr(F_" + std::to_string(l) + ")", cr_channel(qft_channel(l), opts),
          double(l) * l - 1.0, 1e-4);
  {
    ProtocolReport r = catalytic_cost(dephasing_channel(2), 0.0, 1.0 / 3.0, opts);
    s.check("l=2 at delta=1/3", r.l == 2, r.l, 2, 0);
  }
  Rng rng(seed + 11);
  for (int t = 0; t < trials; ++t) {
    QuantumChannel n = random_channel(2, 2, 2, rng);
    auto rep = catalytic_cost(n, 0.1, 0.5, opts);
    s.check("catalytic trial " + std::to_string(t), rep.all_pass(), rep.rate_bits,
            rep.bound_lower, 16);
  }
  return s;
}

SuiteResult suite_appendix_a(const std::vector<int>& dims, int trials, std::uint64_t seed,
                             const conic::SolverOptions& opts) {
  SuiteResult s{"appendix-a", {}};
  Rng rng(seed + 13);
  for (int d : dims) {
    for (int t = 0; t < trials; ++t) {
      QuantumChannel n = random_channel(d, d, 2, rng);
      auto res = golden_unit_misc(n, d, opts);
      for (const auto& c : res.report.certificates)
        s.check("d=" + std::to_string(d) + " trial " + std::to_string(t) + " " + c.name,
                c.pass, c.residual, 0, c.tolerance);
    }
  }
  return s;
}

SuiteResult suite_appendix_c(const std::vector<int>& dims, const conic::SolverOptions& opts) {
  SuiteResult s{"appendix-c", {}};
  for (int d : dims) {
    Superchannel theta = replacement_from_qft_disc(d);
    QuantumChannel img = theta.apply(qft_channel(d), 1e-6);
    double dist = diamond_upper_cheap(img, replacement_channel(d));
    s.check("Theta[F_d]=R_d d=" + std::to_string(d), dist <= 1e-10, dist, 0, 1e-10);
    s.check("disc d=" + std::to_string(d), disc_check(theta).pass);
    s.check("pre DIO d=" + std::to_string(d), dio_check(theta.prepost().pre).pass);
    s.check("post DIO d=" + std::to_string(d), dio_check(theta.prepost().post).pass);
    s.row("lr(Theta[F_d]) d=" + std::to_string(d), lr_channel(img, opts).value, log2d(d),
          1e-5);
  }
  return s;
}

ojson suite_to_json(const SuiteResult& s, std::uint64_t seed) {
  ojson j;
  j["suite"] = s.suite;
  j["seed"] = seed;
  ojson rows = ojson::array();
  for (const auto& r : s.rows) {
    ojson rj;
    rj["name"] = r.name;
    rj["pass"] = r.pass;
    rj["value"] = r.value;
    rj["expected"] = r.expected;
    rj["tolerance"] = r.tolerance;
    rows.push_back(std::move(rj));
  }
  j["rows"] = std::move(rows);
  j["all_pass"] = s.all_pass();
  return j;
}

std::string suites_text(const std::vector<SuiteResult>& suites) {
  std::ostringstream os;
  for (const auto& s : suites) {
    os << "== suite " << s.suite << "\n";
    for (const auto& r : s.rows)
      os << "  [" << (r.pass ? "PASS" : "FAIL") << "] " << r.name << "  value=" << r.value
         << " expected=" << r.expected << " tol=" << r.tolerance << "\n";
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamic coherence toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  Output out;
  std::uint64_t seed = 0;
  double tol = 0;
  long max_iter = 0;
  app.add_option("--out", out.path, "write the JSON report to this path (atomic)");
  app.add_option("--format", out.format, "text|json|csv")
      ->check(CLI::IsMember({"text", "json", "csv"}));
  app.add_option("--seed", seed, "seed for sampled inputs (default 0)");
  app.add_option("--tol", tol, "solver tolerance override");
  app.add_option("--max-iter", max_iter, "solver iteration cap override");

  auto opts = [&] {
    conic::SolverOptions o = default_solver_options();
    if (tol > 0) o.tol = tol;
    if (max_iter > 0) o.max_iter = max_iter;
    return o;
  };

  // --- measure ---------------------------------------------------------
  auto* m = app.add_subcommand("measure", "evaluate a coherence measure");
  std::string m_kind, m_chan, m_a, m_b, m_rho, m_sigma;
  double m_eps = 0;
  bool m_deph = false;
  int m_samples = 64, m_rounds = 20;
  m->add_option("kind", m_kind, "lr|lrdelta|cr|dmax|diamond|htest|ch")->required();
  m->add_option("channel", m_chan, "channel spec (builder or file)");
  m->add_option("--builder,--spec", m_chan, "channel spec (builder or file)");
  m->add_option("--a", m_a, "first channel (dmax, diamond)");
  m->add_option("--b", m_b, "second channel (dmax, diamond)");
  m->add_option("--rho", m_rho, "state file (htest)");
  m->add_option("--sigma", m_sigma, "state file (htest)");
  m->add_option("--eps", m_eps, "smoothing / test error");
  m->add_flag("--dephasing", m_deph, "dephasing flavor (ch)");
  m->add_option("--samples", m_samples, "sampled inputs (ch)");
  m->add_option("--rounds", m_rounds, "refinement rounds (ch)");

  // --- protocols --------------------------------------------------------
  auto* c = app.add_subcommand("cost", "one-shot simulation cost from the QFT unit");
  std::string c_class = "misc", c_chan;
  double c_eps = 0;
  c->add_option("channel", c_chan);
  c->add_option("--builder,--spec", c_chan, "channel spec (builder or file)");
  c->add_option("--class", c_class, "misc|disc")->check(CLI::IsMember({"misc", "disc"}));
  c->add_option("--eps", c_eps);

  auto* db = app.add_subcommand("distill-bound", "one-shot distillation bound");
  std::string db_class = "misc", db_chan;
  double db_eps = 0;
  db->add_option("channel", db_chan);
  db->add_option("--builder,--spec", db_chan, "channel spec (builder or file)");
  db->add_option("--class", db_class)->check(CLI::IsMember({"misc", "disc"}));
  db->add_option("--eps", db_eps);

  auto* cat = app.add_subcommand("catalytic", "one-shot catalytic cost");
  std::string cat_chan;
  double cat_eps = 0, cat_delta = 0.5;
  cat->add_option("channel", cat_chan);
  cat->add_option("--builder,--spec", cat_chan, "channel spec (builder or file)");
  cat->add_option("--eps", cat_eps);
  cat->add_option("--delta", cat_delta)->required();

  auto* v = app.add_subcommand("verify", "certify a superchannel property");
  std::string v_prop, v_file;
  double v_delta = 0;
  v->add_option("--property", v_prop, "admissible|misc|disc|delta-misc")->required();
  v->add_option("file", v_file, "superchannel JSON")->required();
  v->add_option("--delta", v_delta);

  auto* rp = app.add_subcommand("reproduce", "run a reproduction suite");
  std::string rp_suite;
  std::string rp_dims = "2,3";
  int rp_trials = 2;
  std::string rp_eps = "0,0.05";
  rp->add_option("suite", rp_suite,
                 "thm1|thm2|thm3|thm4|thm5|appendix-a|appendix-b|appendix-c|all")
      ->required();
  rp->add_option("--d", rp_dims, "dimension list");
  rp->add_option("--trials", rp_trials, "random trials per configuration");
  rp->add_option("--eps", rp_eps, "eps list for cost suites");

  auto* ci = app.add_subcommand("channel", "channel utilities");
  auto* ci_info = ci->add_subcommand("info", "validate and classify a channel");
  std::string ci_chan;
  ci_info->add_option("channel", ci_chan)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (m->parsed()) {
      MeasureResult r;
      if (m_kind == "lr") {
        QuantumChannel n = load_channel(m_chan);
        r = m_eps > 0 ? lr_smoothed(n, m_eps, opts()) : lr_channel(n, opts());
      } else if (m_kind == "lrdelta") {
        QuantumChannel n = load_channel(m_chan);
        if (m_eps > 0) {
          r = lr_dephasing_smoothed(n, m_eps, opts());
        } else {
          r.name = "lr_dephasing";
          r.value = lr_dephasing(n);
          r.report.status = conic::SolveStatus::Optimal;
        }
      } else if (m_kind == "cr") {
        r.name = "cr_channel";
        r.value = cr_channel(load_channel(m_chan), opts());
        r.report.status = conic::SolveStatus::Optimal;
      } else if (m_kind == "dmax") {
        r.name = "dmax_channel";
        r.value = dmax_channel(load_channel(m_a), load_channel(m_b));
        r.infinite = std::isinf(r.value);
        r.report.status = conic::SolveStatus::Optimal;
      } else if (m_kind == "diamond") {
        r.name = "diamond_distance";
        r.value = diamond_distance(load_channel(m_a), load_channel(m_b), opts());
        r.report.status = conic::SolveStatus::Optimal;
      } else if (m_kind == "htest") {
        ComplexMatrix rho = matrix_from_json(read_file(m_rho));
        ComplexMatrix sigma = matrix_from_json(read_file(m_sigma));
        r = htest_state(rho, sigma, m_eps, opts());
      } else if (m_kind == "ch") {
        QuantumChannel n = load_channel(m_chan);
        r = m_deph ? ch_dephasing_lb(n, m_eps, {}, seed, m_samples, m_rounds, opts())
                   : ch_coherence_lb(n, m_eps, {}, seed, m_samples, m_rounds, opts());
      } else {
        throw SpecError("unknown measure kind '" + m_kind + "'");
      }
      std::ostringstream txt;
      txt << r.name << " = " << r.value << " bits\n";
      out.emit(measure_to_json(r), txt.str());
      return 0;
    }

    if (c->parsed() || db->parsed() || cat->parsed()) {
      ProtocolReport rep;
      if (c->parsed()) {
        rep = one_shot_cost(load_channel(c_chan), c_eps,
                            c_class == "misc" ? SuperProperty::MISC : SuperProperty::DISC,
                            opts());
        rep.channel_desc = c_chan;
      } else if (db->parsed()) {
        rep = one_shot_distill_bound(
            load_channel(db_chan), db_eps,
            db_class == "misc" ? SuperProperty::MISC : SuperProperty::DISC, seed, opts());
        rep.channel_desc = db_chan;
      } else {
        rep = catalytic_cost(load_channel(cat_chan), cat_eps, cat_delta, opts());
        rep.channel_desc = cat_chan;
      }
      std::ostringstream txt;
      txt << rep.protocol << ": rate " << rep.rate_bits << " bits, bounds ["
          << rep.bound_lower << ", " << rep.bound_upper << "]"
          << (rep.degenerate ? " (degenerate)" : "") << "\n"
          << fmt_cert_lines(rep.certificates);
      out.emit(protocol_report_to_json(rep), txt.str());
      return rep.all_pass() ? 0 : 3;
    }

    if (v->parsed()) {
      std::string text = read_file(v_file);
      // allow a protocol report with an embedded superchannel
      {
        auto doc = nlohmann::ordered_json::parse(text, nullptr, false);
        if (doc.is_object() && doc.contains("superchannel"))
          text = doc["superchannel"].dump();
      }
      Superchannel t = superchannel_from_json(text);
      SuperchannelVerdict verdict;
      if (v_prop == "admissible")
        verdict = admissibility_check(t);
      else if (v_prop == "misc")
        verdict = misc_check(t);
      else if (v_prop == "disc")
        verdict = disc_check(t);
      else if (v_prop == "delta-misc")
        verdict = delta_misc_check(t, v_delta);
      else
        throw SpecError("unknown property '" + v_prop + "'");
      std::ostringstream txt;
      txt << to_string(verdict.property) << ": " << (verdict.pass ? "PASS" : "FAIL")
          << " residual=" << verdict.residual << "\n";
      out.emit(verdict_to_json(verdict), txt.str());
      return verdict.pass ? 0 : 3;
    }

    if (rp->parsed()) {
      std::vector<int> dims;
      {
        std::stringstream ss(rp_dims);
        std::string tok;
        while (std::getline(ss, tok, ',')) dims.push_back(std::stoi(tok));
      }
      std::vector<double> epss;
      {
        std::stringstream ss(rp_eps);
        std::string tok;
        while (std::getline(ss, tok, ',')) epss.push_back(std::stod(tok));
      }
      std::vector<SuiteResult> suites;
      auto want = [&](const std::string& s) { return rp_suite == s || rp_suite == "all"; };
      if (want("appendix-b")) suites.push_back(suite_appendix_b(dims, opts()));
      if (want("thm1")) suites.push_back(suite_cost(SuperProperty::MISC, epss, rp_trials, seed, opts()));
      if (want("thm2")) suites.push_back(suite_cost(SuperProperty::DISC, epss, rp_trials, seed, opts()));
      if (want("thm3")) suites.push_back(suite_distill(SuperProperty::MISC, rp_trials, seed, opts()));
      if (want("thm4")) suites.push_back(suite_distill(SuperProperty::DISC, rp_trials, seed, opts()));
      if (want("thm5")) suites.push_back(suite_thm5(rp_trials, seed, opts()));
      if (want("appendix-a")) suites.push_back(suite_appendix_a(dims, rp_trials, seed, opts()));
      if (want("appendix-c")) suites.push_back(suite_appendix_c(dims, opts()));
      if (suites.empty()) throw SpecError("unknown suite '" + rp_suite + "'");

      ojson j;
      j["command"] = "reproduce";
      j["suite"] = rp_suite;
      j["seed"] = seed;
      ojson arr = ojson::array();
      bool all = true;
      for (const auto& s : suites) {
        arr.push_back(suite_to_json(s, seed));
        all = all && s.all_pass();
      }
      j["suites"] = std::move(arr);
      j["all_pass"] = all;
      out.emit(j.dump(2), suites_text(suites));
      return all ? 0 : 3;
    }

    if (ci_info->parsed()) {
      QuantumChannel n = load_channel(ci_chan);
      ojson j;
      j["din"] = n.din();
      j["dout"] = n.dout();
      j["cptp_residual"] = n.cptp_residual();
      for (auto [name, verdict] :
           std::vector<std::pair<std::string, ChannelClassVerdict>>{
               {"classical", classical_check(n)},
               {"mio", mio_check(n)},
               {"dio", dio_check(n)},
               {"di", di_check(n)}}) {
        j[name] = {{"pass", verdict.pass}, {"residual", verdict.residual}};
      }
      std::ostringstream txt;
      txt << "channel " << n.din() << " -> " << n.dout()
          << ", cptp residual " << n.cptp_residual() << "\n"
          << j.dump(2) << "\n";
      out.emit(j.dump(2), txt.str());
      return 0;
    }
  } catch (const SpecError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const conic::SolverError& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 2;
  } catch (const DimensionError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
