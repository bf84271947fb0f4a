#include "dyncoh/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dyncoh {

using json = nlohmann::ordered_json;

namespace {

json matrix_to_j(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back(json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_j(const json& j) {
  if (!j.is_array() || j.empty()) throw SpecError("matrix: expected nested array");
  const Eigen::Index rows = j.size();
  const Eigen::Index cols = j[0].size();
  ComplexMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (static_cast<Eigen::Index>(j[i].size()) != cols)
      throw SpecError("matrix: ragged rows");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = j[i][c];
      if (e.is_number()) {
        m(i, c) = Complex(e.get<double>(), 0);
      } else if (e.is_array() && e.size() == 2) {
        m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
      } else {
        throw SpecError("matrix: entry must be number or [re, im]");
      }
    }
  }
  return m;
}

json channel_to_j(const QuantumChannel& n) {
  json j;
  j["kind"] = "choi";
  j["din"] = n.din();
  j["dout"] = n.dout();
  j["choi"] = matrix_to_j(n.choi());
  return j;
}

QuantumChannel channel_from_j(const json& j) {
  if (!j.contains("kind")) throw SpecError("channel spec: missing 'kind'");
  std::string kind = j["kind"];
  if (kind == "choi") {
    int din = j.at("din"), dout = j.at("dout");
    return QuantumChannel(din, dout, matrix_from_j(j.at("choi")), 1e-6);
  }
  if (kind == "kraus") {
    int din = j.at("din"), dout = j.at("dout");
    std::vector<ComplexMatrix> ks;
    for (const auto& km : j.at("kraus")) ks.push_back(matrix_from_j(km));
    return choi_of_kraus(ks, din, dout);
  }
  if (kind == "builder") {
    if (j.contains("spec")) return channel_from_builder(j["spec"].get<std::string>());
    std::string name = j.at("name");
    if (name == "unitary") return unitary_channel(matrix_from_j(j.at("matrix")));
    if (name == "deterministic") {
      std::vector<int> f = j.at("f").get<std::vector<int>>();
      int din = j.value("din", static_cast<int>(f.size()));
      int dout = j.value("dout", din);
      return deterministic_channel(f, din, dout);
    }
    int d = j.at("d");
    if (name == "qft") return qft_channel(d);
    if (name == "dephasing") return dephasing_channel(d);
    if (name == "identity") return identity_channel(d);
    if (name == "replacement") return replacement_channel(d);
    if (name == "depolarizing") return depolarizing_channel(d);
    throw SpecError("channel spec: unknown builder '" + name + "'");
  }
  throw SpecError("channel spec: unknown kind '" + kind + "'");
}

json superchannel_to_j(const Superchannel& t) {
  json j;
  const auto& d = t.dims();
  j["dims"] = {{"dA0", d.dA0}, {"dA1", d.dA1}, {"dB0", d.dB0}, {"dB1", d.dB1}};
  if (t.is_prepost()) {
    j["kind"] = "prepost";
    j["denv"] = t.prepost().denv;
    j["pre"] = channel_to_j(t.prepost().pre);
    j["post"] = channel_to_j(t.prepost().post);
  } else if (t.is_measure_prepare()) {
    j["kind"] = "measure_prepare";
    json brs = json::array();
    for (const auto& b : t.measure_prepare().branches) {
      json bj;
      bj["affine"] = b.affine;
      bj["coeff"] = b.coeff;
      bj["effect"] = matrix_to_j(b.effect);
      bj["target"] = channel_to_j(b.target);
      brs.push_back(std::move(bj));
    }
    j["branches"] = std::move(brs);
  } else {
    j["kind"] = "linear";
    j["matrix"] = matrix_to_j(t.action_matrix());
  }
  return j;
}

Superchannel superchannel_from_j(const json& j) {
  const auto& dj = j.at("dims");
  SuperDims d{dj.at("dA0"), dj.at("dA1"), dj.at("dB0"), dj.at("dB1")};
  std::string kind = j.at("kind");
  if (kind == "prepost") {
    PrePost pp{channel_from_j(j.at("pre")), channel_from_j(j.at("post")),
               j.value("denv", 1)};
    return Superchannel(d, std::move(pp));
  }
  if (kind == "measure_prepare") {
    MeasurePrepare mp;
    for (const auto& bj : j.at("branches")) {
      MeasurePrepareBranch b{bj.value("affine", 0.0), bj.value("coeff", 0.0),
                             matrix_from_j(bj.at("effect")),
                             channel_from_j(bj.at("target"))};
      mp.branches.push_back(std::move(b));
    }
    return Superchannel(d, std::move(mp));
  }
  if (kind == "linear")
    return Superchannel(d, LinearAction{matrix_from_j(j.at("matrix"))});
  throw SpecError("superchannel spec: unknown kind '" + kind + "'");
}

json cert_to_j(const CertificateEntry& c) {
  json j;
  j["name"] = c.name;
  j["pass"] = c.pass;
  j["residual"] = c.residual;
  j["tolerance"] = c.tolerance;
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

}  // namespace

std::string matrix_to_json(const ComplexMatrix& m) { return matrix_to_j(m).dump(); }

ComplexMatrix matrix_from_json(const std::string& text) {
  return matrix_from_j(json::parse(text));
}

QuantumChannel channel_from_json(const std::string& text) {
  try {
    return channel_from_j(json::parse(text));
  } catch (const json::exception& e) {
    throw SpecError(std::string("channel spec: ") + e.what());
  }
}

std::string channel_to_json(const QuantumChannel& n) { return channel_to_j(n).dump(2); }

QuantumChannel channel_from_builder(const std::string& spec) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (name == "deterministic") {
    std::vector<int> f;
    std::stringstream ss(arg);
    std::string tok;
    while (std::getline(ss, tok, ',')) f.push_back(std::stoi(tok));
    if (f.empty()) throw SpecError("builder deterministic: empty map");
    int dout = 1;
    for (int v : f) dout = std::max(dout, v + 1);
    return deterministic_channel(f, static_cast<int>(f.size()),
                                 std::max(dout, static_cast<int>(f.size())));
  }
  int d = 0;
  try {
    d = std::stoi(arg);
  } catch (...) {
    throw SpecError("builder '" + name + "': expected numeric argument, got '" + arg + "'");
  }
  if (name == "qft") return qft_channel(d);
  if (name == "dephasing") return dephasing_channel(d);
  if (name == "identity") return identity_channel(d);
  if (name == "replacement") return replacement_channel(d);
  if (name == "depolarizing") return depolarizing_channel(d);
  throw SpecError("unknown builder '" + name + "'");
}

Superchannel superchannel_from_json(const std::string& text) {
  try {
    return superchannel_from_j(json::parse(text));
  } catch (const json::exception& e) {
    throw SpecError(std::string("superchannel spec: ") + e.what());
  }
}

std::string superchannel_to_json(const Superchannel& t) {
  return superchannel_to_j(t).dump(2);
}

std::string verdict_to_json(const ChannelClassVerdict& v) {
  json j;
  j["class"] = to_string(v.cls);
  j["pass"] = v.pass;
  j["residual"] = v.residual;
  if (v.witness_index >= 0) j["witness_index"] = v.witness_index;
  if (v.witness) j["witness"] = matrix_to_j(*v.witness);
  return j.dump(2);
}

std::string verdict_to_json(const SuperchannelVerdict& v) {
  json j;
  j["property"] = to_string(v.property);
  j["pass"] = v.pass;
  j["residual"] = v.residual;
  if (v.property == SuperProperty::DeltaMISC) j["delta"] = v.delta;
  j["criterion"] = admissibility_criterion_version();
  if (v.witness_index >= 0) j["witness_index"] = v.witness_index;
  if (!v.note.empty()) j["note"] = v.note;
  if (v.witness) j["witness"] = matrix_to_j(*v.witness);
  return j.dump(2);
}

std::string measure_to_json(const MeasureResult& r) {
  json j;
  j["name"] = r.name;
  if (r.infinite)
    j["value_bits"] = "inf";
  else
    j["value_bits"] = r.value;
  if (r.lower_bound_only) j["lower_bound_only"] = true;
  j["solver"] = {{"status", r.report.status == conic::SolveStatus::Optimal
                                ? "optimal"
                                : (r.report.status == conic::SolveStatus::Infeasible
                                       ? "infeasible"
                                       : "maxIter")},
                 {"objective", r.report.objective},
                 {"primal_residual", r.report.primal_residual},
                 {"dual_residual", r.report.dual_residual},
                 {"gap", r.report.gap},
                 {"iterations", r.report.iterations}};
  j["crosscheck"] = r.crosscheck;
  if (r.witness_classical) j["witness_classical"] = matrix_to_j(*r.witness_classical);
  if (r.witness_channel) j["witness_channel"] = matrix_to_j(*r.witness_channel);
  if (r.witness_input) j["witness_input"] = matrix_to_j(*r.witness_input);
  return j.dump(2);
}

std::string protocol_report_to_json(const ProtocolReport& r) {
  json j;
  j["protocol"] = r.protocol;
  if (!r.channel_desc.empty()) j["channel"] = r.channel_desc;
  if (!r.cls.empty()) j["class"] = r.cls;
  j["eps"] = r.eps;
  if (r.delta > 0) j["delta"] = r.delta;
  j["degenerate"] = r.degenerate;
  if (r.d0 > 0) j["d0"] = r.d0;
  if (r.l > 0) j["l"] = r.l;
  j["rate_bits"] = r.rate_bits;
  j["bound_lower_bits"] = r.bound_lower;
  j["bound_upper_bits"] = r.bound_upper;
  j["admissibility_criterion"] = admissibility_criterion_version();
  json certs = json::array();
  for (const auto& c : r.certificates) certs.push_back(cert_to_j(c));
  j["certificates"] = std::move(certs);
  if (!r.values.empty()) {
    json vals;
    for (const auto& [k, v] : r.values) vals[k] = v;
    j["values"] = std::move(vals);
  }
  if (!r.notes.empty()) j["notes"] = r.notes;
  j["all_pass"] = r.all_pass();
  if (r.superchannel) j["superchannel"] = superchannel_to_j(*r.superchannel);
  return j.dump(2);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SpecError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw SpecError("cannot write file: " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw SpecError("cannot move report into place: " + path);
}

std::string content_hash(const std::string& data) {
  // FNV-1a, stable across platforms
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

bool looks_like_matrix(const json& j) {
  return j.is_array() && !j.empty() && j[0].is_array();
}

void flatten(const json& j, const std::string& prefix, std::ostringstream& csv,
             std::vector<std::pair<std::string, std::string>>* sidecars) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), csv,
              sidecars);
  } else if (looks_like_matrix(j)) {
    std::string payload = j.dump();
    std::string name = "matrix-" + content_hash(payload) + ".json";
    if (sidecars) sidecars->emplace_back(name, payload);
    csv << prefix << ",@" << name << "\n";
  } else if (j.is_array()) {
    for (size_t i = 0; i < j.size(); ++i)
      flatten(j[i], prefix + "[" + std::to_string(i) + "]", csv, sidecars);
  } else {
    csv << prefix << "," << j.dump() << "\n";
  }
}

}  // namespace

std::string json_to_csv(const std::string& json_text,
                        std::vector<std::pair<std::string, std::string>>* sidecars) {
  json j = json::parse(json_text);
  std::ostringstream csv;
  csv << "field,value\n";
  flatten(j, "", csv, sidecars);
  return csv.str();
}

}  // namespace dyncoh
