#pragma once

// JSON wire formats for channels, superchannels, verdicts, measures and
// protocol reports. Complex numbers serialize as [re, im]; matrices as
// row-major nested arrays. Reports are emitted with stable key order so a
// fixed (spec, seed, config) reproduces byte-identical files.

#include <string>
#include <utility>
#include <vector>

#include "dyncoh/protocols.hpp"

namespace dyncoh {

struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const std::string& text);

// {"kind":"choi"|"kraus"|"builder", ...}; builders: qft(d), dephasing(d),
// identity(d), replacement(d), deterministic(f), unitary(matrix).
QuantumChannel channel_from_json(const std::string& text);
std::string channel_to_json(const QuantumChannel& n);

// builder shorthand "name:arg", e.g. "qft:3", "deterministic:0,1".
QuantumChannel channel_from_builder(const std::string& spec);

// {"kind":"prepost"|"measure_prepare"|"linear", ...}
Superchannel superchannel_from_json(const std::string& text);
std::string superchannel_to_json(const Superchannel& t);

std::string verdict_to_json(const ChannelClassVerdict& v);
std::string verdict_to_json(const SuperchannelVerdict& v);
std::string measure_to_json(const MeasureResult& r);
std::string protocol_report_to_json(const ProtocolReport& r);

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

// Flattens scalar fields of a JSON document into "path,value" CSV rows;
// matrix-like arrays are written to side files named by content hash and
// referenced from the CSV.
std::string json_to_csv(const std::string& json_text,
                        std::vector<std::pair<std::string, std::string>>* sidecars);

std::string content_hash(const std::string& data);

}  // namespace dyncoh
