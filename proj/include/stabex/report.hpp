#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "stabex/diagram.hpp"

namespace stabex {

/// One resolved CLI invocation. Every field is echoed into the report so
/// identical configs (plus seed, for sampled modes) give identical bytes.
struct RunConfig {
  std::string command;  // axioms | classify | karoubi | chain | spectra
  std::string instance;
  int bound = 1;
  std::optional<int> oracle_bound;
  std::string cls = "stable";  // axioms: split | stable | all-kcp
  int degrees = 2;             // chain support length
  int length = 2;              // spectrum length
  std::optional<int> sample;   // sampled sweep size (default exhaustive)
  std::optional<uint64_t> seed;
};

struct RunResult {
  nlohmann::json report;  // full JSON document for standard output
  bool pass = false;      // drives the process exit code
  std::string summary;    // one-line human summary for standard error
};

/// Executes a command. Throws std::invalid_argument for usage errors
/// (bad descriptor, unknown class, missing seed for sampled mode).
RunResult run_command(const RunConfig& cfg);

/// Payload builders, exposed for direct testing.
nlohmann::json axiom_report_json(const AxiomReport& r);
nlohmann::json verdict_json(const SemiStableVerdict& v);
nlohmann::json classify_record_json(const ClassifyRecord& r);
nlohmann::json equiv_report_json(const DiagramEquivReport& r);

}  // namespace stabex
