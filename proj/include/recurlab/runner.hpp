#pragma once

// Config-driven experiments: one config in, one report (JSON + CSV tables)
// out, with every default written back into the report.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "recurlab/certificate.hpp"
#include "recurlab/jsonio.hpp"

namespace recurlab {

inline constexpr const char* kSchema = "recurlab/1";

/// Raised for config problems; the CLI maps it to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct ExperimentConfig {
  std::string kind;  // jamison | witness | kahane | rankone | linsys | bohr | gauss
  json params = json::object();
  int bits = 128;
  std::uint64_t seed = 1;
  std::string out;

  static ExperimentConfig from_json(const json& j);
  json to_json() const;
};

const std::vector<std::string>& experiment_kinds();

struct RunResult {
  json report;                               // includes the resolved config
  std::map<std::string, std::string> files;  // CSV name -> contents
  ComponentCertificate certificate;
  bool passed = false;
};

RunResult run(const ExperimentConfig& config);

/// report.json, certificate.json and the CSV files under dir (created if needed).
void write_outputs(const RunResult& result, const std::string& dir);

/// Runs configs concurrently when they share a precision, otherwise in order.
std::vector<RunResult> run_batch(const std::vector<ExperimentConfig>& configs);

json read_json_file(const std::string& path);

}  // namespace recurlab
