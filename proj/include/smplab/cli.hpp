#pragma once

#include "smplab/core.hpp"
#include "smplab/harness.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace smplab {

/// Everything that determines one experiment's output.
struct ExperimentConfig {
  std::string protocol = "equality-xor";
  int k = 3;
  std::size_t n = 2;
  int c = 1;
  /// Empty means the protocol's native mode.
  std::string mode;
  std::uint64_t trials = 100'000;
  std::uint64_t seed = 1;
  std::string distribution = "uniform";
  std::string out;
  std::string format = "json";

  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
};

/// Protocol and problem named by the config. Throws ConfigError /
/// UnsupportedModeError for bad combinations.
ProtocolSpec build_protocol(const ExperimentConfig& config);
Problem problem_for(const ExperimentConfig& config);

enum ExitCode : int {
  kExitOk = 0,
  kExitInvariantFailed = 1,
  kExitConfigError = 2,
  kExitCapacityError = 3,
};

/// `args` excludes the program name. Results go to `out` unless --out names a
/// file; diagnostics go to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace smplab
