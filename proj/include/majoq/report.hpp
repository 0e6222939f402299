#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace majoq {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kOutRootEnvVar = "MAJOQ_OUT_ROOT";

/// Invalid configuration; the message carries the offending field path.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ExperimentConfig {
  std::string experiment;
  std::map<std::string, std::string> params;
  std::filesystem::path out_dir;
};

const std::vector<std::string>& known_experiments();

/// key = value file with one [section] per experiment; returns the section
/// for the given experiment (missing file or section is an error).
std::map<std::string, std::string> parse_config_file(
    const std::filesystem::path& path, const std::string& experiment);

struct RunSummary {
  nlohmann::ordered_json json;
};

/// Runs one experiment, writing cumulants.csv, verdicts.csv and summary.json
/// into config.out_dir. Deterministic for a fixed config and seed.
RunSummary run_experiment(const ExperimentConfig& config);

/// Runs the canonical suite into out_root/<name>/ and emits the nine-row
/// presence/absence table (results_matrix.json and results_matrix.txt).
nlohmann::ordered_json results_matrix(const std::filesystem::path& out_root);

/// Decimal, 12 significant digits; the CSV number format.
std::string format_sig(double value);

}  // namespace majoq
