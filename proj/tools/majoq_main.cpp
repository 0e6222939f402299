#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "majoq/report.hpp"

namespace {

constexpr int kExitConfigError = 2;
constexpr int kExitSimulationError = 3;

std::filesystem::path resolve_out_dir(const std::string& out_flag,
                                      const std::string& leaf) {
  if (!out_flag.empty()) {
    return out_flag;
  }
  const char* root = std::getenv(majoq::kOutRootEnvVar);
  return std::filesystem::path(root != nullptr ? root : "majoq_out") / leaf;
}

// Remaining tokens are free-form "--key value" parameter pairs.
std::map<std::string, std::string> collect_params(
    const std::vector<std::string>& extras) {
  std::map<std::string, std::string> params;
  for (std::size_t i = 0; i < extras.size(); i += 2) {
    std::string key = extras[i];
    if (key.rfind("--", 0) != 0 || key.size() <= 2) {
      throw majoq::ConfigError("expected --key value pairs, got '" + key + "'");
    }
    key = key.substr(2);
    if (i + 1 >= extras.size()) {
      throw majoq::ConfigError(key + ": missing value");
    }
    params[key] = extras[i + 1];
  }
  return params;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"majoq: quantum algorithm simulations with majorization "
               "instrumentation"};
  app.require_subcommand(1);

  std::string out_flag;
  std::string config_file;

  CLI::App* suite = app.add_subcommand(
      "suite", "run the canonical experiment suite and emit the results matrix");
  suite->add_option("--out", out_flag, "output directory");

  std::vector<CLI::App*> experiment_cmds;
  for (const std::string& name : majoq::known_experiments()) {
    CLI::App* cmd = app.add_subcommand(name, "run the " + name + " experiment");
    cmd->add_option("--out", out_flag, "output directory");
    cmd->add_option("--config", config_file,
                    "key = value file with one [experiment] section each");
    cmd->allow_extras();
    experiment_cmds.push_back(cmd);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  try {
    if (suite->parsed()) {
      const std::filesystem::path out = resolve_out_dir(out_flag, "suite");
      std::filesystem::create_directories(out);
      const auto matrix = majoq::results_matrix(out);
      std::cout << matrix["rows"].size() << " observations written to "
                << (out / "results_matrix.json").string() << "\n";
      for (const auto& row : matrix["rows"]) {
        std::cout << (row["agrees"].get<bool>() ? "  ok   " : "  MISS ")
                  << row["observation"].get<std::string>() << " -> "
                  << row["observed"].get<std::string>() << "\n";
      }
      return 0;
    }

    for (std::size_t i = 0; i < experiment_cmds.size(); ++i) {
      CLI::App* cmd = experiment_cmds[i];
      if (!cmd->parsed()) {
        continue;
      }
      majoq::ExperimentConfig config;
      config.experiment = majoq::known_experiments()[i];
      if (!config_file.empty()) {
        config.params = majoq::parse_config_file(config_file, config.experiment);
      }
      for (auto& [key, value] : collect_params(cmd->remaining())) {
        config.params[key] = value;  // flags win over the config file
      }
      config.out_dir = resolve_out_dir(out_flag, config.experiment);
      const majoq::RunSummary summary = majoq::run_experiment(config);
      std::cout << summary.json.dump(2) << "\n";
      return 0;
    }
  } catch (const majoq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "simulation failure: " << e.what() << "\n";
    return kExitSimulationError;
  }
  return 0;
}
