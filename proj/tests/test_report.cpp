#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "majoq/report.hpp"

using namespace majoq;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path fresh_dir(const std::string& leaf) {
  const fs::path dir = fs::temp_directory_path() / "majoq_test" / leaf;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("affine run emits the three artifacts") {
  const fs::path dir = fresh_dir("affine");
  ExperimentConfig config{"affine", {{"n", "3"}, {"m", "3"}, {"b", "5"}}, dir};
  const RunSummary summary = run_experiment(config);

  CHECK(summary.json["experiment"] == "affine");
  CHECK(summary.json["outcome"] == 3);
  CHECK(summary.json["oracle_calls"] == 1);
  CHECK(summary.json["is_clean_cycle"] == true);
  CHECK(summary.json["violation_count"] == 0);
  CHECK(summary.json["final_success_probability"].get<double>() >= 1.0 - 1e-9);

  const std::string cumulants = slurp(dir / "cumulants.csv");
  CHECK(cumulants.rfind("step_or_time,cumulant_1,", 0) == 0);
  const std::string verdicts = slurp(dir / "verdicts.csv");
  CHECK(verdicts.rfind("step,relation,max_cumulant_gap", 0) == 0);
  CHECK(verdicts.find("ReverselyMajorizes") != std::string::npos);
  CHECK(verdicts.find("Majorizes") != std::string::npos);

  // Every cumulant row of a normalized experiment ends at total mass 1.
  std::istringstream lines(cumulants);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    const std::size_t comma = line.find_last_of(',');
    CHECK(std::stod(line.substr(comma + 1)) == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("runs are deterministic byte for byte") {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  for (const fs::path& dir : {a, b}) {
    ExperimentConfig config{"parity", {{"N", "8"}, {"seed", "3"}}, dir};
    run_experiment(config);
  }
  CHECK(slurp(a / "cumulants.csv") == slurp(b / "cumulants.csv"));
  CHECK(slurp(a / "verdicts.csv") == slurp(b / "verdicts.csv"));
}

TEST_CASE("summary parameter echo reruns to identical output") {
  int case_index = 0;
  auto roundtrip = [&](const std::string& experiment,
                       std::map<std::string, std::string> params) {
    const std::string leaf = "echo_" + std::to_string(case_index++);
    const fs::path a = fresh_dir(leaf + "_a");
    const RunSummary summary = run_experiment({experiment, params, a});

    std::map<std::string, std::string> echoed;
    for (const auto& [key, value] : summary.json["parameters"].items()) {
      echoed[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    const fs::path b = fresh_dir(leaf + "_b");
    run_experiment({experiment, echoed, b});
    CHECK(slurp(a / "cumulants.csv") == slurp(b / "cumulants.csv"));
    CHECK(slurp(a / "verdicts.csv") == slurp(b / "verdicts.csv"));
  };
  roundtrip("grover", {{"n", "4"}});
  roundtrip("adiabatic_search",
            {{"N", "8"}, {"schedule", "local"}, {"dt", "0.05"}});
  roundtrip("adiabatic_search",
            {{"N", "8"}, {"schedule", "linear"}, {"T", "5"}, {"dt", "0.05"}});
}

TEST_CASE("config errors carry the field path") {
  const fs::path dir = fresh_dir("bad");
  CHECK_THROWS_WITH_AS(
      run_experiment({"affine", {{"m", "notanumber"}}, dir}),
      doctest::Contains("affine.m"), ConfigError);
  CHECK_THROWS_WITH_AS(run_experiment({"affine", {{"m", "64"}}, dir}),
                       doctest::Contains("affine.m"), ConfigError);
  CHECK_THROWS_WITH_AS(run_experiment({"affine", {{"zz", "1"}}, dir}),
                       doctest::Contains("affine.zz"), ConfigError);
  CHECK_THROWS_WITH_AS(run_experiment({"parity", {{"N", "7"}}, dir}),
                       doctest::Contains("parity.N"), ConfigError);
  CHECK_THROWS_AS(run_experiment({"mystery", {}, dir}), ConfigError);
  CHECK_THROWS_AS(run_experiment({"affine", {}, fs::path()}), ConfigError);
}

TEST_CASE("config file parsing with sections") {
  const fs::path dir = fresh_dir("cfg");
  const fs::path file = dir / "sweep.cfg";
  {
    std::ofstream out(file);
    out << "# comment\n[affine]\nn = 3\nm = 2  # inline\n\n[grover]\nn = 4\n";
  }
  const auto affine = parse_config_file(file, "affine");
  CHECK(affine.at("n") == "3");
  CHECK(affine.at("m") == "2");
  CHECK_FALSE(affine.contains("b"));
  const auto grover = parse_config_file(file, "grover");
  CHECK(grover.at("n") == "4");
  CHECK_THROWS_AS(parse_config_file(dir / "missing.cfg", "affine"), ConfigError);
}

TEST_CASE("qft run reports a clean natural cycle") {
  const fs::path dir = fresh_dir("qft");
  const RunSummary summary =
      run_experiment({"qft", {{"n", "3"}, {"m", "5"}}, dir});
  CHECK(summary.json["is_clean_cycle"] == true);
  CHECK(summary.json["natural_reverse_during_forward"] == true);
  CHECK(summary.json["natural_during_inverse"] == true);
  CHECK(summary.json["final_success_probability"].get<double>() >= 1.0 - 1e-9);
}

TEST_CASE("search run emits the two nontrivial cumulants by default") {
  const fs::path dir = fresh_dir("search_small");
  const RunSummary summary = run_experiment(
      {"adiabatic_search",
       {{"N", "8"}, {"schedule", "linear"}, {"T", "5"}, {"dt", "0.01"}},
       dir});
  CHECK(summary.json["parameters"]["T"] == 5.0);
  CHECK(summary.json["violation_count"].is_number_integer());
  CHECK(summary.json["integrator_convergence"].get<double>() < 1e-6);
  std::istringstream header(slurp(dir / "cumulants.csv"));
  std::string line;
  std::getline(header, line);
  CHECK(line == "step_or_time,cumulant_1,cumulant_2");

  const fs::path full_dir = fresh_dir("search_small_full");
  run_experiment({"adiabatic_search",
                  {{"N", "8"}, {"schedule", "linear"}, {"T", "5"},
                   {"dt", "0.01"}, {"full_cumulants", "true"}},
                 full_dir});
  std::istringstream full_header(slurp(full_dir / "cumulants.csv"));
  std::getline(full_header, line);
  CHECK(std::count(line.begin(), line.end(), ',') == 8);
}

TEST_CASE("one_per_column view is flagged unnormalized") {
  const fs::path dir = fresh_dir("walk_view");
  run_experiment(
      {"walk",
       {{"n", "2"}, {"view", "one_per_column"}, {"samples", "64"}, {"t_max", "4"}},
       dir});
  const std::string cumulants = slurp(dir / "cumulants.csv");
  CHECK(cumulants.rfind("step_or_time,unnormalized_cumulant_1,", 0) == 0);
}

TEST_CASE("format_sig uses 12 significant digits") {
  CHECK(format_sig(1.0) == "1");
  CHECK(format_sig(0.1) == "0.1");
  CHECK(format_sig(1.0 / 3.0) == "0.333333333333");
  CHECK(format_sig(1234567.891234567) == "1234567.89123");
}

}  // TEST_SUITE
