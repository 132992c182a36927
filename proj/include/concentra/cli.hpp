#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "concentra/linalg.hpp"
#include "concentra/report.hpp"

namespace concentra {

/// Parsed experiment invocation. Every numeric parameter is validated
/// against the target operation's preconditions before sampling starts.
struct ExperimentConfig {
  std::string experiment;
  std::string space;
  std::string measure = "gaussian";
  std::string mode;
  std::string check;
  Index k = 2;
  Index k2 = 0;
  Index n = 2;
  std::vector<double> eps;
  std::vector<double> t_grid;
  std::vector<double> q_list;
  std::vector<Index> n_list;
  double delta = 0.5;
  double dot = 0.0;
  double p = 1.0;
  double s_mult = 1.1;
  std::size_t samples = 100000;
  std::size_t trials = 200;
  std::size_t probes = 0;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::string format = "csv";
};

struct ExperimentInfo {
  std::string name;
  std::string op;  // module operation the experiment drives
  std::string description;
};

/// Stable, alphabetically ordered experiment catalog.
const std::vector<ExperimentInfo>& experiment_catalog();

/// Runs one experiment and produces its report. Throws ConfigError for
/// invalid configurations before any sampling happens.
Report run_experiment(const ExperimentConfig& cfg);

/// Full command-line entry: parse, dispatch, write the report, and map
/// outcomes to exit codes (0 pass, 1 asserted-row failure, 2 config error,
/// 3 runtime failure).
int cli_main(int argc, char** argv);

}  // namespace concentra
