#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "experiment/builtin_models.hpp"
#include "zakai/error_budget.hpp"

namespace zakai::experiment {

struct DiscretizationConfig {
  int K = 8;
  int N = 2;
  int n = 4;
  double delta = 0.01;
  double T = 1.0;
  double delta_obs = 0.0;  // 0: delta / (8 n)
  double delta_sim = 0.0;  // 0: delta_obs / 4
  int substeps = 0;        // 0: default_substeps(n)
  int quad_m = 0;          // 0: default_quadrature_nodes
  int oracle_K = 0;        // 0: K; basis size of the Galerkin oracle
};

struct RunConfig {
  std::uint64_t seed = 1;
  int paths = 1;
  std::string out = "zakai-out";
  std::string oracle = "auto";  // auto | kalman | galerkin
  int threads = 0;              // 0: hardware concurrency
};

/// Constants for error-budget columns in sweep output. Present only when at
/// least one budget.* key appears.
struct BudgetConfig {
  double nu = 0.0;
  double w = 0.0;
  double C = 0.0;
  double C_nuT = 0.0;
  double C_nuTw = 0.0;
  double C_f = 0.0;
  double eps_B = 0.0;
};

struct SweepConfig {
  std::string axis;  // K | N | n | delta
  std::vector<double> values;
};

struct ExperimentConfig {
  ModelParams model;
  DiscretizationConfig disc;
  RunConfig run;
  std::optional<BudgetConfig> budget;
  SweepConfig sweep;
};

/// Line-oriented `section.key = value`; blank lines and `#` comments are
/// ignored. Unknown keys and malformed values raise ValidationError naming
/// the key. Parsing does not validate cross-field preconditions.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::filesystem::path& path);

/// Fills the derived defaults (delta_obs, delta_sim, substeps, quad_m,
/// oracle_K) and checks every precondition the downstream modules impose.
/// Throws ValidationError whose message starts with the offending field.
ExperimentConfig resolve(ExperimentConfig config);

/// Writes `config` back in the same text form, one key per line.
void write_config(std::ostream& out, const ExperimentConfig& config);

ErrorBudget make_budget(const ExperimentConfig& config);

}  // namespace zakai::experiment
