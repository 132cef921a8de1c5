#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "experiment/config.hpp"
#include "zakai/chaos_propagator.hpp"
#include "zakai/galerkin.hpp"
#include "zakai/hermite_space.hpp"
#include "zakai/observations.hpp"
#include "zakai/reference.hpp"

namespace zakai::experiment {

/// Everything derived from the model section for one basis size.
struct ModelSetup {
  FilterModel model;
  std::shared_ptr<const SpatialBasis> basis;
  QuadratureGrid grid;
  GalerkinSystem system;
  Vector p0;   // projection of the initial density
  Vector one;  // coefficients of f = 1
  Vector fx;   // coefficients of f(x) = x
};

ModelSetup make_setup(const ExperimentConfig& config, int K);

/// Table for the configured (K, N, n, delta). Written as text so that
/// reruns are byte identical.
PropagatorTable build_table(const ExperimentConfig& config);

/// Oracle used by compare and sweep: "kalman" or "galerkin".
std::string oracle_kind(const ExperimentConfig& config);

/// Oracle conditional mean of X at the window boundaries of `observations`.
EstimateSeries oracle_estimates(const ExperimentConfig& config, const SampleRecord& observations);

/// Normalization floor: 1e-12 times the initial mass.
double normalization_floor(const ModelSetup& setup);

// Each command takes the configuration as parsed (it resolves defaults and
// validates before doing any work) and returns the files it wrote.

std::filesystem::path cmd_precompute(const ExperimentConfig& config, const std::filesystem::path& table_file);

/// path_<i>/observations.txt and path_<i>/truth.txt for each run path.
std::vector<std::filesystem::path> cmd_simulate(const ExperimentConfig& config, const std::filesystem::path& out_dir);

/// states.csv (t, p_1..p_K) and estimates.csv (t, estimate, mass).
std::vector<std::filesystem::path> cmd_filter(const ExperimentConfig& config, const std::filesystem::path& table_file,
                                              const std::filesystem::path& obs_file,
                                              const std::filesystem::path& out_dir);

/// Reads out_dir/estimates.csv, runs the oracle on the same observations and
/// writes compare.csv and compare_summary.csv.
std::vector<std::filesystem::path> cmd_compare(const ExperimentConfig& config, const std::filesystem::path& obs_file,
                                               const std::filesystem::path& out_dir);

/// One row of sweep.csv.
struct SweepRow {
  double value = 0.0;
  ExperimentConfig point;  // resolved configuration of this row
  int paths = 0;
  double mse = 0.0;  // mean over paths of the time-averaged squared error
  double mse_se = 0.0;
  double rmse = 0.0;
};

std::vector<SweepRow> run_sweep(const ExperimentConfig& config);

/// sweep.csv with one row per value of sweep.axis.
std::filesystem::path cmd_sweep(const ExperimentConfig& config, const std::filesystem::path& out_dir);

}  // namespace zakai::experiment
