#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "zakai/galerkin.hpp"
#include "zakai/observations.hpp"

namespace zakai {

struct SimulationConfig {
  double T = 1.0;
  double dt_sim = 1e-3;
  double dt_obs = 1e-3;  // integer multiple of dt_sim
  std::uint64_t seed = 0;
};

void validate(const SimulationConfig& config);

/// Inverse-CDF sampler for a one-dimensional density, tabulated by the
/// midpoint rule on [lo, hi] and normalized to unit mass.
class InitialSampler {
 public:
  explicit InitialSampler(const ScalarField& p0, double lo = -20.0, double hi = 20.0, int cells = 1 << 16);

  double operator()(std::mt19937_64& rng) const;
  /// x with CDF(x) = u, for u in [0, 1].
  double quantile(double u) const;
  /// Mass of the density before normalization.
  double raw_mass() const { return raw_mass_; }

 private:
  double lo_;
  double width_;
  std::vector<double> cdf_;  // cdf_[i] = mass left of lo + i * width
  double raw_mass_ = 0.0;
};

/// `count` inverse-CDF draws from p0 (d = 1). Throws ValidationError when p0
/// is negative somewhere or has no mass.
std::vector<double> sample_initial(const ScalarField& p0, int count, std::uint64_t seed);

/// Draws X(0) for models with d > 1.
using InitialDraw = std::function<Vector(std::mt19937_64&)>;

/// Euler-Maruyama path from given Brownian increments: row j of dW (d1
/// columns) and dV (r columns) drive step j. Y(0) = 0 and Y reuses the V
/// increments, which is what correlates signal and observation noise.
struct FullPath {
  Matrix X;  // (steps + 1) x d
  Matrix Y;  // (steps + 1) x r
};

FullPath simulate_with_increments(const FilterModel& model, const Vector& x0, double dt, const Matrix& dW,
                                  const Matrix& dV);

/// Truth and observation records at resolution dt_obs.
struct SimulatedPath {
  SampleRecord truth;
  SampleRecord observations;
};

/// Simulates paths under the physical measure. Path i uses its own
/// generator keyed by (seed, i), so paths can be produced in any order or
/// concurrently and still reproduce bit for bit.
class Simulator {
 public:
  Simulator(FilterModel model, SimulationConfig config, InitialDraw initial = {});

  SimulatedPath path(std::uint64_t index) const;
  const SimulationConfig& config() const { return config_; }

  static std::mt19937_64 path_generator(std::uint64_t seed, std::uint64_t index);

 private:
  FilterModel model_;
  SimulationConfig config_;
  InitialDraw initial_;
  std::optional<InitialSampler> sampler_;
  long steps_ = 0;
  long stride_ = 1;
};

}  // namespace zakai
