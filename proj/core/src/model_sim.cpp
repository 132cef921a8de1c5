#include "zakai/model_sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace zakai {

namespace {

long integral_ratio(double num, double den, const char* what) {
  const double ratio = num / den;
  const long rounded = std::lround(ratio);
  if (rounded < 1 || std::abs(ratio - rounded) > 1e-9 * ratio)
    throw ValidationError(std::string(what) + " must be an integer multiple");
  return rounded;
}

}  // namespace

void validate(const SimulationConfig& config) {
  if (!(config.dt_sim > 0.0)) throw ValidationError("simulation: delta_sim must be > 0");
  if (!(config.dt_sim <= config.dt_obs * (1 + 1e-12)))
    throw ValidationError("simulation: delta_sim must not exceed delta_obs");
  if (!(config.dt_obs <= config.T * (1 + 1e-12))) throw ValidationError("simulation: delta_obs must not exceed T");
  integral_ratio(config.dt_obs, config.dt_sim, "simulation: delta_obs / delta_sim");
  integral_ratio(config.T, config.dt_obs, "simulation: T / delta_obs");
}

InitialSampler::InitialSampler(const ScalarField& p0, double lo, double hi, int cells)
    : lo_(lo), width_((hi - lo) / cells) {
  if (!(hi > lo) || cells < 1) throw ValidationError("InitialSampler: empty support interval");
  cdf_.resize(cells + 1);
  cdf_[0] = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double mid = lo + (i + 0.5) * width_;
    const double x[1] = {mid};
    const double p = p0(Point(x, 1));
    if (!std::isfinite(p) || p < 0.0)
      throw ValidationError("p0 is not a density: negative or non-finite value at x = " + std::to_string(mid));
    cdf_[i + 1] = cdf_[i] + p * width_;
  }
  raw_mass_ = cdf_.back();
  if (!(raw_mass_ > 0.0)) throw ValidationError("p0 is not a density: zero mass on the sampling interval");
  for (auto& c : cdf_) c /= raw_mass_;
}

double InitialSampler::quantile(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  // first cell whose right edge reaches u and that carries mass
  const auto it = std::lower_bound(cdf_.begin() + 1, cdf_.end(), u);
  const auto cell = static_cast<long>(std::distance(cdf_.begin(), it)) - 1;
  const double left = cdf_[cell], right = cdf_[cell + 1];
  const double frac = right > left ? (u - left) / (right - left) : 0.5;
  return lo_ + (cell + std::clamp(frac, 0.0, 1.0)) * width_;
}

double InitialSampler::operator()(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  double u = uniform(rng);
  while (u <= 0.0) u = uniform(rng);
  return quantile(u);
}

std::vector<double> sample_initial(const ScalarField& p0, int count, std::uint64_t seed) {
  if (count < 0) throw ValidationError("sample_initial: count must be >= 0");
  if (count == 0) return {};
  const InitialSampler sampler(p0);
  auto rng = Simulator::path_generator(seed, 0);
  std::vector<double> out(count);
  for (auto& x : out) x = sampler(rng);
  return out;
}

FullPath simulate_with_increments(const FilterModel& model, const Vector& x0, double dt, const Matrix& dW,
                                  const Matrix& dV) {
  if (x0.size() != model.d) throw ValidationError("simulate: x0 has wrong dimension");
  if (dW.cols() != model.d1 || dV.cols() != model.r || dW.rows() != dV.rows())
    throw ValidationError("simulate: increment arrays have wrong shape");
  const long steps = dW.rows();
  FullPath path;
  path.X.resize(steps + 1, model.d);
  path.Y.resize(steps + 1, model.r);
  Vector x = x0;
  Vector y = Vector::Zero(model.r);
  path.X.row(0) = x.transpose();
  path.Y.row(0) = y.transpose();
  for (long j = 0; j < steps; ++j) {
    const Point p(x.data(), static_cast<std::size_t>(model.d));
    const Vector dv = dV.row(j).transpose();
    const Vector h = model.sensor(p);
    Vector next = x + model.drift(p) * dt + model.sigma(p) * dW.row(j).transpose() + model.rho(p) * dv;
    y += h * dt + dv;
    x = std::move(next);
    if (!x.allFinite() || !y.allFinite())
      throw NumericalError("simulate: non-finite state at step " + std::to_string(j + 1));
    path.X.row(j + 1) = x.transpose();
    path.Y.row(j + 1) = y.transpose();
  }
  return path;
}

Simulator::Simulator(FilterModel model, SimulationConfig config, InitialDraw initial)
    : model_(std::move(model)), config_(config), initial_(std::move(initial)) {
  validate(config_);
  if (!initial_) {
    if (model_.d != 1) throw ValidationError("simulate: models with d > 1 need a caller-supplied X(0) sampler");
    sampler_.emplace(model_.p0);
  }
  stride_ = integral_ratio(config_.dt_obs, config_.dt_sim, "delta_obs / delta_sim");
  steps_ = integral_ratio(config_.T, config_.dt_obs, "T / delta_obs") * stride_;
}

std::mt19937_64 Simulator::path_generator(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

SimulatedPath Simulator::path(std::uint64_t index) const {
  auto rng = path_generator(config_.seed, index);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector x(model_.d);
  if (initial_)
    x = initial_(rng);
  else
    x(0) = (*sampler_)(rng);
  if (x.size() != model_.d) throw ValidationError("simulate: initial sampler returned wrong dimension");

  const long samples = steps_ / stride_ + 1;
  SimulatedPath out;
  out.truth.spacing = out.observations.spacing = config_.dt_obs;
  out.truth.times.resize(samples);
  out.truth.values.resize(samples, model_.d);
  out.observations.values.resize(samples, model_.r);
  const double sqdt = std::sqrt(config_.dt_sim);

  Vector y = Vector::Zero(model_.r);
  Vector dw(model_.d1), dv(model_.r);
  out.truth.times[0] = 0.0;
  out.truth.values.row(0) = x.transpose();
  out.observations.values.row(0) = y.transpose();
  for (long j = 0; j < steps_; ++j) {
    for (int c = 0; c < model_.d1; ++c) dw(c) = sqdt * normal(rng);
    for (int c = 0; c < model_.r; ++c) dv(c) = sqdt * normal(rng);
    const Point p(x.data(), static_cast<std::size_t>(model_.d));
    const Vector h = model_.sensor(p);
    Vector next = x + model_.drift(p) * config_.dt_sim + model_.sigma(p) * dw + model_.rho(p) * dv;
    y += h * config_.dt_sim + dv;
    x = std::move(next);
    if (!x.allFinite() || !y.allFinite())
      throw NumericalError("simulate: non-finite state at step " + std::to_string(j + 1) + " of path " +
                           std::to_string(index));
    if ((j + 1) % stride_ == 0) {
      const long s = (j + 1) / stride_;
      out.truth.times[s] = s * config_.dt_obs;
      out.truth.values.row(s) = x.transpose();
      out.observations.values.row(s) = y.transpose();
    }
  }
  out.observations.times = out.truth.times;
  return out;
}

}  // namespace zakai
