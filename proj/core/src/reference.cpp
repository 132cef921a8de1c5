#include "zakai/reference.hpp"

#include <cmath>
#include <string>

namespace zakai {

double kalman_gain(const LinearModel& model, double variance) { return variance * model.h + model.rho; }

double riccati_rate(const LinearModel& model, double variance) {
  const double gain = kalman_gain(model, variance);
  return 2.0 * model.a * variance + model.sigma * model.sigma + model.rho * model.rho - gain * gain;
}

double steady_state_variance(const LinearModel& model) {
  // -h^2 P^2 + (2a - 2 rho h) P + sigma^2 = 0
  const double qa = -model.h * model.h;
  const double qb = 2.0 * model.a - 2.0 * model.rho * model.h;
  const double qc = model.sigma * model.sigma;
  if (qa == 0.0) {
    if (qb == 0.0) throw ValidationError("steady_state_variance: no stationary variance");
    return -qc / qb;
  }
  const double disc = std::sqrt(qb * qb - 4.0 * qa * qc);
  const double r1 = (-qb + disc) / (2.0 * qa), r2 = (-qb - disc) / (2.0 * qa);
  return std::max(r1, r2);
}

std::vector<KalmanPoint> kalman_bucy(const LinearModel& model, const SampleRecord& y_path, int substeps) {
  if (substeps < 1) throw ValidationError("kalman_bucy: substeps must be >= 1");
  if (y_path.dim() != 1 && y_path.samples() > 0) throw ValidationError("kalman_bucy: scalar observations only");
  if (model.P0 < 0.0) throw ValidationError("kalman_bucy: P0 must be >= 0");
  check_uniform(y_path);
  std::vector<KalmanPoint> out;
  out.reserve(y_path.samples());
  if (y_path.samples() == 0) return out;
  double m = model.m0, P = model.P0;
  out.push_back({y_path.times[0], m, P});
  const double dt = y_path.spacing / substeps;
  for (int j = 1; j < y_path.samples(); ++j) {
    const double dy = (y_path.values(j, 0) - y_path.values(j - 1, 0)) / substeps;
    for (int s = 0; s < substeps; ++s) {
      const double gain = kalman_gain(model, P);
      const double dm = model.a * m * dt + gain * (dy - model.h * m * dt);
      P += riccati_rate(model, P) * dt;
      m += dm;
      if (P < 0.0)
        throw NumericalError("kalman_bucy: negative variance at t = " + std::to_string(y_path.times[j]) +
                             "; the step is too coarse");
    }
    out.push_back({y_path.times[j], m, P});
  }
  return out;
}

ErrorSummary compare_on_path(const std::vector<double>& times, const std::vector<double>& estimates,
                             const std::vector<double>& oracle_times, const std::vector<double>& oracle) {
  if (times.size() != estimates.size() || oracle_times.size() != oracle.size())
    throw ValidationError("compare_on_path: series and time grid lengths differ");
  if (times.size() != oracle_times.size())
    throw ValidationError("compare_on_path: grid mismatch (" + std::to_string(times.size()) + " vs " +
                          std::to_string(oracle_times.size()) + " points)");
  ErrorSummary summary;
  summary.times = times;
  summary.differences.resize(times.size());
  double sq = 0.0;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - oracle_times[i]) > 1e-9 * std::max(1.0, std::abs(times[i])))
      throw ValidationError("compare_on_path: grid mismatch at point " + std::to_string(i));
    const double diff = estimates[i] - oracle[i];
    summary.differences[i] = diff;
    sq += diff * diff;
    summary.max_abs = std::max(summary.max_abs, std::abs(diff));
  }
  summary.rmse = times.empty() ? 0.0 : std::sqrt(sq / times.size());
  return summary;
}

EstimateSeries galerkin_oracle_estimates(const GalerkinSystem& system, const SampleRecord& y_path,
                                         const Vector& p_init, const Vector& f_coeffs, const Vector& one_coeffs,
                                         int stride, double floor) {
  EstimateSeries series;
  if (y_path.samples() == 0) return series;
  const auto path = integrate_galerkin_sde(system, to_sampled_path(y_path), p_init, stride);
  for (std::size_t i = 0; i < path.size(); ++i) {
    const FilterState state{y_path.times[i * stride], path[i]};
    series.times.push_back(state.t);
    series.masses.push_back(functional(state, one_coeffs));
    series.estimates.push_back(estimate(state, f_coeffs, one_coeffs, floor));
  }
  return series;
}

EstimateSeries chaos_filter_estimates(const PropagatorTable& table, const SampleRecord& y_path,
                                      const Vector& p_init, const Vector& f_coeffs, const Vector& one_coeffs,
                                      double floor) {
  EstimateSeries series;
  if (y_path.samples() == 0) return series;
  ChaosFilter filter(table, p_init, y_path.times.front());
  auto record = [&](const FilterState& s) {
    series.times.push_back(s.t);
    series.masses.push_back(functional(s, one_coeffs));
    series.estimates.push_back(estimate(s, f_coeffs, one_coeffs, floor));
  };
  record(filter.state());
  for (const auto& window : cut_windows(y_path, table.delta)) record(filter.step(window));
  return series;
}

}  // namespace zakai
