#pragma once

#include <vector>

#include "zakai/filter_runtime.hpp"
#include "zakai/galerkin.hpp"
#include "zakai/observations.hpp"

namespace zakai {

/// Scalar linear model dX = a X dt + sigma dW + rho dV, dY = h X dt + dV,
/// X(0) ~ N(m0, P0).
struct LinearModel {
  double a = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  double h = 0.0;
  double m0 = 0.0;
  double P0 = 1.0;
};

struct KalmanPoint {
  double t = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Filter gain P h + rho; with rho = 0 this is the classical P h.
double kalman_gain(const LinearModel& model, double variance);

/// Right-hand side of the Riccati equation 2 a P + sigma^2 + rho^2 - (P h + rho)^2.
double riccati_rate(const LinearModel& model, double variance);

/// Nonnegative root of riccati_rate(P) = 0.
double steady_state_variance(const LinearModel& model);

/// Euler discretization of the correlated-noise Kalman-Bucy filter
///   dm = a m dt + (P h + rho)(dY - h m dt),
///   dP = (2 a P + sigma^2 + rho^2 - (P h + rho)^2) dt,
/// with `substeps` Euler steps per observation interval and the observation
/// increment spread evenly across them. One point per sample of y_path.
/// Throws NumericalError when P turns negative.
std::vector<KalmanPoint> kalman_bucy(const LinearModel& model, const SampleRecord& y_path, int substeps = 4);

struct ErrorSummary {
  double rmse = 0.0;
  double max_abs = 0.0;
  std::vector<double> times;
  std::vector<double> differences;  // estimate - oracle
};

/// Elementwise comparison on a shared time grid (times equal within 1e-9).
ErrorSummary compare_on_path(const std::vector<double>& times, const std::vector<double>& estimates,
                             const std::vector<double>& oracle_times, const std::vector<double>& oracle);

/// Filter estimates of f from the Euler-Maruyama Galerkin oracle on the
/// samples of y_path, reported every `stride` samples.
struct EstimateSeries {
  std::vector<double> times;
  std::vector<double> estimates;
  std::vector<double> masses;
};

EstimateSeries galerkin_oracle_estimates(const GalerkinSystem& system, const SampleRecord& y_path,
                                         const Vector& p_init, const Vector& f_coeffs, const Vector& one_coeffs,
                                         int stride, double floor);

/// Chaos filter estimates over every window of y_path, starting with t0.
EstimateSeries chaos_filter_estimates(const PropagatorTable& table, const SampleRecord& y_path,
                                      const Vector& p_init, const Vector& f_coeffs, const Vector& one_coeffs,
                                      double floor);

}  // namespace zakai
