#pragma once

#include <optional>
#include <string>

#include "zakai/galerkin.hpp"
#include "zakai/reference.hpp"

namespace zakai::experiment {

/// Coefficients shared by the built-in scalar models.
struct ModelParams {
  std::string name = "ou-linear";
  double a = -1.0;     // drift b(x) = a x
  double sigma = 1.0;  // signal noise
  double rho = 0.0;    // correlated noise, constant
  double h = 1.0;      // observation slope (linear models) or scale (cubic sensor)
  double m0 = 0.0;     // X(0) ~ N(m0, P0)
  double P0 = 1.0;
  double eps = 0.1;    // cubic sensor: x^3 / (1 + eps x^2)
  double h_max = 5.0;  // cubic sensor: smooth saturation level
};

/// `ou-linear`, `correlated-ou` or `cubic-sensor`, all with d = d1 = r = 1.
/// The cubic sensor is h(x) = h_max tanh(h x^3 / ((1 + eps x^2) h_max)),
/// bounded and smooth.
FilterModel make_model(const ModelParams& params);

/// The linear-Gaussian specialization when the model has one; empty for the
/// cubic sensor.
std::optional<LinearModel> linear_model(const ModelParams& params);

double gaussian_density(double x, double mean, double variance);

}  // namespace zakai::experiment
