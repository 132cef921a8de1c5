#include "experiment/builtin_models.hpp"

#include <cmath>
#include <numbers>

namespace zakai::experiment {

double gaussian_density(double x, double mean, double variance) {
  const double z = x - mean;
  return std::exp(-0.5 * z * z / variance) / std::sqrt(2.0 * std::numbers::pi * variance);
}

FilterModel make_model(const ModelParams& p) {
  if (p.name != "ou-linear" && p.name != "correlated-ou" && p.name != "cubic-sensor")
    throw ValidationError("model.name: unknown model '" + p.name +
                          "' (expected ou-linear, correlated-ou or cubic-sensor)");
  if (!(p.P0 > 0.0)) throw ValidationError("model.P0: initial variance must be > 0");
  if (p.name == "cubic-sensor" && !(p.h_max > 0.0)) throw ValidationError("model.h_max: must be > 0");
  if (p.name == "cubic-sensor" && !(p.eps >= 0.0)) throw ValidationError("model.eps: must be >= 0");

  FilterModel m;
  m.d = m.d1 = m.r = 1;
  const double a = p.a, sigma = p.sigma, h = p.h;
  const double rho = p.name == "ou-linear" ? 0.0 : p.rho;
  m.drift = [a](Point x) { return Vector::Constant(1, a * x[0]); };
  m.sigma = [sigma](Point) { return Matrix::Constant(1, 1, sigma); };
  m.rho = [rho](Point) { return Matrix::Constant(1, 1, rho); };
  if (p.name == "cubic-sensor") {
    const double eps = p.eps, cap = p.h_max;
    m.sensor = [h, eps, cap](Point x) {
      const double t = x[0];
      const double raw = h * t * t * t / (1.0 + eps * t * t);
      return Vector::Constant(1, cap * std::tanh(raw / cap));
    };
  } else {
    m.sensor = [h](Point x) { return Vector::Constant(1, h * x[0]); };
  }
  const double m0 = p.m0, P0 = p.P0;
  m.p0 = [m0, P0](Point x) { return gaussian_density(x[0], m0, P0); };
  return m;
}

std::optional<LinearModel> linear_model(const ModelParams& p) {
  if (p.name == "cubic-sensor") return std::nullopt;
  LinearModel lm;
  lm.a = p.a;
  lm.sigma = p.sigma;
  lm.rho = p.name == "ou-linear" ? 0.0 : p.rho;
  lm.h = p.h;
  lm.m0 = p.m0;
  lm.P0 = p.P0;
  return lm;
}

}  // namespace zakai::experiment
