#include "zakai/temporal_basis.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace zakai {

TemporalBasis::TemporalBasis(double delta, int n) : delta_(delta), n_(n) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw ValidationError("cosine_basis: delta must be > 0");
  if (n < 1) throw ValidationError("cosine_basis: n must be >= 1");
}

double TemporalBasis::value(int k, double s) const {
  if (k < 1) throw ValidationError("temporal basis index must be >= 1");
  if (k == 1) return 1.0 / std::sqrt(delta_);
  return std::sqrt(2.0 / delta_) * std::cos(std::numbers::pi * (k - 1) * s / delta_);
}

double TemporalBasis::derivative(int k, double s) const {
  if (k < 1) throw ValidationError("temporal basis index must be >= 1");
  if (k == 1) return 0.0;
  const double freq = std::numbers::pi * (k - 1) / delta_;
  return -std::sqrt(2.0 / delta_) * freq * std::sin(freq * s);
}

TemporalBasis cosine_basis(double delta, int n) { return TemporalBasis(delta, n); }

LegendreRule gauss_legendre_rule(int m, double a, double b) {
  if (m < 1) throw ValidationError("gauss_legendre_rule: m must be >= 1");
  LegendreRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::abs(step) < 1e-16) break;
    }
    // recompute the derivative at the converged root for the weight
    double p0 = 1.0, p1 = x;
    for (int j = 2; j <= m; ++j) {
      const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
      p0 = p1;
      p1 = p2;
    }
    dp = m * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = mid - half * x;
    rule.nodes(m - 1 - i) = mid + half * x;
    rule.weights(i) = rule.weights(m - 1 - i) = half * w;
  }
  return rule;
}

LegendreRule composite_gauss_legendre(int panels, int m, double a, double b) {
  if (panels < 1) throw ValidationError("composite_gauss_legendre: panels must be >= 1");
  LegendreRule out;
  out.nodes.resize(static_cast<Eigen::Index>(panels) * m);
  out.weights.resize(out.nodes.size());
  const double width = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const auto rule = gauss_legendre_rule(m, a + p * width, a + (p + 1) * width);
    out.nodes.segment(static_cast<Eigen::Index>(p) * m, m) = rule.nodes;
    out.weights.segment(static_cast<Eigen::Index>(p) * m, m) = rule.weights;
  }
  return out;
}

}  // namespace zakai
