#pragma once

#include "zakai/types.hpp"

namespace zakai {

/// Fourier cosine basis of L2([0, delta]):
/// m_1 = 1/sqrt(delta), m_k(s) = sqrt(2/delta) cos(pi (k-1) s / delta) for k > 1.
class TemporalBasis {
 public:
  TemporalBasis(double delta, int n);

  double delta() const { return delta_; }
  int size() const { return n_; }

  /// 1-based k; any k >= 1 is accepted, not just k <= n.
  double value(int k, double s) const;
  double derivative(int k, double s) const;

 private:
  double delta_;
  int n_;
};

TemporalBasis cosine_basis(double delta, int n);

/// Nodes and weights of the m-point Gauss-Legendre rule on [a, b].
struct LegendreRule {
  Vector nodes;
  Vector weights;
};

LegendreRule gauss_legendre_rule(int m, double a, double b);

/// Composite rule: `panels` equal panels, each with an m-point Gauss-Legendre rule.
LegendreRule composite_gauss_legendre(int panels, int m, double a, double b);

}  // namespace zakai
