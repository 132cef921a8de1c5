#pragma once

#include <functional>
#include <vector>

#include "zakai/types.hpp"

namespace zakai {

/// Ordered Hermite-function basis of L2(R^d).
///
/// e_k(x) = prod_j h_{gamma_j}(x_j) with the normalized Hermite functions
/// h_n(t) = (2^n n! sqrt(pi))^{-1/2} H_n(t) exp(-t^2/2). The tuples gamma are
/// graded by |gamma| and, within one grade, ordered lexicographically
/// (smaller first coordinate first). Each e_k is an eigenfunction of
/// Lambda = -Laplacian + (1 + |x|^2) with eigenvalue 2|gamma| + d + 1.
class SpatialBasis {
 public:
  SpatialBasis(int d, int K);

  int dim() const { return d_; }
  int size() const { return static_cast<int>(gammas_.size()); }
  const std::vector<std::vector<int>>& gammas() const { return gammas_; }
  const std::vector<double>& lambdas() const { return lambdas_; }
  /// Highest per-axis degree present.
  int max_axis_degree() const;

 private:
  int d_;
  std::vector<std::vector<int>> gammas_;
  std::vector<double> lambdas_;
};

SpatialBasis build_basis(int d, int K);

/// Values and derivatives of h_0..h_{max_degree} at one coordinate.
struct HermiteFunctionTable {
  std::vector<double> value;
  std::vector<double> first;
  std::vector<double> second;
};

/// Normalized Hermite functions via the stable three-term recurrence; the
/// derivatives come from the ladder identities
/// h_n' = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1} and h_n'' = (t^2 - 2n - 1) h_n.
HermiteFunctionTable hermite_functions(int max_degree, double t);

/// Value, gradient and Hessian of a scalar function at one point.
struct Jet {
  double value = 0.0;
  Vector grad;
  Matrix hess;
};

/// 1-based k. Throws ValidationError for k outside 1..K or a wrong point size.
double eval_basis(const SpatialBasis& basis, int k, Point x);

/// Jets of all K basis functions at x, with exact ladder-formula derivatives.
std::vector<Jet> basis_jets(const SpatialBasis& basis, Point x);

/// Tensor-product Gauss-Hermite rule. Weights already absorb exp(|x|^2), so
/// sum_i weights[i] f(nodes.col(i)) approximates the plain Lebesgue integral
/// of f over R^d.
struct QuadratureGrid {
  int dim = 1;
  Matrix nodes;    // d x count
  Vector weights;  // count, strictly positive

  int count() const { return static_cast<int>(weights.size()); }
  Point node(int i) const { return {nodes.col(i).data(), static_cast<std::size_t>(dim)}; }
};

/// One-dimensional Gauss-Hermite nodes with the classical weights w_i
/// (exact for int P(x) exp(-x^2) dx up to degree 2m - 1) and the rescaled
/// weights w_i exp(x_i^2), both computed without cancellation.
struct GaussHermiteRule {
  Vector nodes;
  Vector weights;
  Vector scaled_weights;
};

GaussHermiteRule gauss_hermite_rule(int m);
QuadratureGrid gauss_hermite_grid(int d, int m);

/// Default nodes per axis: 2 * (max per-axis degree) + 8.
int default_quadrature_nodes(const SpatialBasis& basis);

using ScalarField = std::function<double(Point)>;

/// f_k = int f e_k dx by quadrature. The integrand must decay fast enough for
/// the rule; heavy tails or kinks leave the quadrature error uncontrolled.
/// Throws NumericalError when f is not finite at a node.
Vector project(const ScalarField& f, const SpatialBasis& basis, const QuadratureGrid& grid);

/// sqrt(sum_k lambda_k^(2 nu) c_k^2).
double lambda_power_norm(const Vector& coeffs, const SpatialBasis& basis, double nu);

/// Gram matrix sum_i w_i e_a(x_i) e_b(x_i).
Matrix gram_matrix(const SpatialBasis& basis, const QuadratureGrid& grid);

/// Quadrature values of int |e_k| dx, a probe of the L1 growth of the basis.
Vector basis_l1_norms(const SpatialBasis& basis, const QuadratureGrid& grid);

}  // namespace zakai
