#include "zakai/hermite_space.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace zakai {

namespace {

// All d-tuples with the given sum, lexicographically ascending.
void tuples_with_sum(int d, int sum, std::vector<int>& prefix,
                     std::vector<std::vector<int>>& out, std::size_t limit) {
  if (out.size() >= limit) return;
  const int remaining_slots = d - static_cast<int>(prefix.size());
  if (remaining_slots == 1) {
    prefix.push_back(sum);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int v = 0; v <= sum && out.size() < limit; ++v) {
    prefix.push_back(v);
    tuples_with_sum(d, sum - v, prefix, out, limit);
    prefix.pop_back();
  }
}

}  // namespace

SpatialBasis::SpatialBasis(int d, int K) : d_(d) {
  if (d < 1) throw ValidationError("build_basis: d must be >= 1");
  if (K < 1) throw ValidationError("build_basis: K must be >= 1");
  const auto limit = static_cast<std::size_t>(K);
  std::vector<int> prefix;
  for (int grade = 0; gammas_.size() < limit; ++grade)
    tuples_with_sum(d, grade, prefix, gammas_, limit);
  lambdas_.reserve(gammas_.size());
  for (const auto& g : gammas_) {
    int total = 0;
    for (int v : g) total += v;
    lambdas_.push_back(2.0 * total + d + 1.0);
  }
}

int SpatialBasis::max_axis_degree() const {
  int top = 0;
  for (const auto& g : gammas_)
    for (int v : g) top = std::max(top, v);
  return top;
}

SpatialBasis build_basis(int d, int K) { return SpatialBasis(d, K); }

HermiteFunctionTable hermite_functions(int max_degree, double t) {
  // one extra degree is needed by the first-derivative ladder
  const int top = max_degree + 1;
  std::vector<double> h(top + 1);
  h[0] = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * t * t);
  if (top >= 1) h[1] = std::sqrt(2.0) * t * h[0];
  for (int n = 1; n < top; ++n)
    h[n + 1] = std::sqrt(2.0 / (n + 1)) * t * h[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * h[n - 1];

  HermiteFunctionTable table;
  table.value.assign(h.begin(), h.begin() + max_degree + 1);
  table.first.resize(max_degree + 1);
  table.second.resize(max_degree + 1);
  for (int n = 0; n <= max_degree; ++n) {
    const double down = n > 0 ? std::sqrt(n / 2.0) * h[n - 1] : 0.0;
    table.first[n] = down - std::sqrt((n + 1) / 2.0) * h[n + 1];
    table.second[n] = (t * t - 2.0 * n - 1.0) * h[n];
  }
  return table;
}

double eval_basis(const SpatialBasis& basis, int k, Point x) {
  if (k < 1 || k > basis.size())
    throw ValidationError("eval_basis: index " + std::to_string(k) + " outside 1.." +
                          std::to_string(basis.size()));
  if (static_cast<int>(x.size()) != basis.dim())
    throw ValidationError("eval_basis: point dimension mismatch");
  const auto& gamma = basis.gammas()[k - 1];
  double value = 1.0;
  for (int j = 0; j < basis.dim(); ++j)
    value *= hermite_functions(gamma[j], x[j]).value[gamma[j]];
  return value;
}

std::vector<Jet> basis_jets(const SpatialBasis& basis, Point x) {
  const int d = basis.dim();
  if (static_cast<int>(x.size()) != d) throw ValidationError("basis_jets: point dimension mismatch");
  const int top = basis.max_axis_degree();
  std::vector<HermiteFunctionTable> axis;
  axis.reserve(d);
  for (int j = 0; j < d; ++j) axis.push_back(hermite_functions(top, x[j]));

  std::vector<Jet> jets(basis.size());
  for (int k = 0; k < basis.size(); ++k) {
    const auto& g = basis.gammas()[k];
    Jet& jet = jets[k];
    jet.grad = Vector::Zero(d);
    jet.hess = Matrix::Zero(d, d);
    jet.value = 1.0;
    for (int j = 0; j < d; ++j) jet.value *= axis[j].value[g[j]];
    for (int a = 0; a < d; ++a) {
      for (int b = a; b < d; ++b) {
        double prod = 1.0;
        for (int j = 0; j < d; ++j) {
          if (a == b && j == a)
            prod *= axis[j].second[g[j]];
          else if (j == a || j == b)
            prod *= axis[j].first[g[j]];
          else
            prod *= axis[j].value[g[j]];
        }
        jet.hess(a, b) = jet.hess(b, a) = prod;
      }
      double prod = 1.0;
      for (int j = 0; j < d; ++j) prod *= (j == a) ? axis[j].first[g[j]] : axis[j].value[g[j]];
      jet.grad(a) = prod;
    }
  }
  return jets;
}

GaussHermiteRule gauss_hermite_rule(int m) {
  if (m < 1) throw ValidationError("gauss_hermite_grid: m must be >= 1");
  // Golub-Welsch for the initial nodes, then Newton on the normalized
  // Hermite function h_m, whose derivative is sqrt(2m) h_{m-1} - t h_m.
  Vector nodes(m);
  if (m == 1) {
    nodes(0) = 0.0;
  } else {
    Matrix jacobi = Matrix::Zero(m, m);
    for (int i = 1; i < m; ++i) jacobi(i, i - 1) = jacobi(i - 1, i) = std::sqrt(i / 2.0);
    Eigen::SelfAdjointEigenSolver<Matrix> solver(jacobi, Eigen::EigenvaluesOnly);
    nodes = solver.eigenvalues();
  }
  GaussHermiteRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  rule.scaled_weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double t = nodes(i);
    for (int it = 0; it < 8 && m > 1; ++it) {
      const auto table = hermite_functions(m, t);
      const double hm = table.value[m];
      const double dh = std::sqrt(2.0 * m) * table.value[m - 1] - t * hm;
      const double step = hm / dh;
      t -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    // Christoffel: w_i exp(t^2) = 1 / sum_{k<m} h_k(t)^2
    const auto table = hermite_functions(m - 1, t);
    double sum = 0.0;
    for (int k = 0; k < m; ++k) sum += table.value[k] * table.value[k];
    rule.nodes(i) = t;
    rule.scaled_weights(i) = 1.0 / sum;
    rule.weights(i) = std::exp(-t * t) / sum;
  }
  // symmetric rule: enforce exact symmetry of nodes and weights
  for (int i = 0; i < m / 2; ++i) {
    const int j = m - 1 - i;
    const double t = 0.5 * (rule.nodes(j) - rule.nodes(i));
    rule.nodes(i) = -t;
    rule.nodes(j) = t;
    const double sw = 0.5 * (rule.scaled_weights(i) + rule.scaled_weights(j));
    rule.scaled_weights(i) = rule.scaled_weights(j) = sw;
    const double w = 0.5 * (rule.weights(i) + rule.weights(j));
    rule.weights(i) = rule.weights(j) = w;
  }
  if (m % 2 == 1) rule.nodes(m / 2) = 0.0;
  return rule;
}

QuadratureGrid gauss_hermite_grid(int d, int m) {
  if (d < 1) throw ValidationError("gauss_hermite_grid: d must be >= 1");
  const auto rule = gauss_hermite_rule(m);
  long total = 1;
  for (int j = 0; j < d; ++j) total *= m;
  QuadratureGrid grid;
  grid.dim = d;
  grid.nodes.resize(d, total);
  grid.weights.resize(total);
  std::vector<int> digit(d, 0);
  for (long i = 0; i < total; ++i) {
    double w = 1.0;
    for (int j = 0; j < d; ++j) {
      grid.nodes(j, i) = rule.nodes(digit[j]);
      w *= rule.scaled_weights(digit[j]);
    }
    grid.weights(i) = w;
    for (int j = d - 1; j >= 0; --j) {
      if (++digit[j] < m) break;
      digit[j] = 0;
    }
  }
  return grid;
}

int default_quadrature_nodes(const SpatialBasis& basis) { return 2 * basis.max_axis_degree() + 8; }

Vector project(const ScalarField& f, const SpatialBasis& basis, const QuadratureGrid& grid) {
  if (grid.dim != basis.dim()) throw ValidationError("project: grid/basis dimension mismatch");
  Vector coeffs = Vector::Zero(basis.size());
  for (int i = 0; i < grid.count(); ++i) {
    const auto x = grid.node(i);
    const double fx = f(x);
    if (!std::isfinite(fx))
      throw NumericalError("project: function is not finite at quadrature node " + std::to_string(i));
    if (fx == 0.0) continue;
    const auto jets = basis_jets(basis, x);
    for (int k = 0; k < basis.size(); ++k) coeffs(k) += grid.weights(i) * fx * jets[k].value;
  }
  return coeffs;
}

double lambda_power_norm(const Vector& coeffs, const SpatialBasis& basis, double nu) {
  if (coeffs.size() > basis.size()) throw ValidationError("lambda_power_norm: too many coefficients");
  double sum = 0.0;
  for (int k = 0; k < coeffs.size(); ++k) {
    const double scaled = std::pow(basis.lambdas()[k], nu) * coeffs(k);
    sum += scaled * scaled;
  }
  return std::sqrt(sum);
}

Matrix gram_matrix(const SpatialBasis& basis, const QuadratureGrid& grid) {
  const int K = basis.size();
  Matrix values(K, grid.count());
  for (int i = 0; i < grid.count(); ++i) {
    const auto jets = basis_jets(basis, grid.node(i));
    for (int k = 0; k < K; ++k) values(k, i) = jets[k].value;
  }
  return values * grid.weights.asDiagonal() * values.transpose();
}

Vector basis_l1_norms(const SpatialBasis& basis, const QuadratureGrid& grid) {
  Vector norms = Vector::Zero(basis.size());
  for (int i = 0; i < grid.count(); ++i) {
    const auto jets = basis_jets(basis, grid.node(i));
    for (int k = 0; k < basis.size(); ++k) norms(k) += grid.weights(i) * std::abs(jets[k].value);
  }
  return norms;
}

}  // namespace zakai
