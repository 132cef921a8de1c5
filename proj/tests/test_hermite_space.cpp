#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "zakai/hermite_space.hpp"

using namespace zakai;

namespace {

const double kPi = std::numbers::pi;

// Physicists' Hermite polynomial from the explicit sum
// H_n(t) = n! sum_m (-1)^m (2t)^{n-2m} / (m! (n-2m)!).
double physicists_hermite(int n, double t) {
  double total = 0.0;
  for (int m = 0; 2 * m <= n; ++m)
    total += std::pow(-1.0, m) * std::pow(2.0 * t, n - 2 * m) / (std::tgamma(m + 1.0) * std::tgamma(n - 2.0 * m + 1.0));
  return std::tgamma(n + 1.0) * total;
}

double hermite_function_oracle(int n, double t) {
  return physicists_hermite(n, t) * std::exp(-0.5 * t * t) /
         std::sqrt(std::pow(2.0, n) * std::tgamma(n + 1.0) * std::sqrt(kPi));
}

double at(const SpatialBasis& basis, int k, std::vector<double> x) { return eval_basis(basis, k, x); }

}  // namespace

TEST(BuildBasis, OneDimensional) {
  const auto b = build_basis(1, 3);
  const std::vector<std::vector<int>> gammas = {{0}, {1}, {2}};
  EXPECT_EQ(b.gammas(), gammas);
  EXPECT_EQ(b.lambdas(), (std::vector<double>{2, 4, 6}));
}

TEST(BuildBasis, TwoDimensionalGradedLex) {
  const auto b = build_basis(2, 4);
  // graded by |gamma|, ties: smaller first coordinate first
  const std::vector<std::vector<int>> gammas = {{0, 0}, {0, 1}, {1, 0}, {0, 2}};
  EXPECT_EQ(b.gammas(), gammas);
  EXPECT_EQ(b.lambdas(), (std::vector<double>{3, 5, 5, 7}));
  EXPECT_EQ(build_basis(2, 1).gammas(), (std::vector<std::vector<int>>{{0, 0}}));
  EXPECT_EQ(build_basis(2, 1).lambdas(), (std::vector<double>{3}));
}

TEST(BuildBasis, OrderingAndEigenvalueInvariants) {
  for (int d = 1; d <= 3; ++d) {
    const auto b = build_basis(d, 60);
    for (int k = 0; k < b.size(); ++k) {
      int degree = 0;
      for (int g : b.gammas()[k]) degree += g;
      EXPECT_EQ(b.lambdas()[k], 2.0 * degree + d + 1);
      if (k == 0) continue;
      int prev = 0;
      for (int g : b.gammas()[k - 1]) prev += g;
      EXPECT_TRUE(prev < degree || (prev == degree && b.gammas()[k - 1] < b.gammas()[k]));
      EXPECT_LE(b.lambdas()[k - 1], b.lambdas()[k]);
    }
  }
  EXPECT_THROW(build_basis(0, 3), ValidationError);
  EXPECT_THROW(build_basis(1, 0), ValidationError);
}

TEST(BuildBasis, EigenvalueGrowthIsOrderKToOneOverD) {
  for (int d = 1; d <= 3; ++d) {
    const auto b = build_basis(d, 200);
    for (int k = 1; k <= b.size(); ++k) {
      const double ratio = b.lambdas()[k - 1] / std::pow(k, 1.0 / d);
      EXPECT_GE(ratio, 0.5);
      EXPECT_LE(ratio, 8.0);
    }
  }
}

TEST(EvalBasis, Examples) {
  const auto b1 = build_basis(1, 2);
  EXPECT_NEAR(at(b1, 1, {0.0}), std::pow(kPi, -0.25), 1e-15);
  EXPECT_NEAR(at(b1, 2, {0.0}), 0.0, 1e-15);
  const auto b2 = build_basis(2, 3);
  EXPECT_NEAR(at(b2, 1, {0.0, 0.0}), 1.0 / std::sqrt(kPi), 1e-15);
  EXPECT_THROW(at(b1, 3, {0.0}), ValidationError);
  EXPECT_THROW(at(b1, 0, {0.0}), ValidationError);
  EXPECT_THROW(at(b1, 1, {0.0, 1.0}), ValidationError);
}

TEST(EvalBasis, MatchesExplicitHermiteFunctions) {
  const auto b = build_basis(1, 13);
  for (int k = 1; k <= 13; ++k)
    for (double t = -5.0; t <= 5.0; t += 0.37)
      EXPECT_NEAR(at(b, k, {t}), hermite_function_oracle(k - 1, t), 1e-11) << k << ' ' << t;
  const auto b2 = build_basis(2, 10);
  for (int k = 1; k <= 10; ++k) {
    const auto& g = b2.gammas()[k - 1];
    EXPECT_NEAR(at(b2, k, {0.3, -1.1}), hermite_function_oracle(g[0], 0.3) * hermite_function_oracle(g[1], -1.1), 1e-13);
  }
}

TEST(HermiteFunctions, DerivativesMatchFiniteDifferences) {
  const double eps = 1e-5;
  for (double t : {-2.3, -0.4, 0.0, 0.9, 3.1}) {
    const auto f = hermite_functions(10, t);
    const auto up = hermite_functions(10, t + eps);
    const auto dn = hermite_functions(10, t - eps);
    for (int n = 0; n <= 10; ++n) {
      EXPECT_NEAR(f.first[n], (up.value[n] - dn.value[n]) / (2 * eps), 1e-8);
      EXPECT_NEAR(f.second[n], (up.first[n] - dn.first[n]) / (2 * eps), 1e-7);
    }
  }
}

TEST(GaussHermite, OnePointRule) {
  const auto rule = gauss_hermite_rule(1);
  ASSERT_EQ(rule.nodes.size(), 1);
  EXPECT_NEAR(rule.nodes(0), 0.0, 1e-15);
  EXPECT_NEAR(rule.weights(0), std::sqrt(kPi), 1e-14);
  EXPECT_NEAR(rule.scaled_weights(0), std::sqrt(kPi), 1e-14);
}

TEST(GaussHermite, GaussianMomentsExact) {
  const auto two = gauss_hermite_rule(2);
  double second = 0.0;
  for (int i = 0; i < 2; ++i) second += two.weights(i) * two.nodes(i) * two.nodes(i);
  EXPECT_NEAR(second, std::sqrt(kPi) / 2.0, 1e-12);
  // degree 2m - 1 exactness for m = 6: int x^10 e^{-x^2} = Gamma(11/2)
  const auto six = gauss_hermite_rule(6);
  double tenth = 0.0;
  for (int i = 0; i < 6; ++i) tenth += six.weights(i) * std::pow(six.nodes(i), 10);
  EXPECT_NEAR(tenth, std::tgamma(5.5), 1e-10);
}

TEST(GaussHermite, GroundStateNormalized) {
  const auto grid = gauss_hermite_grid(1, 8);
  const auto b = build_basis(1, 1);
  double total = 0.0;
  for (int i = 0; i < grid.count(); ++i) {
    const double v = eval_basis(b, 1, grid.node(i));
    total += grid.weights(i) * v * v;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(GaussHermite, TensorGridStructure) {
  const auto grid = gauss_hermite_grid(3, 5);
  EXPECT_EQ(grid.count(), 125);
  EXPECT_EQ(grid.nodes.rows(), 3);
  EXPECT_GT(grid.weights.minCoeff(), 0.0);
  // int exp(-|x|^2) dx = pi^{3/2}
  double total = 0.0;
  for (int i = 0; i < grid.count(); ++i) total += grid.weights(i) * std::exp(-grid.nodes.col(i).squaredNorm());
  EXPECT_NEAR(total, std::pow(kPi, 1.5), 1e-10);
}

TEST(GaussHermite, LargeRuleWeightsStayPositive) {
  const auto rule = gauss_hermite_rule(120);
  EXPECT_GT(rule.weights.minCoeff(), 0.0);
  EXPECT_TRUE(rule.scaled_weights.allFinite());
  EXPECT_NEAR(rule.weights.sum(), std::sqrt(kPi), 1e-12);
}

TEST(Gram, IdentityForSixteenFunctions) {
  const auto b = build_basis(1, 16);
  const auto G = gram_matrix(b, gauss_hermite_grid(1, 64));
  EXPECT_LE((G - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-8);
  const auto b2 = build_basis(2, 15);
  const auto G2 = gram_matrix(b2, gauss_hermite_grid(2, 20));
  EXPECT_LE((G2 - Matrix::Identity(15, 15)).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Gram, EigenRelationViaLadderIdentities) {
  // Lambda h_n = -h_n'' + (1 + t^2) h_n, with h_n'' from applying the
  // first-derivative ladder twice.
  const int K = 16;
  const auto b = build_basis(1, K);
  const auto grid = gauss_hermite_grid(1, 64);
  Matrix M = Matrix::Zero(K, K);
  for (int i = 0; i < grid.count(); ++i) {
    const double t = grid.nodes(0, i);
    const auto f = hermite_functions(K + 2, t);
    auto d1 = [&](int n) {
      const double down = n > 0 ? std::sqrt(n / 2.0) * f.value[n - 1] : 0.0;
      return down - std::sqrt((n + 1) / 2.0) * f.value[n + 1];
    };
    auto d2 = [&](int n) {
      const double down = n > 0 ? std::sqrt(n / 2.0) * d1(n - 1) : 0.0;
      return down - std::sqrt((n + 1) / 2.0) * d1(n + 1);
    };
    for (int k = 0; k < K; ++k) {
      const double lam = -d2(k) + (1.0 + t * t) * f.value[k];
      for (int j = 0; j < K; ++j) M(k, j) += grid.weights(i) * lam * f.value[j];
    }
  }
  for (int k = 0; k < K; ++k)
    for (int j = 0; j < K; ++j) EXPECT_NEAR(M(k, j), k == j ? b.lambdas()[k] : 0.0, 1e-6) << k << ' ' << j;
}

TEST(Project, UnitVectorZeroAndGaussian) {
  const auto b = build_basis(1, 8);
  const auto grid = gauss_hermite_grid(1, default_quadrature_nodes(b));
  const auto e2 = project([&](Point x) { return eval_basis(b, 2, x); }, b, grid);
  Vector unit = Vector::Zero(8);
  unit(1) = 1.0;
  EXPECT_LE((e2 - unit).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_EQ(project([](Point) { return 0.0; }, b, grid), Vector::Zero(8));

  // int N(0,1)(x) h_0(x) dx = (2 pi)^{-1/2} pi^{-1/4} sqrt(pi) = 2^{-1/2} pi^{-1/4}
  const auto b1 = build_basis(1, 1);
  const auto g1 = gauss_hermite_grid(1, 40);
  const auto c = project([](Point x) { return std::exp(-0.5 * x[0] * x[0]) / std::sqrt(2 * kPi); }, b1, g1);
  EXPECT_NEAR(c(0), std::pow(2.0, -0.5) * std::pow(kPi, -0.25), 1e-12);
}

TEST(Project, NonFiniteValueThrows) {
  const auto b = build_basis(1, 2);
  const auto grid = gauss_hermite_grid(1, 4);
  EXPECT_THROW(project([](Point) { return std::nan(""); }, b, grid), NumericalError);
}

TEST(LambdaPowerNorm, Examples) {
  const auto b = build_basis(1, 3);
  Vector c(3);
  c << 0.3, -1.2, 2.0;
  EXPECT_NEAR(lambda_power_norm(c, b, 0.0), c.norm(), 1e-15);
  for (int k = 0; k < 3; ++k) {
    Vector u = Vector::Zero(3);
    u(k) = 1.0;
    EXPECT_NEAR(lambda_power_norm(u, b, 1.5), std::pow(b.lambdas()[k], 1.5), 1e-12);
  }
  Vector two(2);
  two << 1.0, 1.0;
  EXPECT_NEAR(lambda_power_norm(two, b, 1.0), std::sqrt(20.0), 1e-14);
}

TEST(BasisL1Norms, FiniteAndGrowing) {
  const auto b = build_basis(1, 16);
  const auto norms = basis_l1_norms(b, gauss_hermite_grid(1, 200));
  EXPECT_TRUE(norms.allFinite());
  EXPECT_GT(norms.minCoeff(), 0.0);
  // int |h_0| = sqrt(2) pi^{1/4}
  EXPECT_NEAR(norms(0), std::sqrt(2.0) * std::pow(kPi, 0.25), 1e-8);
  EXPECT_GT(norms(15), norms(0));
}
