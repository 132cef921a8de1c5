#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>
#include <random>

#include "zakai/galerkin.hpp"

using namespace zakai;

namespace {

FilterModel scalar_model(double a, double sigma, double rho, std::function<double(double)> h) {
  FilterModel m;
  m.drift = [a](Point x) { return Vector::Constant(1, a * x[0]); };
  m.sigma = [sigma](Point) { return Matrix::Constant(1, 1, sigma); };
  m.rho = [rho](Point) { return Matrix::Constant(1, 1, rho); };
  m.sensor = [h](Point x) { return Vector::Constant(1, h(x[0])); };
  m.p0 = [](Point x) { return std::exp(-0.5 * x[0] * x[0]) / std::sqrt(2.0 * std::numbers::pi); };
  return m;
}

Jet jet1(double value, double grad, double hess) {
  Jet j;
  j.value = value;
  j.grad = Vector::Constant(1, grad);
  j.hess = Matrix::Constant(1, 1, hess);
  return j;
}

// Hermite-function coordinates of d/dt and multiplication by t on the first
// `size` functions: h_n' = sqrt(n/2) h_{n-1} - sqrt((n+1)/2) h_{n+1},
// t h_n = sqrt(n/2) h_{n-1} + sqrt((n+1)/2) h_{n+1}.
Matrix ladder_derivative(int size) {
  Matrix D = Matrix::Zero(size, size);
  for (int n = 0; n < size; ++n) {
    if (n > 0) D(n - 1, n) = std::sqrt(n / 2.0);
    if (n + 1 < size) D(n + 1, n) = -std::sqrt((n + 1) / 2.0);
  }
  return D;
}

Matrix ladder_position(int size) {
  Matrix X = Matrix::Zero(size, size);
  for (int n = 0; n < size; ++n) {
    if (n > 0) X(n - 1, n) = std::sqrt(n / 2.0);
    if (n + 1 < size) X(n + 1, n) = std::sqrt((n + 1) / 2.0);
  }
  return X;
}

GalerkinSystem build(const FilterModel& model, int K, int m = 0) {
  auto basis = std::make_shared<const SpatialBasis>(1, K);
  const auto grid = gauss_hermite_grid(1, m > 0 ? m : default_quadrature_nodes(*basis));
  return assemble(model, basis, grid);
}

}  // namespace

TEST(ApplyGenerator, Examples) {
  const auto constant = scalar_model(-1.0, std::sqrt(2.0), 0.0, [](double x) { return x; });
  const std::vector<double> x = {0.7};
  EXPECT_EQ(apply_generator(constant, jet1(1.0, 0.0, 0.0), x), 0.0);
  // g = x^2 with b = -x, sigma = sqrt(2): 2 - 2x^2
  EXPECT_NEAR(apply_generator(constant, jet1(0.49, 1.4, 2.0), x), 2.0 - 2.0 * 0.49, 1e-14);
  const auto driftless = scalar_model(0.0, 1.0, 1.0, [](double) { return 0.0; });
  EXPECT_EQ(apply_generator(driftless, jet1(0.7, 1.0, 0.0), x), 0.0);
}

TEST(ApplyM, Examples) {
  const std::vector<double> x = {1.3};
  const auto mult = scalar_model(0.0, 1.0, 0.0, [](double t) { return t; });
  EXPECT_NEAR(apply_M(mult, 1, jet1(1.0, 0.0, 0.0), x), 1.3, 1e-15);
  const auto shift = scalar_model(0.0, 1.0, 0.4, [](double) { return 0.0; });
  EXPECT_NEAR(apply_M(shift, 1, jet1(1.3, 1.0, 0.0), x), 0.4, 1e-15);
  auto varying = scalar_model(0.0, 1.0, 0.0, [](double t) { return t; });
  varying.rho = [](Point p) { return Matrix::Constant(1, 1, p[0]); };
  EXPECT_NEAR(apply_M(varying, 1, jet1(1.3, 1.0, 0.0), x), 1.3 * 1.3 + 1.3, 1e-14);
  EXPECT_THROW(apply_M(mult, 2, jet1(1.0, 0.0, 0.0), x), ValidationError);
}

TEST(Assemble, ZeroModelGivesZeroMatrices) {
  const auto sys = build(scalar_model(0.0, 0.0, 0.0, [](double) { return 0.0; }), 6);
  EXPECT_EQ(sys.A, Matrix::Zero(6, 6));
  ASSERT_EQ(sys.channels(), 1);
  EXPECT_EQ(sys.B[0], Matrix::Zero(6, 6));
}

TEST(Assemble, GroundStateAndLadderEntries) {
  const auto sys = build(scalar_model(0.0, std::sqrt(2.0), 0.0, [](double x) { return x; }), 4);
  EXPECT_NEAR(sys.A(0, 0), -0.5, 1e-13);
  EXPECT_NEAR(sys.B[0](1, 0), 1.0 / std::sqrt(2.0), 1e-13);
  EXPECT_NEAR(sys.B[0](0, 1), 1.0 / std::sqrt(2.0), 1e-13);
}

TEST(Assemble, MatchesIntegrationByPartsForLinearModels) {
  // L* p = (sigma^2 + rho^2)/2 p'' - a (x p)',  M* p = h x p - rho p'.
  const int K = 12;
  const int big = K + 2;
  const Matrix D = ladder_derivative(big);
  const Matrix X = ladder_position(big);
  const Matrix I = Matrix::Identity(big, big);
  for (double rho : {0.0, 0.5, -1.2}) {
    const double a = -0.8, sigma = 1.3, h = 0.9;
    const auto sys = build(scalar_model(a, sigma, rho, [h](double x) { return h * x; }), K);
    const Matrix A = (0.5 * (sigma * sigma + rho * rho) * D * D - a * (I + X * D)).topLeftCorner(K, K);
    const Matrix B = (h * X - rho * D).topLeftCorner(K, K);
    EXPECT_LE((sys.A - A).cwiseAbs().maxCoeff(), 1e-8) << "rho " << rho;
    EXPECT_LE((sys.B[0] - B).cwiseAbs().maxCoeff(), 1e-8) << "rho " << rho;
  }
}

TEST(Assemble, UncorrelatedBIsMultiplicationOperator) {
  const int K = 10;
  const auto model = scalar_model(-1.0, 1.0, 0.0, [](double x) { return std::sin(x) + 0.3 * std::tanh(x); });
  const auto sys = build(model, K, 120);
  // brute-force midpoint rule on [-14, 14]
  const int cells = 40000;
  const double lo = -14.0, width = 28.0 / cells;
  Matrix B = Matrix::Zero(K, K);
  for (int c = 0; c < cells; ++c) {
    const double t = lo + (c + 0.5) * width;
    const auto f = hermite_functions(K, t);
    const double hv = std::sin(t) + 0.3 * std::tanh(t);
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) B(i, j) += width * hv * f.value[i] * f.value[j];
  }
  EXPECT_LE((sys.B[0] - B).cwiseAbs().maxCoeff(), 1e-7);
}

TEST(Assemble, Deterministic) {
  const auto model = scalar_model(-1.0, 1.0, 0.5, [](double x) { return x; });
  const auto s1 = build(model, 8);
  const auto s2 = build(model, 8);
  EXPECT_EQ(s1.A, s2.A);
  EXPECT_EQ(s1.B[0], s2.B[0]);
}

TEST(ValidateModel, RejectsBadDensities) {
  const auto grid = gauss_hermite_grid(1, 30);
  auto model = scalar_model(-1.0, 1.0, 0.0, [](double x) { return x; });
  EXPECT_NO_THROW(validate_model(model, grid));
  model.p0 = [](Point x) { return 2.0 * std::exp(-0.5 * x[0] * x[0]) / std::sqrt(2.0 * std::numbers::pi); };
  EXPECT_THROW(validate_model(model, grid), ValidationError);
  model.p0 = [](Point x) { return x[0] * std::exp(-x[0] * x[0]); };
  EXPECT_THROW(validate_model(model, grid), ValidationError);
  model.p0 = nullptr;
  EXPECT_THROW(validate_model(model, grid), ValidationError);
}

TEST(DissipativityGap, Examples) {
  GalerkinSystem zero{Matrix::Zero(3, 3), {Matrix::Zero(3, 3)}, nullptr};
  EXPECT_NEAR(dissipativity_gap(zero), 0.0, 1e-15);
  GalerkinSystem damped{-Matrix::Identity(2, 2), {Matrix::Zero(2, 2)}, nullptr};
  EXPECT_NEAR(dissipativity_gap(damped), -2.0, 1e-14);
}

TEST(DissipativityGap, BoundedInKForBoundedSensor) {
  // b = -x, sigma = sqrt(2), h = tanh: 2 (L* g, g) = -2 |g'|^2 + |g|^2 and
  // |h g|^2 <= |g|^2, so every Galerkin compression has gap <= 2.
  const auto model = scalar_model(-1.0, std::sqrt(2.0), 0.0, [](double x) { return std::tanh(x); });
  const double g4 = dissipativity_gap(build(model, 4));
  const double g8 = dissipativity_gap(build(model, 8));
  const double g16 = dissipativity_gap(build(model, 16));
  for (double g : {g4, g8, g16}) EXPECT_LE(g, 2.0 + 1e-8);
}

TEST(DissipativityGap, UnboundedSensorGrowsWithK) {
  // h = x is not covered by the bound: |x g|^2 outgrows 2 |g'|^2 on wide g.
  const auto model = scalar_model(-1.0, std::sqrt(2.0), 0.0, [](double x) { return x; });
  EXPECT_GT(dissipativity_gap(build(model, 16)), dissipativity_gap(build(model, 8)));
}

TEST(GalerkinSde, ZeroSystemIsConstant) {
  GalerkinSystem sys{Matrix::Zero(2, 2), {Matrix::Zero(2, 2)}, nullptr};
  SampledPath y{0.0, 0.01, Matrix::Random(50, 1)};
  const Vector p = Vector::Constant(2, 0.7);
  for (const auto& v : integrate_galerkin_sde(sys, y, p)) EXPECT_EQ(v, p);
}

TEST(GalerkinSde, DeterministicPartFirstOrderInStep) {
  Matrix A(2, 2);
  A << -1.0, 0.4, -0.3, -0.5;
  GalerkinSystem sys{A, {Matrix::Zero(2, 2)}, nullptr};
  const Vector p(Vector::Ones(2));
  const Vector exact = (A * 1.0).exp() * p;
  auto error = [&](int steps) {
    SampledPath y{0.0, 1.0 / steps, Matrix::Zero(steps + 1, 1)};
    return (integrate_galerkin_sde(sys, y, p, steps).back() - exact).norm();
  };
  const double e1 = error(200), e2 = error(400);
  EXPECT_NEAR(e1 / e2, 2.0, 0.05);
}

TEST(GalerkinSde, ScalarGeometricSolution) {
  const double a = -0.5, b = 0.8, T = 1.0;
  GalerkinSystem sys{Matrix::Constant(1, 1, a), {Matrix::Constant(1, 1, b)}, nullptr};
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  const int fine = 4096, paths = 100;
  double err_coarse = 0.0, err_fine = 0.0;
  for (int p = 0; p < paths; ++p) {
    Matrix y(fine + 1, 1);
    y(0, 0) = 0.0;
    for (int j = 0; j < fine; ++j) y(j + 1, 0) = y(j, 0) + std::sqrt(T / fine) * normal(rng);
    const double exact = std::exp((a - 0.5 * b * b) * T + b * y(fine, 0));
    auto run = [&](int stride) {
      Matrix sub(fine / stride + 1, 1);
      for (int j = 0; j <= fine / stride; ++j) sub(j, 0) = y(j * stride, 0);
      SampledPath path{0.0, T * stride / fine, sub};
      return integrate_galerkin_sde(sys, path, Vector::Ones(1), fine / stride).back()(0);
    };
    err_coarse += std::pow(run(16) - exact, 2);
    err_fine += std::pow(run(1) - exact, 2);
  }
  const double rms_fine = std::sqrt(err_fine / paths), rms_coarse = std::sqrt(err_coarse / paths);
  EXPECT_LT(rms_fine, 0.02);
  EXPECT_GT(rms_coarse / rms_fine, 2.0);
}

TEST(GalerkinSde, StrongConvergenceAgainstQuarterStepReference) {
  const auto sys = build(scalar_model(-1.0, std::sqrt(2.0), 0.0, [](double x) { return 0.5 * x; }), 4);
  Vector p0 = Vector::Zero(4);
  p0(0) = 1.0;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  const int base = 64, refine = 4, fine = base * refine;
  double e_coarse = 0.0, e_half = 0.0;
  for (int p = 0; p < 400; ++p) {
    Matrix y(fine + 1, 1);
    y(0, 0) = 0.0;
    for (int j = 0; j < fine; ++j) y(j + 1, 0) = y(j, 0) + std::sqrt(1.0 / fine) * normal(rng);
    auto run = [&](int stride) {
      Matrix sub(fine / stride + 1, 1);
      for (int j = 0; j <= fine / stride; ++j) sub(j, 0) = y(j * stride, 0);
      return integrate_galerkin_sde(sys, SampledPath{0.0, 1.0 * stride / fine, sub}, p0, fine / stride).back();
    };
    const Vector ref = run(1);
    e_coarse += (run(4) - ref).squaredNorm();
    e_half += (run(2) - ref).squaredNorm();
  }
  EXPECT_GE(std::sqrt(e_coarse / e_half), 1.5);
}

TEST(GalerkinSde, BlowUpNamesTheStep) {
  GalerkinSystem sys{Matrix::Constant(1, 1, 1e200), {Matrix::Zero(1, 1)}, nullptr};
  SampledPath y{0.0, 1.0, Matrix::Zero(10, 1)};
  try {
    integrate_galerkin_sde(sys, y, Vector::Ones(1));
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("step 2"), std::string::npos) << e.what();
  }
}

TEST(GalerkinSde, StrideAndValidation) {
  GalerkinSystem sys{Matrix::Zero(1, 1), {Matrix::Zero(1, 1)}, nullptr};
  SampledPath y{0.0, 0.1, Matrix::Zero(11, 1)};
  EXPECT_EQ(integrate_galerkin_sde(sys, y, Vector::Ones(1), 5).size(), 3u);
  EXPECT_THROW(integrate_galerkin_sde(sys, y, Vector::Ones(2)), ValidationError);
  EXPECT_THROW(integrate_galerkin_sde(sys, y, Vector::Ones(1), 0), ValidationError);
}
