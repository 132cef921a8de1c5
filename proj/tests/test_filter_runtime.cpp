#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <cstring>
#include <numbers>
#include <random>

#include "zakai/filter_runtime.hpp"

using namespace zakai;

namespace {

ObservationWindow window_from(double t0, double delta, int samples, const std::function<double(double)>& y) {
  ObservationWindow w;
  w.t_start = t0;
  w.t_end = t0 + delta;
  w.values = Matrix(samples + 1, 1);
  for (int j = 0; j <= samples; ++j) {
    const double t = t0 + delta * j / samples;
    w.times.push_back(t);
    w.values(j, 0) = y(t - t0);
  }
  return w;
}

// Galerkin matrices of b = -x, sigma = sqrt(2), rho = 0, h = x from the
// Hermite ladder identities.
GalerkinSystem ou_system(int K, std::shared_ptr<const SpatialBasis> basis = nullptr) {
  const int big = K + 2;
  Matrix D = Matrix::Zero(big, big), X = Matrix::Zero(big, big);
  for (int n = 0; n < big; ++n) {
    if (n > 0) D(n - 1, n) = X(n - 1, n) = std::sqrt(n / 2.0);
    if (n + 1 < big) {
      D(n + 1, n) = -std::sqrt((n + 1) / 2.0);
      X(n + 1, n) = std::sqrt((n + 1) / 2.0);
    }
  }
  const Matrix I = Matrix::Identity(big, big);
  return GalerkinSystem{(D * D + (I + X * D)).topLeftCorner(K, K), {X.topLeftCorner(K, K)}, basis};
}

double wick_oracle(const MultiIndex& alpha, const XiTable& xi) {
  // prod He_c(xi) / alpha!, with He from the explicit low-degree formulas
  double v = 1.0, fact = 1.0;
  for (const auto& e : alpha.entries()) {
    const double x = xi.at(e.k, e.l);
    double he = 1.0;
    if (e.count == 1) he = x;
    if (e.count == 2) he = x * x - 1.0;
    if (e.count == 3) he = x * x * x - 3.0 * x;
    v *= he;
    for (int c = 2; c <= e.count; ++c) fact *= c;
  }
  return v / fact;
}

}  // namespace

TEST(XiIntegrals, ConstantPathGivesZero) {
  const auto tb = cosine_basis(0.5, 4);
  const auto xi = xi_integrals(window_from(1.0, 0.5, 64, [](double) { return 3.2; }), tb);
  EXPECT_EQ(xi.modes(), 4);
  for (int k = 1; k <= 4; ++k) EXPECT_NEAR(xi.at(k, 1), 0.0, 1e-13);
}

TEST(XiIntegrals, LinearPath) {
  const auto tb = cosine_basis(1.0, 2);
  const auto coarse = xi_integrals(window_from(0.0, 1.0, 16, [](double s) { return s; }), tb);
  const auto fine = xi_integrals(window_from(0.0, 1.0, 256, [](double s) { return s; }), tb);
  EXPECT_NEAR(coarse.at(1, 1), 1.0, 1e-15);
  EXPECT_NEAR(fine.at(2, 1), 0.0, 1e-4);
  EXPECT_LT(std::abs(fine.at(2, 1)), std::abs(coarse.at(2, 1)) + 1e-15);
}

TEST(XiIntegrals, TrapezoidRefinementIsSecondOrder) {
  const double delta = 0.8;
  const auto tb = cosine_basis(delta, 4);
  auto y = [](double s) { return std::sin(3.0 * s) + s * s; };
  const auto a = xi_integrals(window_from(0.0, delta, 64, y), tb);
  const auto b = xi_integrals(window_from(0.0, delta, 128, y), tb);
  const auto c = xi_integrals(window_from(0.0, delta, 256, y), tb);
  for (int k = 2; k <= 4; ++k) {
    const double ratio = (a.at(k, 1) - b.at(k, 1)) / (b.at(k, 1) - c.at(k, 1));
    EXPECT_NEAR(ratio, 4.0, 0.3) << "k=" << k;
  }
  // k = 1 is exact at any resolution
  EXPECT_DOUBLE_EQ(a.at(1, 1), c.at(1, 1));
}

TEST(XiIntegrals, EnforcesEightPointsPerOscillation) {
  const auto tb = cosine_basis(1.0, 4);
  EXPECT_NO_THROW(xi_integrals(window_from(0.0, 1.0, 32, [](double s) { return s; }), tb));
  try {
    xi_integrals(window_from(0.0, 1.0, 31, [](double s) { return s; }), tb);
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("8n"), std::string::npos) << e.what();
  }
}

TEST(StepMatrix, ZeroOrderTableIgnoresObservations) {
  const auto sys = ou_system(4);
  const auto table = precompute_table(sys, cosine_basis(0.1, 2), 0, 2, 64);
  XiTable xi(2, 1);
  xi.at(1, 1) = 1.7;
  xi.at(2, 1) = -0.4;
  EXPECT_LE((step_matrix(table, xi) - (sys.A * 0.1).exp()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(StepMatrix, AllZeroObservations) {
  const auto sys = ou_system(4);
  const auto tb = cosine_basis(0.1, 3);
  const XiTable zero(3, 1);
  const auto first = precompute_table(sys, tb, 1, 3, 64);
  EXPECT_LE((step_matrix(first, zero) - (sys.A * 0.1).exp()).cwiseAbs().maxCoeff(), 1e-10);
  // second order: only even entries survive, each weighted He_2(0) / 2! = -1/2
  const auto second = precompute_table(sys, tb, 2, 3, 64);
  Matrix expected = second.coefficients[0];
  for (int k = 1; k <= 3; ++k) expected -= 0.5 * second.coefficients[find_index(second, MultiIndex(1, {{k, 1, 2}}))];
  EXPECT_LE((step_matrix(second, zero) - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(StepMatrix, MatchesExpansionOracle) {
  const auto sys = ou_system(5);
  const auto table = precompute_table(sys, cosine_basis(0.2, 3), 3, 3, 64);
  XiTable xi(3, 1);
  xi.at(1, 1) = 0.8;
  xi.at(2, 1) = -1.1;
  xi.at(3, 1) = 0.3;
  Matrix expected = Matrix::Zero(5, 5);
  for (std::size_t a = 0; a < table.indices.size(); ++a) expected += wick_oracle(table.indices[a], xi) * table.coefficients[a];
  EXPECT_LE((step_matrix(table, xi) - expected).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(StepMatrix, ScalarExampleIsOnePlusBDeltaY) {
  const double b = 0.6, delta = 0.25;
  GalerkinSystem sys{Matrix::Zero(1, 1), {Matrix::Constant(1, 1, b)}, nullptr};
  const auto table = precompute_table(sys, cosine_basis(delta, 1), 1, 1, 64);
  const auto w = window_from(0.0, delta, 8, [](double s) { return 0.3 + 2.0 * s; });
  const double dy = 2.0 * delta;
  const Matrix Q = step_matrix(table, xi_integrals(w, cosine_basis(delta, 1)));
  EXPECT_NEAR(Q(0, 0), 1.0 + b * dy, 1e-14);
  const auto next = advance(FilterState{0.0, Vector::Constant(1, 2.0)}, Q, delta);
  EXPECT_NEAR(next.coeffs(0), 2.0 * (1.0 + b * dy), 1e-14);
}

TEST(Advance, IdentityAndComposition) {
  const FilterState s{1.5, Vector::LinSpaced(3, -1.0, 2.0)};
  const auto same = advance(s, Matrix::Identity(3, 3), 0.1);
  EXPECT_EQ(same.coeffs, s.coeffs);
  EXPECT_DOUBLE_EQ(same.t, 1.6);
  const Matrix Q1 = Matrix::Random(3, 3), Q2 = Matrix::Random(3, 3);
  const auto two = advance(advance(s, Q1, 0.1), Q2, 0.1);
  EXPECT_LE((two.coeffs - Q2 * Q1 * s.coeffs).norm(), 1e-14);
  Matrix bad = Matrix::Identity(3, 3);
  bad(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(advance(s, bad, 0.1), NumericalError);
  EXPECT_THROW(advance(s, Matrix::Identity(2, 2), 0.1), ValidationError);
}

TEST(Synthesis, DensityAndFunctionals) {
  const int K = 12;
  const SpatialBasis basis(1, K);
  const auto grid = gauss_hermite_grid(1, 40);
  const std::vector<double> x = {0.4};
  EXPECT_EQ(density_at(FilterState{0.0, Vector::Zero(K)}, basis, x), 0.0);
  EXPECT_DOUBLE_EQ(density_at(FilterState{0.0, Vector::Unit(K, 0)}, basis, x), eval_basis(basis, 1, x));

  auto gauss = [](Point p) { return std::exp(-0.5 * p[0] * p[0]) / std::sqrt(2.0 * std::numbers::pi); };
  const FilterState g{0.0, project(gauss, basis, grid)};
  double l2 = 0.0;
  for (int i = 0; i < grid.count(); ++i) l2 += grid.weights(i) * std::pow(density_at(g, basis, grid.node(i)) - gauss(grid.node(i)), 2);
  EXPECT_LT(std::sqrt(l2), 1e-4);

  const Vector one = project([](Point) { return 1.0; }, basis, grid);
  EXPECT_EQ(functional(g, Vector::Zero(K)), 0.0);
  EXPECT_EQ(functional(g, Vector::Unit(K, 0)), g.coeffs(0));
  double mass = 0.0;
  for (int i = 0; i < grid.count(); ++i) mass += grid.weights(i) * density_at(g, basis, grid.node(i));
  EXPECT_NEAR(functional(g, one), mass, 1e-12);
}

TEST(Estimate, NormalizationAndScaleInvariance) {
  const int K = 8;
  const SpatialBasis basis(1, K);
  const auto grid = gauss_hermite_grid(1, 30);
  const Vector one = project([](Point) { return 1.0; }, basis, grid);
  const Vector fx = project([](Point p) { return p[0]; }, basis, grid);
  const FilterState s{0.0, project([](Point p) { return std::exp(-0.5 * (p[0] - 0.7) * (p[0] - 0.7)); }, basis, grid)};
  EXPECT_EQ(estimate(s, one, one, 1e-12), 1.0);
  const double base = estimate(s, fx, one, 1e-12);
  EXPECT_NEAR(base, 0.7, 1e-3);
  for (double c : {1e-3, 1.0, 1e3}) {
    const FilterState scaled{0.0, c * s.coeffs};
    EXPECT_NEAR(estimate(scaled, fx, one, 1e-12 * c), base, 4e-16 * std::abs(base));
  }
  EXPECT_THROW(estimate(FilterState{0.0, Vector::Zero(K)}, fx, one, 1e-12), DegenerateNormalization);
}

TEST(Linearity, AdvanceDensityFunctional) {
  const int K = 6;
  const SpatialBasis basis(1, K);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal;
  auto rnd = [&] {
    Vector v(K);
    for (int i = 0; i < K; ++i) v(i) = normal(rng);
    return v;
  };
  Matrix Q(K, K);
  for (int i = 0; i < K; ++i) Q.col(i) = rnd();
  const Vector u = rnd(), v = rnd(), f = rnd();
  const double a = 1.7, b = -0.3;
  const Vector combo = a * u + b * v;
  const std::vector<double> x = {0.35};
  EXPECT_LE((advance(FilterState{0, combo}, Q, 1).coeffs - (a * advance(FilterState{0, u}, Q, 1).coeffs +
                                                          b * advance(FilterState{0, v}, Q, 1).coeffs))
                .norm(),
            1e-12);
  EXPECT_NEAR(density_at(FilterState{0, combo}, basis, x),
              a * density_at(FilterState{0, u}, basis, x) + b * density_at(FilterState{0, v}, basis, x), 1e-12);
  EXPECT_NEAR(functional(FilterState{0, combo}, f),
              a * functional(FilterState{0, u}, f) + b * functional(FilterState{0, v}, f), 1e-12);
}

TEST(NegativeMass, Diagnostics) {
  const SpatialBasis basis(1, 4);
  const auto grid = gauss_hermite_grid(1, 40);
  EXPECT_NEAR(negative_mass_fraction(FilterState{0, Vector::Unit(4, 0)}, basis, grid), 0.0, 1e-15);
  EXPECT_NEAR(negative_mass_fraction(FilterState{0, Vector::Unit(4, 1)}, basis, grid), 0.5, 1e-2);
}

TEST(ChaosFilter, ReplayIsBitIdentical) {
  auto basis = std::make_shared<const SpatialBasis>(1, 6);
  const auto table = precompute_table(ou_system(6, basis), cosine_basis(0.05, 2), 2, 2, 64);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  double y = 0.0;
  std::vector<ObservationWindow> windows;
  for (int i = 0; i < 20; ++i) {
    ObservationWindow w;
    w.t_start = 0.05 * i;
    w.t_end = 0.05 * (i + 1);
    w.values = Matrix(17, 1);
    for (int j = 0; j <= 16; ++j) {
      if (j > 0) y += std::sqrt(0.05 / 16) * normal(rng);
      w.times.push_back(w.t_start + 0.05 * j / 16);
      w.values(j, 0) = y;
    }
    windows.push_back(w);
  }
  Vector p0 = Vector::Unit(6, 0);
  ChaosFilter a(table, p0, 0.0, true), b(table, p0, 0.0, true);
  for (const auto& w : windows) {
    a.step(w);
    b.step(w);
  }
  ASSERT_EQ(a.history().size(), b.history().size());
  EXPECT_EQ(a.history().size(), 21u);
  for (std::size_t i = 0; i < a.history().size(); ++i)
    EXPECT_EQ(std::memcmp(a.history()[i].coeffs.data(), b.history()[i].coeffs.data(), 6 * sizeof(double)), 0);
  EXPECT_NEAR(a.state().t, 1.0, 1e-12);
}

TEST(ChaosFilter, RejectsMisalignedWindow) {
  const auto table = precompute_table(ou_system(3), cosine_basis(0.1, 1), 1, 1, 64);
  ChaosFilter f(table, Vector::Unit(3, 0));
  EXPECT_THROW(f.step(window_from(0.05, 0.1, 8, [](double s) { return s; })), ValidationError);
  EXPECT_THROW(f.step(window_from(0.0, 0.2, 16, [](double s) { return s; })), ValidationError);
}

TEST(ChaosFilter, OneWindowErrorShrinksWithTruncation) {
  // Mean-square distance at T = delta between the chaos state and the
  // Euler-Maruyama Galerkin solution on 200 shared Brownian paths.
  const int K = 8, fine = 1024, paths = 200;
  const double delta = 1.0;
  const auto sys = ou_system(K);
  const Vector p0 = Vector::Unit(K, 0);
  struct Setting {
    int N, n;
  };
  const std::vector<Setting> settings = {{2, 4}, {3, 4}, {4, 2}, {4, 4}};
  std::vector<PropagatorTable> tables;
  for (const auto& s : settings) tables.push_back(precompute_table(sys, cosine_basis(delta, s.n), s.N, s.n, default_substeps(s.n)));
  std::vector<double> mse(settings.size(), 0.0);
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal;
  for (int p = 0; p < paths; ++p) {
    SampleRecord rec;
    rec.spacing = delta / fine;
    rec.values = Matrix(fine + 1, 1);
    rec.values(0, 0) = 0.0;
    for (int j = 0; j <= fine; ++j) rec.times.push_back(delta * j / fine);
    for (int j = 0; j < fine; ++j) rec.values(j + 1, 0) = rec.values(j, 0) + std::sqrt(rec.spacing) * normal(rng);
    const Vector oracle = integrate_galerkin_sde(sys, to_sampled_path(rec), p0, fine).back();
    const auto window = cut_windows(rec, delta).front();
    for (std::size_t s = 0; s < settings.size(); ++s) {
      ChaosFilter f(tables[s], p0);
      mse[s] += (f.step(window).coeffs - oracle).squaredNorm() / paths;
    }
  }
  EXPECT_LT(mse[1], mse[0]);  // N: 2 -> 3 at n = 4
  EXPECT_LT(mse[3], mse[2]);  // n: 2 -> 4 at N = 4
}
