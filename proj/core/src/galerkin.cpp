#include "zakai/galerkin.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace zakai {

namespace {

void require_finite(const Matrix& m, const char* what, int node) {
  if (!m.allFinite())
    throw NumericalError(std::string("model coefficient ") + what + " is not finite at node " +
                         std::to_string(node));
}

void require_shape(const Matrix& m, int rows, int cols, const char* what) {
  if (m.rows() != rows || m.cols() != cols)
    throw ValidationError(std::string("model coefficient ") + what + " has shape " +
                          std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + ", expected " +
                          std::to_string(rows) + "x" + std::to_string(cols));
}

}  // namespace

void validate_model(const FilterModel& model, const QuadratureGrid& grid) {
  if (model.d < 1 || model.d1 < 1 || model.r < 1)
    throw ValidationError("model dimensions d, d1, r must be >= 1");
  if (!model.drift || !model.sigma || !model.rho || !model.sensor || !model.p0)
    throw ValidationError("model coefficients b, sigma, rho, h and p0 must all be set");
  if (grid.dim != model.d) throw ValidationError("quadrature grid dimension differs from model d");
  double mass = 0.0;
  for (int i = 0; i < grid.count(); ++i) {
    const auto x = grid.node(i);
    const Matrix b = model.drift(x);
    const Matrix s = model.sigma(x);
    const Matrix rho = model.rho(x);
    const Matrix h = model.sensor(x);
    require_shape(b, model.d, 1, "b");
    require_shape(s, model.d, model.d1, "sigma");
    require_shape(rho, model.d, model.r, "rho");
    require_shape(h, model.r, 1, "h");
    require_finite(b, "b", i);
    require_finite(s, "sigma", i);
    require_finite(rho, "rho", i);
    require_finite(h, "h", i);
    const double p = model.p0(x);
    if (!std::isfinite(p) || p < 0.0)
      throw ValidationError("p0 is negative or not finite at node " + std::to_string(i));
    mass += grid.weights(i) * p;
  }
  if (std::abs(mass - 1.0) > 1e-3)
    throw ValidationError("p0 quadrature mass " + std::to_string(mass) + " is not within 1e-3 of 1");
}

double apply_generator(const FilterModel& model, const Jet& g, Point x) {
  const Vector b = model.drift(x);
  const Matrix s = model.sigma(x);
  const Matrix rho = model.rho(x);
  const Matrix diffusion = s * s.transpose() + rho * rho.transpose();
  const double value = 0.5 * (diffusion.cwiseProduct(g.hess)).sum() + b.dot(g.grad);
  if (!std::isfinite(value)) throw NumericalError("apply_generator: non-finite value");
  return value;
}

double apply_M(const FilterModel& model, int l, const Jet& g, Point x) {
  if (l < 1 || l > model.r) throw ValidationError("apply_M: channel out of range");
  const Vector h = model.sensor(x);
  const Matrix rho = model.rho(x);
  const double value = h(l - 1) * g.value + rho.col(l - 1).dot(g.grad);
  if (!std::isfinite(value)) throw NumericalError("apply_M: non-finite value");
  return value;
}

GalerkinSystem assemble(const FilterModel& model, std::shared_ptr<const SpatialBasis> basis,
                        const QuadratureGrid& grid) {
  if (!basis) throw ValidationError("assemble: basis is null");
  if (basis->dim() != model.d || grid.dim != model.d)
    throw ValidationError("assemble: basis, grid and model dimensions differ");
  const int K = basis->size();
  const int r = model.r;

  // Columns: basis values at nodes, and L e_i / M_l e_i at nodes.
  Matrix values(K, grid.count());
  Matrix generated(K, grid.count());
  std::vector<Matrix> multiplied(r, Matrix(K, grid.count()));
  for (int node = 0; node < grid.count(); ++node) {
    const auto x = grid.node(node);
    const auto jets = basis_jets(*basis, x);
    const Vector b = model.drift(x);
    const Matrix s = model.sigma(x);
    const Matrix rho = model.rho(x);
    const Vector h = model.sensor(x);
    const Matrix diffusion = s * s.transpose() + rho * rho.transpose();
    for (int i = 0; i < K; ++i) {
      const Jet& jet = jets[i];
      values(i, node) = jet.value;
      generated(i, node) = 0.5 * diffusion.cwiseProduct(jet.hess).sum() + b.dot(jet.grad);
      for (int l = 0; l < r; ++l)
        multiplied[l](i, node) = h(l) * jet.value + rho.col(l).dot(jet.grad);
    }
  }

  GalerkinSystem system;
  system.basis = std::move(basis);
  const auto w = grid.weights.asDiagonal();
  // A(i, j) = sum_nodes w e_j (L e_i)
  system.A = generated * w * values.transpose();
  system.B.reserve(r);
  for (int l = 0; l < r; ++l) system.B.push_back(multiplied[l] * w * values.transpose());

  if (!system.A.allFinite()) throw NumericalError("assemble: non-finite entry in A");
  for (int l = 0; l < r; ++l)
    if (!system.B[l].allFinite())
      throw NumericalError("assemble: non-finite entry in B_" + std::to_string(l + 1));
  return system;
}

double dissipativity_gap(const GalerkinSystem& system) {
  Matrix sym = system.A + system.A.transpose();
  for (const auto& B : system.B) sym += B.transpose() * B;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().maxCoeff();
}

std::vector<Vector> integrate_galerkin_sde(const GalerkinSystem& system, const SampledPath& y_path,
                                           const Vector& p_init, int stride) {
  const int K = system.size();
  if (p_init.size() != K) throw ValidationError("integrate_galerkin_sde: p_init has wrong size");
  if (y_path.values.cols() != system.channels())
    throw ValidationError("integrate_galerkin_sde: observation channel count differs from r");
  if (stride < 1) throw ValidationError("integrate_galerkin_sde: stride must be >= 1");
  if (y_path.samples() > 1 && !(y_path.dt > 0.0))
    throw ValidationError("integrate_galerkin_sde: sample spacing must be positive");

  std::vector<Vector> out;
  out.reserve(y_path.samples() / stride + 1);
  Vector p = p_init;
  Vector next(K);
  out.push_back(p);
  for (int j = 1; j < y_path.samples(); ++j) {
    next.noalias() = p + y_path.dt * (system.A * p);
    for (int l = 0; l < system.channels(); ++l) {
      const double dy = y_path.values(j, l) - y_path.values(j - 1, l);
      next.noalias() += dy * (system.B[l] * p);
    }
    p.swap(next);
    if (!p.allFinite())
      throw NumericalError("integrate_galerkin_sde: non-finite state at step " + std::to_string(j));
    if (j % stride == 0) out.push_back(p);
  }
  return out;
}

}  // namespace zakai
