#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "zakai/hermite_space.hpp"
#include "zakai/types.hpp"

namespace zakai {

/// Diffusion filtering model
///   dX = b(X) dt + sigma(X) dW + rho(X) dV,   dY = h(X) dt + dV,
/// with X in R^d, W in R^d1, V and Y in R^r, and X(0) distributed with
/// density p0. Coefficients are plain callables; no derivatives of them
/// are ever required.
struct FilterModel {
  int d = 1;
  int d1 = 1;
  int r = 1;
  std::function<Vector(Point)> drift;   // b, size d
  std::function<Matrix(Point)> sigma;   // d x d1
  std::function<Matrix(Point)> rho;     // d x r
  std::function<Vector(Point)> sensor;  // h, size r
  ScalarField p0;
};

/// Checks coefficient shapes and finiteness at every node, nonnegativity of
/// p0, and that the quadrature mass of p0 is within 1e-3 of one.
void validate_model(const FilterModel& model, const QuadratureGrid& grid);

/// (L g)(x) = 1/2 sum_ij ((sigma sigma^T)_ij + (rho rho^T)_ij) d_ij g + sum_i b_i d_i g.
double apply_generator(const FilterModel& model, const Jet& g, Point x);

/// (M_l g)(x) = h_l(x) g(x) + sum_i rho_il(x) d_i g, 1-based l.
double apply_M(const FilterModel& model, int l, const Jet& g, Point x);

/// Galerkin projection of the Zakai operators onto span{e_1..e_K}:
/// A_ij = (L* e_j, e_i)_0 and B_l,ij = (M_l* e_j, e_i)_0.
struct GalerkinSystem {
  Matrix A;
  std::vector<Matrix> B;
  std::shared_ptr<const SpatialBasis> basis;

  int size() const { return static_cast<int>(A.rows()); }
  int channels() const { return static_cast<int>(B.size()); }
};

/// Assembles through the adjoint identity (L* e_j, e_i)_0 = (e_j, L e_i)_0,
/// so derivatives only ever act on Hermite functions.
GalerkinSystem assemble(const FilterModel& model, std::shared_ptr<const SpatialBasis> basis,
                        const QuadratureGrid& grid);

/// Largest eigenvalue of A + A^T + sum_l B_l^T B_l.
double dissipativity_gap(const GalerkinSystem& system);

/// Observation samples on a uniform grid: row j holds Y(t0 + j dt).
struct SampledPath {
  double t0 = 0.0;
  double dt = 0.0;
  Matrix values;  // samples x r

  int samples() const { return static_cast<int>(values.rows()); }
  double time(int j) const { return t0 + j * dt; }
};

/// Euler-Maruyama for dp = A p dt + sum_l B_l p dY_l on the sample grid of
/// y_path. Returns p at samples 0, stride, 2 stride, ... Throws NumericalError
/// naming the first step that produced a non-finite state.
std::vector<Vector> integrate_galerkin_sde(const GalerkinSystem& system, const SampledPath& y_path,
                                           const Vector& p_init, int stride = 1);

}  // namespace zakai
