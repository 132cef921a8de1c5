#pragma once

#include <vector>

#include "zakai/galerkin.hpp"
#include "zakai/multiindex.hpp"
#include "zakai/temporal_basis.hpp"
#include "zakai/types.hpp"

namespace zakai {

/// Offline product of the chaos filter: for every alpha in J_N^n the K x K
/// matrix whose k-th column is phi_alpha(delta; u^k), the solution of
///   phi_alpha' = A phi_alpha + sum_{k,l} alpha_k^l m_k(s) B_l phi_{alpha(k,l)},
///   phi_alpha(0) = u^k 1{|alpha| = 0}.
/// The system matrices and basis metadata travel with the table so a table
/// file is self-describing.
struct PropagatorTable {
  int K = 0;
  int r = 0;
  int N = 0;
  int n = 0;
  int substeps = 0;
  double delta = 0.0;

  int d = 1;
  std::vector<std::vector<int>> gammas;
  std::vector<double> lambdas;

  Matrix A;
  std::vector<Matrix> B;

  std::vector<MultiIndex> indices;
  std::vector<Matrix> coefficients;  // parallel to indices
};

/// max(64, 16 n): at least 16 steps per oscillation of the fastest cosine.
int default_substeps(int n);

/// Which stored layers each layer read while it was built. Filled by
/// precompute_table when supplied.
struct PrecomputeTrace {
  std::vector<int> min_layer_read;  // indexed by layer |alpha|; -1 when none
  std::vector<int> max_layer_read;
  std::size_t peak_stored_layers = 0;
};

/// Classical RK4 with `substeps` uniform steps over [0, delta], one layer
/// |alpha| = j at a time. Layer j consumes the RK stage values of layer j-1
/// only; layer j-2 is released before layer j starts, so the result equals
/// RK4 applied to the whole triangular system.
PropagatorTable precompute_table(const GalerkinSystem& system, const TemporalBasis& tbasis, int N,
                                 int n, int substeps, PrecomputeTrace* trace = nullptr);

/// phi_alpha(delta; zeta) for a single index, recursing over all indices
/// reachable from alpha by lowering.
Vector solve_phi(const GalerkinSystem& system, const TemporalBasis& tbasis, const MultiIndex& alpha,
                 const Vector& zeta, int substeps);

/// int_0^delta exp(A (delta - s)) B_q exp(A s) zeta m_i(s) ds for |alpha| = 1,
/// by composite Gauss-Legendre with `panels` panels of 8 points each. Serves
/// as an independent check of solve_phi.
Vector closed_form_order1(const GalerkinSystem& system, const TemporalBasis& tbasis,
                          const MultiIndex& alpha, const Vector& zeta, int panels = 64);

struct ParsevalMass {
  double total = 0.0;
  std::vector<double> by_layer;  // index = |alpha|
};

/// sum_alpha |phi_alpha(delta; zeta)|^2 / alpha! over the table, with
/// per-|alpha| subtotals.
ParsevalMass parseval_mass(const PropagatorTable& table, const Vector& zeta);

/// Position of alpha in table.indices, or -1.
int find_index(const PropagatorTable& table, const MultiIndex& alpha);

}  // namespace zakai
