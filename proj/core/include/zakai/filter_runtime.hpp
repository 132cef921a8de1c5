#pragma once

#include <optional>
#include <vector>

#include "zakai/chaos_propagator.hpp"
#include "zakai/hermite_space.hpp"
#include "zakai/multiindex.hpp"
#include "zakai/observations.hpp"
#include "zakai/temporal_basis.hpp"

namespace zakai {

/// xi_{k,l} = int m_k(s - t_start) dY_l(s) over one window. For k = 1 this is
/// the exact increment divided by sqrt(delta). For k > 1 it is
///   m_k(delta) (Y(t_end) - Y(t_start)) - int m_k'(s) (Y(s) - Y(t_start)) ds
/// with the Riemann integral by the trapezoidal rule on the samples.
/// Requires sample spacing <= delta / (8 n).
XiTable xi_integrals(const ObservationWindow& window, const TemporalBasis& tbasis);

/// Q = sum_alpha q^alpha xi_alpha / sqrt(alpha!), the one-step propagator
/// given this window's observations.
Matrix step_matrix(const PropagatorTable& table, const XiTable& xi);

/// Coefficients of the unnormalized density at time t.
struct FilterState {
  double t = 0.0;
  Vector coeffs;
};

/// p <- Q p, t <- t + delta. Throws NumericalError on a non-finite result.
FilterState advance(const FilterState& state, const Matrix& Q, double delta);

/// sum_j p_j e_j(x). May be negative: truncation artifacts are not clipped.
double density_at(const FilterState& state, const SpatialBasis& basis, Point x);

/// sum_j f_j p_j.
double functional(const FilterState& state, const Vector& f_coeffs);

/// functional(f) / functional(1). Throws DegenerateNormalization when
/// |functional(1)| < floor.
double estimate(const FilterState& state, const Vector& f_coeffs, const Vector& one_coeffs, double floor);

/// Quadrature mass of the negative part of the synthesized density divided
/// by the mass of its absolute value.
double negative_mass_fraction(const FilterState& state, const SpatialBasis& basis, const QuadratureGrid& grid);

/// The online recursion over successive observation windows.
class ChaosFilter {
 public:
  ChaosFilter(PropagatorTable table, Vector initial_coeffs, double t0 = 0.0, bool keep_history = false);

  const FilterState& state() const { return state_; }
  const PropagatorTable& table() const { return table_; }
  const TemporalBasis& temporal_basis() const { return tbasis_; }
  const std::vector<FilterState>& history() const { return history_; }

  /// Consumes one window starting at the current time.
  const FilterState& step(const ObservationWindow& window);

 private:
  PropagatorTable table_;
  TemporalBasis tbasis_;
  FilterState state_;
  bool keep_history_;
  std::vector<FilterState> history_;
};

}  // namespace zakai
