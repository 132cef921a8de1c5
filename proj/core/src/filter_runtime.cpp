#include "zakai/filter_runtime.hpp"

#include <cmath>
#include <string>

namespace zakai {

XiTable xi_integrals(const ObservationWindow& window, const TemporalBasis& tbasis) {
  const int samples = static_cast<int>(window.times.size());
  if (samples < 2) throw ValidationError("xi_integrals: a window needs at least two samples");
  if (window.values.rows() != samples) throw ValidationError("xi_integrals: times and values disagree");
  const double delta = tbasis.delta();
  const int n = tbasis.size();
  const int r = static_cast<int>(window.values.cols());
  if (std::abs((window.t_end - window.t_start) - delta) > 1e-9 * delta)
    throw ValidationError("xi_integrals: window length differs from delta");
  const double spacing = (window.t_end - window.t_start) / (samples - 1);
  if (spacing > delta / (8.0 * n) * (1.0 + 1e-9))
    throw ValidationError("xi_integrals: observation spacing " + std::to_string(spacing) +
                          " exceeds delta/(8n) = " + std::to_string(delta / (8.0 * n)) +
                          " (8n rule: eight samples per oscillation of the fastest cosine)");

  XiTable xi(n, r);
  for (int l = 1; l <= r; ++l) {
    const double y0 = window.values(0, l - 1);
    const double increment = window.values(samples - 1, l - 1) - y0;
    xi.at(1, l) = increment / std::sqrt(delta);
    for (int k = 2; k <= n; ++k) {
      double riemann = 0.0;
      for (int j = 0; j < samples; ++j) {
        const double s = window.times[j] - window.t_start;
        const double weight = (j == 0 || j == samples - 1) ? 0.5 : 1.0;
        riemann += weight * tbasis.derivative(k, s) * (window.values(j, l - 1) - y0);
      }
      xi.at(k, l) = tbasis.value(k, delta) * increment - spacing * riemann;
    }
  }
  return xi;
}

Matrix step_matrix(const PropagatorTable& table, const XiTable& xi) {
  if (xi.modes() < table.n || xi.channels() < table.r)
    throw ValidationError("step_matrix: xi table does not cover all (k, l) with k <= n, l <= r");
  Matrix Q = Matrix::Zero(table.K, table.K);
  for (std::size_t a = 0; a < table.indices.size(); ++a) {
    const auto& alpha = table.indices[a];
    const double weight = xi_eval(alpha, xi) / std::sqrt(static_cast<double>(factorial(alpha)));
    Q.noalias() += weight * table.coefficients[a];
  }
  return Q;
}

FilterState advance(const FilterState& state, const Matrix& Q, double delta) {
  if (Q.rows() != state.coeffs.size() || Q.cols() != state.coeffs.size())
    throw ValidationError("advance: step matrix and state dimensions disagree");
  FilterState next;
  next.t = state.t + delta;
  next.coeffs = Q * state.coeffs;
  if (!next.coeffs.allFinite())
    throw NumericalError("advance: non-finite filter coefficients at t = " + std::to_string(next.t));
  return next;
}

double density_at(const FilterState& state, const SpatialBasis& basis, Point x) {
  if (state.coeffs.size() > basis.size()) throw ValidationError("density_at: state larger than basis");
  const auto jets = basis_jets(basis, x);
  double value = 0.0;
  for (int j = 0; j < state.coeffs.size(); ++j) value += state.coeffs(j) * jets[j].value;
  return value;
}

double functional(const FilterState& state, const Vector& f_coeffs) {
  if (f_coeffs.size() != state.coeffs.size()) throw ValidationError("functional: coefficient size mismatch");
  return f_coeffs.dot(state.coeffs);
}

double estimate(const FilterState& state, const Vector& f_coeffs, const Vector& one_coeffs, double floor) {
  const double mass = functional(state, one_coeffs);
  if (!(std::abs(mass) >= floor))
    throw DegenerateNormalization("estimate: normalizing mass " + std::to_string(mass) + " at t = " +
                                  std::to_string(state.t) +
                                  " is below the floor; the filter diverged or the truncation collapsed");
  return functional(state, f_coeffs) / mass;
}

double negative_mass_fraction(const FilterState& state, const SpatialBasis& basis, const QuadratureGrid& grid) {
  double negative = 0.0, absolute = 0.0;
  for (int i = 0; i < grid.count(); ++i) {
    const double p = density_at(state, basis, grid.node(i));
    absolute += grid.weights(i) * std::abs(p);
    if (p < 0.0) negative -= grid.weights(i) * p;
  }
  return absolute > 0.0 ? negative / absolute : 0.0;
}

ChaosFilter::ChaosFilter(PropagatorTable table, Vector initial_coeffs, double t0, bool keep_history)
    : table_(std::move(table)),
      tbasis_(table_.delta, table_.n),
      state_{t0, std::move(initial_coeffs)},
      keep_history_(keep_history) {
  if (state_.coeffs.size() != table_.K) throw ValidationError("ChaosFilter: initial coefficients have wrong size");
  if (keep_history_) history_.push_back(state_);
}

const FilterState& ChaosFilter::step(const ObservationWindow& window) {
  if (std::abs(window.t_start - state_.t) > 1e-9 * std::max(1.0, std::abs(state_.t)))
    throw ValidationError("ChaosFilter: window starts at " + std::to_string(window.t_start) +
                          " but the filter is at t = " + std::to_string(state_.t));
  const Matrix Q = step_matrix(table_, xi_integrals(window, tbasis_));
  state_ = advance(state_, Q, table_.delta);
  state_.t = window.t_end;
  if (keep_history_) history_.push_back(state_);
  return state_;
}

}  // namespace zakai
