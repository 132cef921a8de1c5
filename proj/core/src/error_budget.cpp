#include "zakai/error_budget.hpp"

#include <cmath>

#include "zakai/types.hpp"

namespace zakai {

namespace {

void check_nonnegative(const ErrorBudget& b) {
  const double values[] = {b.delta, b.nu, b.w, b.C_rho, b.C, b.C_nuT, b.C_nuTw, b.C_f, b.T,
                           b.eps_B, b.initial_norm_sq};
  for (double v : values)
    if (!(v >= 0.0)) throw ValidationError("error budget inputs must be nonnegative");
  if (b.N < 0 || b.n < 1 || b.K < 1 || b.r < 1 || b.d < 1)
    throw ValidationError("error budget requires N >= 0, n >= 1, K >= 1, r >= 1, d >= 1");
}

double factorial_real(int k) { return std::tgamma(k + 1.0); }

}  // namespace

ChaosBound chaos_error_bound(const ErrorBudget& budget) {
  check_nonnegative(budget);
  const double cd = budget.C * budget.delta;
  const double growth = std::exp(cd) * budget.initial_norm_sq;
  ChaosBound out;
  out.N_term = growth * std::pow(cd, budget.N + 1) / factorial_real(budget.N + 1);
  out.n_term = growth * budget.delta * budget.delta / budget.n * (budget.eps_B + cd);
  out.total = out.N_term + out.n_term;
  return out;
}

FilterBound filter_error_bound(const ErrorBudget& budget) {
  check_nonnegative(budget);
  const double d = budget.d;
  if (!(budget.nu > d + 1.0)) throw ValidationError("filter_error_bound: nu must exceed d + 1");

  FilterBound out;
  const double K = budget.K;
  out.kappa = std::pow(K, 1.0 / d);
  out.C_kappa = 1.0 + budget.C_rho * out.kappa;
  const double growth = std::exp(budget.C * out.C_kappa * budget.T);
  const double kappa = out.kappa;

  out.galerkin_term = budget.C_nuT / std::pow(K, 2.0 * (budget.nu - d - 1.0) / d);
  out.n_term = budget.C *
               (out.C_kappa * budget.delta +
                (kappa * kappa + budget.C_rho * kappa * kappa * kappa) * budget.delta * budget.delta) /
               budget.n * growth;
  out.N_term = std::pow(budget.C * out.C_kappa, budget.N + 1) * std::pow(budget.delta, budget.N) /
               factorial_real(budget.N + 1) * growth;
  out.total = out.galerkin_term + out.n_term + out.N_term;

  if (budget.nu > d + 1.0 + budget.w) {
    out.has_functional = true;
    out.functional_galerkin_term =
        budget.C_nuTw * budget.C_f / std::pow(K, 2.0 * (budget.nu - budget.w - d - 1.0) / d);
    out.functional_n_term = budget.C_f * out.n_term;
    out.functional_N_term = budget.C_f * out.N_term;
    out.functional_total = out.functional_galerkin_term + out.functional_n_term + out.functional_N_term;
  }
  return out;
}

}  // namespace zakai
