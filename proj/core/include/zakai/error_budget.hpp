#pragma once

namespace zakai {

/// Inputs of the theoretical error bounds. The constants C, C_nuT, C_nuTw and
/// the chaos-side eps_B are existential in the theory; callers supply them,
/// which makes every budget a diagnostic rather than a guarantee.
struct ErrorBudget {
  double delta = 0.0;
  int N = 0;
  int n = 1;
  int K = 1;
  int r = 1;
  int d = 1;
  double nu = 0.0;
  double w = 0.0;
  double C_rho = 0.0;  // max_{i,l} sup_x |rho_il(x)|^2
  double C = 0.0;
  double C_nuT = 0.0;   // Galerkin constant of the density bound
  double C_nuTw = 0.0;  // Galerkin constant of the functional bound
  double C_f = 0.0;     // int (1 + |x|^2)^{-2w} |f|^2 dx
  double T = 0.0;
  double eps_B = 0.0;  // zero when the B_l commute, e.g. r = 1
  double initial_norm_sq = 1.0;  // E|U_0|^2
};

/// One-window chaos truncation bound
///   e^{C delta} ((C delta)^{N+1}/(N+1)! + (delta^2/n)(eps_B + C delta)) E|U_0|^2.
struct ChaosBound {
  double N_term = 0.0;
  double n_term = 0.0;
  double total = 0.0;
};

ChaosBound chaos_error_bound(const ErrorBudget& budget);

/// Multi-step filter bounds for the density and, when nu > d + 1 + w, for
/// the unnormalized functional. With kappa = K^{1/d} and C_kappa = 1 + C_rho kappa:
///   galerkin = C_nuT / K^{2(nu - d - 1)/d}
///   n_term   = C (C_kappa delta + (kappa^2 + C_rho kappa^3) delta^2) / n * e^{C C_kappa T}
///   N_term   = (C C_kappa)^{N+1} delta^N / (N+1)! * e^{C C_kappa T}
/// The functional bound uses C_nuTw C_f / K^{2(nu - w - d - 1)/d} and scales
/// the other two terms by C_f.
struct FilterBound {
  double kappa = 0.0;
  double C_kappa = 0.0;
  double galerkin_term = 0.0;
  double n_term = 0.0;
  double N_term = 0.0;
  double total = 0.0;
  bool has_functional = false;
  double functional_galerkin_term = 0.0;
  double functional_n_term = 0.0;
  double functional_N_term = 0.0;
  double functional_total = 0.0;
};

/// Throws ValidationError when nu <= d + 1 or an input is negative.
FilterBound filter_error_bound(const ErrorBudget& budget);

}  // namespace zakai
