#pragma once

namespace qmix {

// Tolerances shared by every module. The defaults are the values the
// library's invariants are stated against; tests and the CLI may swap in a
// different policy before doing any work.
struct NumericPolicy {
  double row_sum_tol = 1e-12;
  double stationarity_tol = 1e-10;
  double reversibility_tol = 1e-10;
  double detailed_balance_tol = 1e-12;
  double symmetry_tol = 1e-13;
  // |lambda_top - 1| allowed before a discriminant is treated as non-reversible.
  double top_eigenvalue_tol = 1e-10;
  // Largest interpolation parameter accepted where ergodicity of P(s) is needed.
  double ergodic_s_cap = 1.0 - 1e-9;
  // lambda may exceed 1 by this much before build_effective refuses it.
  double eigenvalue_clamp_tol = 1e-10;
  // Hitting-time denominators 1 - lambda' below this are rejected.
  double hitting_singular_tol = 1e-12;
  // Relative degeneracy tolerance for grouping eigenvalues.
  double relative_degeneracy_tol = 1e-9;
  double min_postselect_prob = 1e-15;
};

const NumericPolicy& numeric_policy() noexcept;

// Not synchronised: call before spawning worker threads.
void set_numeric_policy(const NumericPolicy& policy) noexcept;

}  // namespace qmix
