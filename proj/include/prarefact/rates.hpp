#pragma once

namespace prarefact {

/// Theoretical decay exponents (slopes against log(1+t)); all are <= 0 on their admissible ranges.
struct RateCard {
  double m;
  int dim;

  /// Throws DomainError unless m > 1 and 1 <= dim <= 3.
  static RateCard make(double m, int dim);

  /// ||u - mean||_q for q in [2, inf].
  double rate_solution() const;
  /// ||grad u||_{m+1}.
  double rate_gradient_mplus1() const;
  double alpha_q(double q) const;
  double gamma_q(double q) const;
  /// ||grad u||_q, q > m+1: the gamma_q-weighted branch and the plain branch. Which
  /// parameter range each branch covers is ambiguous, so both are reported.
  double rate_gradient_gamma_branch(double q) const;
  double rate_gradient_plain_branch() const;
  /// ||u - approximate wave||_r, r >= 2.
  double rate_rarefaction(double r) const;
  /// ||J_1||_inf in the limit of a vanishing slack parameter.
  double rate_residual() const { return rate_gradient_mplus1(); }
};

}  // namespace prarefact
