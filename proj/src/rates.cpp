#include "prarefact/rates.hpp"

#include <algorithm>
#include <cmath>

#include "prarefact/error.hpp"

namespace prarefact {

RateCard RateCard::make(double m, int dim) {
  if (!(m > 1.0)) throw DomainError("m must exceed 1");
  if (dim < 1 || dim > 3) throw DomainError("dimension must be 1, 2 or 3");
  return {m, dim};
}

double RateCard::rate_solution() const { return -1.0 / (m - 1.0); }

double RateCard::rate_gradient_mplus1() const { return -2.0 / ((m - 1.0) * (m + 1.0)); }

double RateCard::alpha_q(double q) const {
  const double n = dim;
  return (m + 1.0) * (2.0 * (q + 1.0) + n * (m - 2.0)) / ((m + q - 1.0) * (n * (m - 2.0) - 2.0 * m + 2.0));
}

double RateCard::gamma_q(double q) const { return std::min(1.0, alpha_q(q)); }

double RateCard::rate_gradient_gamma_branch(double q) const { return gamma_q(q) * rate_gradient_mplus1(); }

double RateCard::rate_gradient_plain_branch() const { return rate_gradient_mplus1(); }

double RateCard::rate_rarefaction(double r) const {
  if (std::isinf(r)) return -1.0 / (3.0 * m + 1.0);
  return -(r - 2.0) / (r * (3.0 * m + 1.0));
}

}  // namespace prarefact
