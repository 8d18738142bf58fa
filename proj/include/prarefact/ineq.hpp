#pragma once

// Vector inequalities for the p-Laplacian nonlinearity |a|^{p-1} a, together with
// the scalar profiles that reduce them to two variables:
//   alpha = min(|a|,|b|) / max(|a|,|b|),  beta = cos(angle between a and b).
//
//   (upper)  ||a|^{p-1}a - |b|^{p-1}b| <= (|a|^{p-1} + |b|^{p-1}) |a-b|,        1 <= p <= 2
//   (lower)  (|a|^{q-1}a - |b|^{q-1}b).(a-b)
//                >= c(q) (|a|^{q-1} + |b|^{q-1} + |a-b|^{q-1}) |a-b|^2,          q >= 1

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace prarefact::ineq {

struct VecPair {
  std::vector<double> a;
  std::vector<double> b;
  double alpha = 0.0;  ///< min(|a|,|b|)/max(|a|,|b|), in [0,1]
  double beta = 1.0;   ///< cosine of the included angle, in [-1,1]
  bool degenerate = false;  ///< both vectors vanish

  /// Throws DomainError on empty or mismatched dimensions.
  static VecPair make(std::span<const double> a, std::span<const double> b);
};

/// Ratio lhs/rhs of the upper inequality; 0 when a == b. Throws DomainError unless 1 <= p <= 2.
double check_ab2(const VecPair& pair, double p);

/// Ratio of the lower inequality's left side over its bracket, i.e. the best c(q) for this pair.
/// Throws DegenerateInput when a == b, DomainError when q < 1.
double check_ab1_ratio(const VecPair& pair, double q);

struct Profiles {
  double f;  ///< (1 - a b - a^q b + a^{q+1}) / (1 + a^2 - 2 a b)^{(q+1)/2}
  double g;  ///< (1 + a^2 - 2 a b)^{(q-1)/2} / (1 + a^{q-1})
  double h;  ///< a^{q-1} + (q-1) a + (q-1) a^q + a^2 - q a^{q+1}
};

/// Throws DomainError for alpha outside (0,1], beta outside [-1,1], q < 1, or (alpha,beta) = (1,1).
Profiles appendix_profiles(double alpha, double beta, double q);

double profile_f(double alpha, double beta, double q);
double profile_g(double alpha, double beta, double q);
double profile_h(double alpha, double q);

/// check_ab1_ratio expressed through (alpha, beta): f g / (1 + g).
/// Evaluated in cancellation-free form; equals 1/3 to round-off at q = 1.
double ab1_ratio_profile(double alpha, double beta, double q);

struct ConstantEstimate {
  double q = 1.0;
  double c_hat = 0.0;
  double argmin_alpha = 1.0;
  double argmin_beta = -1.0;
  std::size_t samples = 0;
};

/// Deterministic grid search for the infimum of ab1_ratio_profile over (0,1] x [-1,1].
/// The boundary lines beta = +-1 are scanned at 16x the interior density.
/// Throws DomainError for grid_density < 16 or q < 1.
ConstantEstimate estimate_cq(double q, std::size_t grid_density);

/// Outcome of the randomized and grid-based invariant sweep behind `prarefact ineq`.
struct InvariantReport {
  ConstantEstimate estimate;
  std::size_t samples = 0;
  double max_ab2_ratio = 0.0;         ///< must stay <= 1 + 1e-12
  double min_ab1_ratio = 0.0;         ///< must stay >= c_hat - 1e-9
  double max_h_excess = 0.0;          ///< max over alpha in (0,1) of h(alpha) - q; must be < 0
  double max_f_monotone_gap = 0.0;    ///< max of min(f(.,-1), f(.,1)) - f; must be <= 1e-12
  std::size_t g_monotone_failures = 0;
  bool ab2_ok = false;
  bool ab1_ok = false;
  bool h_ok = false;
  bool f_ok = false;
  bool g_ok = false;
  bool all_ok() const { return ab2_ok && ab1_ok && h_ok && f_ok && g_ok; }
};

/// Runs every inequality invariant for the lower-bound exponent q. The upper inequality
/// draws its own exponent p uniformly in [1,2] per sample. Samples are pairs in
/// [-10,10]^d with d uniform in 1..5, drawn from a generator seeded with `seed`.
InvariantReport validate_invariants(double q, std::size_t grid_density, std::size_t samples,
                                    std::uint64_t seed);

}  // namespace prarefact::ineq
