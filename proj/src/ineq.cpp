#include "prarefact/ineq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "prarefact/error.hpp"

namespace prarefact::ineq {

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// |v|^e with 0^0 := 1 (std::pow already follows that convention).
double power(double r, double e) { return std::pow(r, e); }

void check_profile_domain(double alpha, double beta, double q) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0,1]");
  if (!(beta >= -1.0 && beta <= 1.0)) throw DomainError("beta must lie in [-1,1]");
  if (!(q >= 1.0)) throw DomainError("q must be >= 1");
}

// |a-b|^2 / |a|^2 written without cancellation.
double gap_squared(double alpha, double beta) {
  const double s = 1.0 - alpha;
  return s * s + 2.0 * alpha * (1.0 - beta);
}

// (|a|^{q-1}a - |b|^{q-1}b).(a-b) / |a|^{q+1}, also cancellation-free.
double lower_numerator(double alpha, double beta, double q) {
  const double aq = power(alpha, q);
  return (1.0 - alpha) * (1.0 - aq) + (alpha + aq) * (1.0 - beta);
}

}  // namespace

VecPair VecPair::make(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || a.size() != b.size()) throw DomainError("vector pair needs equal nonzero dimension");
  VecPair p;
  p.a.assign(a.begin(), a.end());
  p.b.assign(b.begin(), b.end());
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 && nb == 0.0) {
    p.degenerate = true;
    p.alpha = 0.0;
    p.beta = 1.0;
    return p;
  }
  p.alpha = std::min(na, nb) / std::max(na, nb);
  if (na == 0.0 || nb == 0.0) {
    p.beta = 1.0;  // angle undefined; any value reconstructs a.b = 0
  } else {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
    p.beta = std::clamp(dot / (na * nb), -1.0, 1.0);
  }
  return p;
}

double check_ab2(const VecPair& pair, double p) {
  if (!(p >= 1.0 && p <= 2.0)) throw DomainError("check_ab2: p must lie in [1,2]");
  const auto& a = pair.a;
  const auto& b = pair.b;
  const double na = norm(a);
  const double nb = norm(b);
  const double wa = power(na, p - 1.0);
  const double wb = power(nb, p - 1.0);
  double lhs2 = 0.0;
  double diff2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = wa * a[i] - wb * b[i];
    lhs2 += d * d;
    diff2 += (a[i] - b[i]) * (a[i] - b[i]);
  }
  if (diff2 == 0.0) return 0.0;
  return std::sqrt(lhs2) / ((wa + wb) * std::sqrt(diff2));
}

double check_ab1_ratio(const VecPair& pair, double q) {
  if (!(q >= 1.0)) throw DomainError("check_ab1_ratio: q must be >= 1");
  const auto& a = pair.a;
  const auto& b = pair.b;
  const double na = norm(a);
  const double nb = norm(b);
  const double wa = power(na, q - 1.0);
  const double wb = power(nb, q - 1.0);
  double num = 0.0;
  double diff2 = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    num += (wa * a[i] - wb * b[i]) * d;
    diff2 += d * d;
  }
  if (diff2 == 0.0) throw DegenerateInput("check_ab1_ratio: a == b");
  const double gap = std::sqrt(diff2);
  return num / ((wa + wb + power(gap, q - 1.0)) * diff2);
}

double profile_f(double alpha, double beta, double q) {
  check_profile_domain(alpha, beta, q);
  if (alpha == 1.0 && beta == 1.0) throw DomainError("f is 0/0 at (alpha,beta) = (1,1)");
  return lower_numerator(alpha, beta, q) / power(gap_squared(alpha, beta), 0.5 * (q + 1.0));
}

double profile_g(double alpha, double beta, double q) {
  check_profile_domain(alpha, beta, q);
  return power(gap_squared(alpha, beta), 0.5 * (q - 1.0)) / (1.0 + power(alpha, q - 1.0));
}

double profile_h(double alpha, double q) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in [0,1]");
  if (!(q >= 1.0)) throw DomainError("q must be >= 1");
  const double aq = power(alpha, q);
  return power(alpha, q - 1.0) + (q - 1.0) * alpha + (q - 1.0) * aq + alpha * alpha - q * aq * alpha;
}

Profiles appendix_profiles(double alpha, double beta, double q) {
  return {profile_f(alpha, beta, q), profile_g(alpha, beta, q), profile_h(alpha, q)};
}

double ab1_ratio_profile(double alpha, double beta, double q) {
  check_profile_domain(alpha, beta, q);
  if (alpha == 1.0 && beta == 1.0) throw DomainError("ratio undefined at a == b");
  const double d2 = gap_squared(alpha, beta);
  const double bracket = 1.0 + power(alpha, q - 1.0) + power(d2, 0.5 * (q - 1.0));
  return lower_numerator(alpha, beta, q) / (bracket * d2);
}

ConstantEstimate estimate_cq(double q, std::size_t grid_density) {
  if (grid_density < 16) throw DomainError("estimate_cq: grid_density must be >= 16");
  if (!(q >= 1.0)) throw DomainError("estimate_cq: q must be >= 1");

  ConstantEstimate best;
  best.q = q;
  best.c_hat = std::numeric_limits<double>::infinity();
  auto visit = [&](double alpha, double beta) {
    if (alpha == 1.0 && beta == 1.0) return;
    const double r = ab1_ratio_profile(alpha, beta, q);
    ++best.samples;
    if (r < best.c_hat) {
      best.c_hat = r;
      best.argmin_alpha = alpha;
      best.argmin_beta = beta;
    }
  };

  const auto n = grid_density;
  const auto dn = static_cast<double>(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double alpha = static_cast<double>(i) / dn;
    for (std::size_t j = 0; j <= n; ++j) visit(alpha, -1.0 + 2.0 * static_cast<double>(j) / dn);
  }
  const std::size_t fine = 16 * n;
  for (std::size_t i = 1; i <= fine; ++i) {
    const double alpha = static_cast<double>(i) / static_cast<double>(fine);
    visit(alpha, -1.0);
    visit(alpha, 1.0);
  }
  return best;
}

InvariantReport validate_invariants(double q, std::size_t grid_density, std::size_t samples,
                                    std::uint64_t seed) {
  InvariantReport rep;
  rep.estimate = estimate_cq(q, grid_density);
  rep.samples = samples;

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dim_dist(1, 5);
  std::uniform_real_distribution<double> coord(-10.0, 10.0);
  std::uniform_real_distribution<double> p_dist(1.0, 2.0);
  std::vector<double> a(5), b(5);
  rep.max_ab2_ratio = 0.0;
  rep.min_ab1_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < samples; ++s) {
    const auto d = static_cast<std::size_t>(dim_dist(rng));
    for (std::size_t i = 0; i < d; ++i) {
      a[i] = coord(rng);
      b[i] = coord(rng);
    }
    const double p = p_dist(rng);
    const auto pair = VecPair::make(std::span(a.data(), d), std::span(b.data(), d));
    rep.max_ab2_ratio = std::max(rep.max_ab2_ratio, check_ab2(pair, p));

    double diff2 = 0.0;
    for (std::size_t i = 0; i < d; ++i) diff2 += (a[i] - b[i]) * (a[i] - b[i]);
    const double scale = std::max(norm(std::span(a.data(), d)), 1.0);
    if (std::sqrt(diff2) < 1e-14 * scale) continue;
    rep.min_ab1_ratio = std::min(rep.min_ab1_ratio, check_ab1_ratio(pair, q));
  }
  rep.ab2_ok = rep.max_ab2_ratio <= 1.0 + 1e-12;
  rep.ab1_ok = samples == 0 || rep.min_ab1_ratio >= rep.estimate.c_hat - 1e-9;

  rep.max_h_excess = -std::numeric_limits<double>::infinity();
  for (int k = 1; k < 1000; ++k) {
    rep.max_h_excess = std::max(rep.max_h_excess, profile_h(k * 1e-3, q) - q);
  }
  // h is identically q when q == 1; the strict inequality only holds for q > 1.
  rep.h_ok = q == 1.0 ? rep.max_h_excess <= 1e-15 : rep.max_h_excess < 0.0;

  const auto n = grid_density;
  const auto dn = static_cast<double>(n);
  rep.max_f_monotone_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i <= n; ++i) {
    const double alpha = static_cast<double>(i) / dn;
    const double f_lo = profile_f(alpha, -1.0, q);
    const double f_hi = alpha < 1.0 ? profile_f(alpha, 1.0, q) : f_lo;
    const double floor = std::min(f_lo, f_hi);
    double g_prev = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j <= n; ++j) {
      const double beta = -1.0 + 2.0 * static_cast<double>(j) / dn;
      if (!(alpha == 1.0 && beta == 1.0)) {
        rep.max_f_monotone_gap = std::max(rep.max_f_monotone_gap, floor - profile_f(alpha, beta, q));
      }
      const double g = profile_g(alpha, beta, q);
      if (q > 1.0 && !(g < g_prev)) ++rep.g_monotone_failures;
      g_prev = g;
    }
  }
  rep.f_ok = rep.max_f_monotone_gap <= 1e-12;
  rep.g_ok = rep.g_monotone_failures == 0;
  return rep;
}

}  // namespace prarefact::ineq
