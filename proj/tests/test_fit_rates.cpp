#include <cmath>
#include <random>

#include "doctest.h"
#include "prarefact/error.hpp"
#include "prarefact/fit.hpp"
#include "prarefact/rates.hpp"

using namespace prarefact;
using fit::DecaySeries;

namespace {

DecaySeries sampled(double amp, double expo, int n, double t_max) {
  DecaySeries s{"x", {}, {}};
  for (int i = 0; i < n; ++i) {
    const double t = t_max * (i + 1) / n;
    s.push(t, amp * std::pow(1.0 + t, expo));
  }
  return s;
}

}  // namespace

TEST_SUITE("fit") {
  TEST_CASE("exact power laws") {
    const auto s = sampled(1.0, -2.0, 20, 100.0);
    const auto f = fit::fit_power_law(s, 0.0, 100.0);
    CHECK(std::fabs(f.exponent + 2.0) <= 1e-10);
    CHECK(f.rms_residual <= 1e-10);
    CHECK(f.samples == 20);
    CHECK(f.window_lo == doctest::Approx(5.0));
    CHECK(f.window_hi == doctest::Approx(100.0));
  }

  TEST_CASE("constant series has zero slope") {
    const auto f = fit::fit_power_law(sampled(0.37, 0.0, 12, 10.0), 0.0, 10.0);
    CHECK(std::fabs(f.exponent) <= 1e-12);
    CHECK(f.log_prefactor == doctest::Approx(std::log(0.37)).epsilon(1e-12));
  }

  TEST_CASE("seeded noise") {
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> xi(-1.0, 1.0);
    DecaySeries s{"noisy", {}, {}};
    for (int i = 1; i <= 50; ++i) {
      const double t = 4.0 * i;
      s.push(t, 3.0 * std::pow(1.0 + t, -1.5) * (1.0 + 0.01 * xi(gen)));
    }
    CHECK(std::fabs(fit::fit_power_law(s, 0.0, 200.0).exponent + 1.5) <= 0.02);
  }

  TEST_CASE("scaling shifts only the prefactor") {
    const auto base = sampled(1.0, -1.3, 30, 50.0);
    auto scaled = base;
    for (double& v : scaled.values) v *= 7.5;
    const auto a = fit::fit_power_law(base, 0.0, 50.0), b = fit::fit_power_law(scaled, 0.0, 50.0);
    CHECK(std::fabs(a.exponent - b.exponent) <= 1e-12);
    CHECK(b.log_prefactor - a.log_prefactor == doctest::Approx(std::log(7.5)).epsilon(1e-12));
  }

  TEST_CASE("precondition errors") {
    CHECK_THROWS_AS(fit::fit_power_law(sampled(1.0, -1.0, 7, 10.0), 0.0, 10.0), InsufficientData);
    CHECK_THROWS_AS(fit::fit_power_law(sampled(1.0, -1.0, 20, 10.0), 20.0, 30.0), InsufficientData);
    auto s = sampled(1.0, -1.0, 10, 10.0);
    s.values[4] = 0.0;
    CHECK_THROWS_AS(fit::fit_power_law(s, 0.0, 10.0), NonpositiveValue);
    s.times[5] = s.times[4];
    CHECK_THROWS_AS(s.validate(), DomainError);
  }
}

TEST_SUITE("rates") {
  TEST_CASE("published exponents") {
    const auto c = RateCard::make(1.5, 1);
    CHECK(c.rate_solution() == doctest::Approx(-2.0));
    CHECK(c.rate_gradient_mplus1() == doctest::Approx(-1.6));
    CHECK(c.rate_rarefaction(6.0) == doctest::Approx(-4.0 / 33.0));
    CHECK(c.rate_rarefaction(2.0) == 0.0);
    CHECK(c.rate_residual() == doctest::Approx(-1.6));
    const auto d = RateCard::make(1.25, 1);
    CHECK(d.rate_solution() == doctest::Approx(-4.0));
    CHECK(d.rate_gradient_mplus1() == doctest::Approx(-32.0 / 9.0));
    CHECK_THROWS_AS(RateCard::make(1.0, 1), DomainError);
  }

  TEST_CASE("alpha_q and gamma_q") {
    const auto c = RateCard::make(2.5, 3);
    const double q = 5.0;
    const double want = 3.5 * (12.0 + 1.5) / (6.5 * (1.5 - 3.0));
    CHECK(c.alpha_q(q) == doctest::Approx(want));
    CHECK(c.gamma_q(q) == doctest::Approx(std::min(1.0, want)));
  }

  TEST_CASE("rates are non-positive on the admissible ranges") {
    for (double m = 1.05; m <= 3.0; m += 0.05) {
      const auto c = RateCard::make(m, 1);
      CHECK(c.rate_solution() <= 0.0);
      CHECK(c.rate_gradient_mplus1() <= 0.0);
      for (double r = 2.0; r <= 20.0; r += 0.5) CHECK(c.rate_rarefaction(r) <= 0.0);
    }
  }
}
