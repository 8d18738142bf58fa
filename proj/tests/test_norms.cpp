#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "prarefact/error.hpp"
#include "prarefact/norms.hpp"

using namespace prarefact;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_SUITE("norms") {
  TEST_CASE("constant fields") {
    const auto g = GridSpec::torus(2, 16);
    const Field c(g, -0.75);
    for (double q : {1.0, 2.0, 3.5, kInf}) CHECK(lq_norm(c, q) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(mean(c) == doctest::Approx(-0.75).epsilon(1e-15));
    CHECK(gradient_norm(c, 2.0) == 0.0);
    CHECK_THROWS_AS(lq_norm(c, 0.5), DomainError);
  }

  TEST_CASE("sine wave norms") {
    const auto g = GridSpec::torus(1, 1024);
    const double a = 0.1;
    const Field s = Field::from_function(g, [&](std::span<const double> x) { return a * std::sin(kTwoPi * x[0]); });
    CHECK(lq_norm(s, 2.0) == doctest::Approx(a / std::sqrt(2.0)).epsilon(1e-13));
    CHECK(lq_norm(s, 1.0) == doctest::Approx(2.0 * a / std::numbers::pi).epsilon(1e-5));
    CHECK(lq_norm(s, kInf) == doctest::Approx(a).epsilon(1e-5));
    // face differences of a sine: amplitude 2 sin(pi h)/h
    const double h = 1.0 / 1024, amp = a * 2.0 * std::sin(std::numbers::pi * h) / h;
    CHECK(gradient_norm(s, 2.0) == doctest::Approx(amp / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(gradient_norm(s, kInf) == doctest::Approx(amp).epsilon(1e-5));
  }

  TEST_CASE("gradient norm of a plane wave in 2D") {
    const auto g = GridSpec::torus(2, 64);
    const Field s = Field::from_function(g, [](std::span<const double> x) { return std::sin(kTwoPi * x[1]); });
    CHECK(gradient_norm(s, 2.0) == doctest::Approx(kTwoPi / std::sqrt(2.0)).epsilon(2e-3));
  }

  TEST_CASE("channel norms use the physical cell volume") {
    const std::array<int, 1> cells{40};
    const auto ch = GridSpec::channel(1, cells, 5.0);
    const Field one(ch, 1.0);
    CHECK(lq_norm(one, 1.0) == doctest::Approx(10.0).epsilon(1e-14));
    CHECK(lq_norm(one, 2.0) == doctest::Approx(std::sqrt(10.0)).epsilon(1e-14));
    const Field ramp = Field::from_function(ch, [](std::span<const double> x) { return 2.0 * x[0]; });
    // 39 interior faces carry slope 2 over a length dx each; the two boundary faces see
    // copied boundary cells (slope 0) and carry half a cell each
    CHECK(gradient_norm(ramp, 1.0) == doctest::Approx(39 * 0.25 * 2.0).epsilon(1e-12));
  }
}
