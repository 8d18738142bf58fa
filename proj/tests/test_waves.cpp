#include <array>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "prarefact/error.hpp"
#include "prarefact/fit.hpp"
#include "prarefact/norms.hpp"
#include "prarefact/waves.hpp"

using namespace prarefact;
using namespace prarefact::waves;

TEST_SUITE("waves") {
  TEST_CASE("lambda inverse") {
    const auto b = FluxModel::burgers();
    CHECK(lambda_inverse(b, 0.3, -1.0, 1.0) == doctest::Approx(0.3).epsilon(1e-15));
    const auto q = FluxModel::quartic();
    for (double s : {-1.9, -0.5, 0.0, 0.4, 1.99}) {
      const double u = lambda_inverse(q, s, -1.0, 1.0);
      CHECK(std::fabs(q.lambda(u) - s) <= 1e-12);
    }
    CHECK(lambda_inverse(q, 2.0, -1.0, 1.0) == 1.0);
    CHECK_THROWS_AS(lambda_inverse(q, 2.1, -1.0, 1.0), OutOfRange);
    CHECK_THROWS_AS(lambda_inverse(b, -1.5, -1.0, 1.0), OutOfRange);
  }

  TEST_CASE("centred rarefaction") {
    const auto b = FluxModel::burgers();
    const auto pr = WavePair::make(b, -0.5, 1.0);
    CHECK(rarefaction_profile(b, pr, 2.0, -3.0) == -0.5);
    CHECK(rarefaction_profile(b, pr, 2.0, 3.0) == 1.0);
    CHECK(rarefaction_profile(b, pr, 2.0, 0.5) == doctest::Approx(0.25));
    CHECK_THROWS_AS(rarefaction_profile(b, pr, 0.0, 0.5), DomainError);
    CHECK_THROWS_AS(WavePair::make(b, 1.0, 1.0), DomainError);
  }

  TEST_CASE("tanh and the initial profile") {
    for (double x : {-30.0, -2.0, -0.1, 0.0, 0.7, 5.0, 39.0}) CHECK(tanh_exact(x) == doctest::Approx(std::tanh(x)).epsilon(1e-15));
    CHECK(tanh_exact(41.0) == 1.0);
    CHECK(tanh_exact(-100.0) == -1.0);
    const auto b = FluxModel::burgers();
    const auto pr = WavePair::make(b, 0.0, 1.0);
    CHECK(viscous_rarefaction_init(b, pr, 0.8) == doctest::Approx(0.5 + 0.5 * std::tanh(0.8)).epsilon(1e-15));
  }

  TEST_CASE("characteristic solve matches an independent bisection") {
    // u_- = -1, u_+ = 1, Burgers: the initial profile is tanh, so w = tanh(x1 - w t)
    const auto b = FluxModel::burgers();
    const auto pr = WavePair::make(b, -1.0, 1.0);
    const double w = oracle::bisect([](double v) { return v - std::tanh(1.0 - v); }, -1.0, 1.0);
    CHECK(std::fabs(viscous_rarefaction_eval(b, pr, 1.0, 1.0).value - w) <= 1e-14);
    for (double t : {0.5, 3.0, 40.0}) {
      for (double x : {-50.0, -2.0, 0.3, 7.0}) {
        const double want = oracle::bisect([&](double v) { return v - std::tanh(x - v * t); }, -1.0, 1.0);
        CHECK(std::fabs(viscous_rarefaction_eval(b, pr, t, x).value - want) <= 1e-13);
      }
    }
  }

  TEST_CASE("slope from implicit differentiation matches finite differences") {
    for (const auto& flux : {FluxModel::burgers(), FluxModel::quartic()}) {
      const auto pr = WavePair::make(flux, -0.3, 0.8);
      for (double t : {0.0, 1.0, 10.0}) {
        for (double x : {-4.0, 0.0, 1.5, 6.0}) {
          const double h = 1e-5;
          const double fd = (viscous_rarefaction_eval(flux, pr, t, x + h).value -
                             viscous_rarefaction_eval(flux, pr, t, x - h).value) / (2 * h);
          CHECK(viscous_rarefaction_eval(flux, pr, t, x).slope == doctest::Approx(fd).epsilon(1e-6).scale(1e-3));
        }
      }
    }
  }

  TEST_CASE("slope is positive and below the envelope") {
    const auto flux = FluxModel::quartic();
    const auto pr = WavePair::make(flux, -0.5, 0.5);
    for (int i = 1; i <= 20; ++i) {
      const double t = 0.5 * i;
      for (int j = 0; j <= 40; ++j) {
        const double x = -20.0 + j;
        const double s = viscous_rarefaction_eval(flux, pr, t, x).slope;
        CHECK(s >= 0.0);
        CHECK(s <= std::min(1.0 / (flux.convexity_floor() * t), pr.u_plus - pr.u_minus) + 1e-12);
      }
    }
    CHECK(viscous_rarefaction_eval(flux, pr, 5.0, 0.0).slope > 0.0);
  }

  TEST_CASE("viscous profile stays strictly inside and approaches the centred wave") {
    const auto b = FluxModel::burgers();
    for (auto [um, up] : {std::array{0.0, 1.0}, std::array{-1.0, 1.0}}) {
      const auto pr = WavePair::make(b, um, up);
      fit::DecaySeries gap{"gap", {}, {}};
      for (int k = 0; k < 15; ++k) {
        const double t = std::pow(100.0, k / 14.0);
        double worst = 0.0;
        for (int j = 0; j <= 2000; ++j) {
          const double x = um * t - 20.0 + (up * t - um * t + 40.0) * j / 2000.0;
          const double w = viscous_rarefaction_eval(b, pr, t, x).value;
          // strict inside the fan; far tails saturate to the end states in floating point
          const bool near = x > um * t - 8.0 && x < up * t + 8.0;
          CHECK((near ? w > um : w >= um));
          CHECK((near ? w < up : w <= up));
          worst = std::max(worst, std::fabs(w - rarefaction_profile(b, pr, t, x)));
        }
        if (!gap.values.empty()) CHECK(worst < gap.values.back());
        gap.push(t, worst);
      }
      // the gap behaves like log(t)/t, so any fixed epsilon > 0 is eventually met; 0.3 covers t in [1,100]
      CHECK(fit::fit_power_law(gap, 1.0, 100.0).exponent <= -1.0 + 0.3);
    }
  }

  TEST_CASE("weight is monotone in [0,1]") {
    const auto b = FluxModel::burgers();
    const auto pr = WavePair::make(b, 0.0, 1.0);
    double prev = -1.0;
    for (int j = 0; j <= 200; ++j) {
      const double g = weight_g(b, pr, 3.0, -20.0 + 0.2 * j);
      CHECK(g >= 0.0);
      CHECK(g <= 1.0);
      CHECK(g >= prev);
      prev = g;
    }
  }

  TEST_CASE("tiling a torus field onto an aligned channel") {
    const auto t = GridSpec::torus(1, 16);
    const Field f = Field::from_function(t, [](std::span<const double> x) { return std::sin(2 * std::numbers::pi * x[0]); });
    const std::array<int, 1> cells{64};
    const auto ch = GridSpec::channel(1, cells, 2.0);
    const Field tiled = tile_periodic(f, ch);
    for (int i = 0; i < 64; ++i) {
      CHECK(tiled[static_cast<std::size_t>(i)] ==
            doctest::Approx(std::sin(2 * std::numbers::pi * ch.center(0, i))).scale(1.0).epsilon(1e-12));
    }
    const std::array<int, 1> odd{72};
    CHECK_THROWS_AS(tile_periodic(f, GridSpec::channel(1, odd, 2.0)), GeometryError);
  }

  TEST_CASE("approximate wave blends the far fields") {
    const auto g = GridSpec::torus(1, 8);
    const Field l(g, 1.0), r(g, 3.0), zero(g, 0.0), one(g, 1.0), half(g, 0.5);
    CHECK(approximate_wave(l, r, zero).values == l.values);
    CHECK(approximate_wave(l, r, one).values == r.values);
    CHECK(approximate_wave(l, r, half)[0] == 2.0);
    CHECK(approximate_wave_gap(l, r, half)[0] == 2.0);
    CHECK_THROWS_AS(approximate_wave(l, Field(GridSpec::torus(1, 16), 0.0), half), GridMismatch);
    CHECK_THROWS_AS(approximate_wave(l, r, Field(g, 1.5)), DomainError);
  }

  TEST_CASE("perturbations are zero-mean on the grid") {
    PerturbationSpec p;
    p.modes.push_back({{1, 0, 0}, 0.1, 0.0});
    p.modes.push_back({{3, 0, 0}, 0.05, 0.7});
    p.validate(1);
    const auto g = GridSpec::torus(1, 1024);
    const Field w = Field::from_function(g, [&](std::span<const double> x) { return perturbation_eval(p, x); });
    CHECK(std::fabs(mean(w)) <= 1e-15);
    PerturbationSpec bad;
    bad.modes.push_back({{0, 0, 0}, 0.1, 0.0});
    CHECK_THROWS_AS(bad.validate(1), DomainError);
    PerturbationSpec beyond;
    beyond.modes.push_back({{1, 2, 0}, 0.1, 0.0});
    CHECK_THROWS_AS(beyond.validate(1), DomainError);
    CHECK_NOTHROW(beyond.validate(2));
  }
}
