#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "prarefact/error.hpp"
#include "prarefact/flux.hpp"
#include "prarefact/grid.hpp"
#include "prarefact/parallel.hpp"

using namespace prarefact;

TEST_SUITE("flux_grid") {
  TEST_CASE("flux models and derivatives") {
    const auto b = FluxModel::burgers();
    const auto q = FluxModel::quartic();
    for (double u : {-2.0, -0.3, 0.0, 0.7, 1.5}) {
      CHECK(b.value(0, u) == doctest::Approx(0.5 * u * u));
      CHECK(b.speed(1, u) == doctest::Approx(u));
      CHECK(q.value(0, u) == doctest::Approx(0.5 * u * u + 0.25 * u * u * u * u));
      CHECK(q.value(1, u) == doctest::Approx(0.5 * u * u));
      const double h = 1e-6;
      CHECK(q.speed(0, u) == doctest::Approx((q.value(0, u + h) - q.value(0, u - h)) / (2 * h)).epsilon(1e-7));
      CHECK(q.second(0, u) == doctest::Approx((q.speed(0, u + h) - q.speed(0, u - h)) / (2 * h)).epsilon(1e-7));
      CHECK(q.second(0, u) >= q.convexity_floor());
    }
    CHECK(b.value(0, 0.0) == 0.0);
    CHECK(q.speed(0, 0.0) == 0.0);
    CHECK(FluxModel::from_name("quartic").kind() == FluxModel::Kind::quartic);
    CHECK_THROWS_AS(FluxModel::from_name("cubic"), DomainError);
    CHECK(q.max_speed(0, -1.0, 0.5) == doctest::Approx(2.0));
  }

  TEST_CASE("grid geometry and indexing") {
    const std::array<int, 2> cells{16, 8};
    const auto t = GridSpec::torus(2, cells);
    CHECK(t.size() == 128);
    CHECK(t.dx(0) == doctest::Approx(1.0 / 16));
    CHECK(t.cell_volume() == doctest::Approx(1.0 / 128));
    CHECK(t.center(1, 0) == doctest::Approx(1.0 / 16));
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(t.flatten(t.unflatten(k)) == k);
    CHECK(t.stride(0) == 8);
    CHECK(t.slab_size() == 8);

    const std::array<int, 1> c1{64};
    const auto ch = GridSpec::channel(1, c1, 2.0);
    CHECK(ch.dx(0) == doctest::Approx(1.0 / 16));
    CHECK(ch.center(0, 0) == doctest::Approx(-2.0 + 1.0 / 32));
    CHECK_FALSE(ch.periodic(0));

    const std::array<int, 1> few{4};
    CHECK_THROWS_AS(GridSpec::torus(1, few), DomainError);
    CHECK_THROWS_AS(GridSpec::torus(4, 16), DomainError);
    CHECK_THROWS_AS(GridSpec::channel(1, c1, 0.0), DomainError);
    CHECK_THROWS_AS(Field(t, std::vector<double>(3, 0.0)), GridMismatch);
  }

  TEST_CASE("fixed-order sums do not depend on the thread count") {
    std::vector<double> v(100003);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.37 * static_cast<double>(i)) * 1e3 + 1e-7 * i;
    const int saved = parallel::thread_cap();
    parallel::set_thread_cap(1);
    const double one = parallel::fixed_order_sum(v.size(), [&](std::size_t i) { return v[i]; });
    parallel::set_thread_cap(4);
    const double four = parallel::fixed_order_sum(v.size(), [&](std::size_t i) { return v[i]; });
    parallel::set_thread_cap(saved);
    CHECK(one == four);
    double plain = 0.0;
    for (double x : v) plain += x;
    CHECK(one == doctest::Approx(plain).epsilon(1e-12));
  }
}
