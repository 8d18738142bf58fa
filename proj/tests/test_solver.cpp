#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "prarefact/error.hpp"
#include "prarefact/norms.hpp"
#include "prarefact/parallel.hpp"
#include "prarefact/reference.hpp"
#include "prarefact/solver.hpp"

using namespace prarefact;
using solver::SolverParams;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

SolverParams params(double m, double eps) {
  SolverParams p;
  p.m = m;
  p.eps = eps;
  p.t_end = 1.0;
  return p;
}

Field wave(const GridSpec& g, double mean, double amp, double shift = 0.0) {
  return Field::from_function(g, [&](std::span<const double> x) {
    double s = mean;
    for (std::size_t a = 0; a < x.size(); ++a) s += amp / (1.0 + a) * std::sin(kTwoPi * (x[a] - shift) * (1.0 + a));
    return s;
  });
}

double l1_distance(const Field& a, const Field& b) { return lq_norm(a - b, 1.0); }

double max_abs_diff(const Field& a, const Field& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

/// Advances `u` by `steps` stable steps, calling `each(u)` after every step.
template <class Each>
void run_steps(Field& u, const FluxModel& flux, const SolverParams& p, std::size_t steps, Each&& each) {
  solver::Evolver ev(u.grid, flux, p);
  for (std::size_t s = 0; s < steps; ++s) {
    ev.advance(u, ev.prepare(u));
    each(u);
  }
}

}  // namespace

TEST_SUITE("solver") {
  TEST_CASE("single step on an 8-cell bump matches the direct formula") {
    const auto g = GridSpec::torus(1, 8);
    std::vector<double> v(8, 0.0);
    v[1] = 1.0;
    const Field u(g, v);
    const auto p = params(1.5, 0.1);
    const double dt = solver::cfl_dt(u, FluxModel::burgers(), p);
    const Field got = solver::step(u, FluxModel::burgers(), p, dt);
    const auto want = oracle::burgers_step_1d(v, 1.5, 0.1, dt);
    for (std::size_t i = 0; i < 8; ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-14).scale(1.0));
  }

  TEST_CASE("step rejects an unstable dt") {
    const auto g = GridSpec::torus(1, 16);
    const Field u = wave(g, 0.5, 0.3);
    const auto p = params(1.5, 0.0);
    const double dt = solver::cfl_dt(u, FluxModel::burgers(), p);
    CHECK_NOTHROW(solver::step(u, FluxModel::burgers(), p, dt));
    CHECK_THROWS_AS(solver::step(u, FluxModel::burgers(), p, 1.01 * dt), CflViolation);
    CHECK_THROWS_AS(solver::step(u, FluxModel::burgers(), p, -dt), CflViolation);
  }

  TEST_CASE("stable step adds convective and diffusive rates") {
    const auto g = GridSpec::torus(1, 100);
    const std::array<double, 3> lam{2.0, 0.0, 0.0};
    // conv 2*2/0.01 = 400, diff 2*1*1.5*(3+1)^{1/4}/1e-4
    const double diff = 2.0 * 1.5 * std::pow(4.0, 0.25) / 1e-4;
    CHECK(solver::cfl_dt_from_bounds(g, 1.5, 1.0, 0.9, lam, 3.0) == doctest::Approx(0.9 / (400.0 + diff)));
    const std::array<double, 3> zero{0.0, 0.0, 0.0};
    CHECK(solver::cfl_dt_from_bounds(g, 1.5, 0.0, 0.5, zero, 0.0) == doctest::Approx(0.5 * 1e-4));
  }

  TEST_CASE("parameter validation") {
    SolverParams p;
    p.m = 1.0;
    CHECK_THROWS_WITH_AS(p.validate(), "m must exceed 1", DomainError);
    p.m = 1.5;
    p.cfl_safety = 1.5;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p.cfl_safety = 0.9;
    p.snapshot_times = {1.0, 0.5};
    CHECK_THROWS_AS(p.validate(), DomainError);
  }

  TEST_CASE("evolver agrees with the serial reference") {
    const auto flux_list = {FluxModel::burgers(), FluxModel::quartic()};
    for (const auto& flux : flux_list) {
      for (int dim = 1; dim <= 3; ++dim) {
        const auto g = GridSpec::torus(dim, dim == 1 ? 64 : (dim == 2 ? 24 : 10));
        for (double m : {1.25, 1.5, 2.3}) {
          const Field u = wave(g, 0.2, 0.4, 0.13);
          const auto p = params(m, 0.05);
          const double dt = solver::cfl_dt(u, flux, p);
          const Field fast = solver::step(u, flux, p, dt);
          const Field slow = solver::reference::step_serial(u, flux, p, dt);
          CHECK(max_abs_diff(fast, slow) <= 1e-14);
        }
      }
    }
    // channel with ghost slabs
    const std::array<int, 2> cells{32, 8};
    const auto ch = GridSpec::channel(2, cells, 1.0);
    const Field u = Field::from_function(ch, [](std::span<const double> x) {
      return std::tanh(x[0]) + 0.1 * std::sin(kTwoPi * x[1]);
    });
    solver::ChannelGhosts gh{std::vector<double>(8, -0.9), std::vector<double>(8, 0.95)};
    const auto p = params(1.5, 0.0);
    const double dt = solver::cfl_dt(u, FluxModel::burgers(), p, &gh);
    CHECK(max_abs_diff(solver::step(u, FluxModel::burgers(), p, dt, &gh),
                       solver::reference::step_serial(u, FluxModel::burgers(), p, dt, &gh)) <= 1e-14);
  }

  TEST_CASE("constant states are fixed points") {
    const auto g = GridSpec::torus(2, 16);
    const Field u(g, 0.37);
    const auto p = params(1.5, 0.0);
    const Field next = solver::step(u, FluxModel::quartic(), p, solver::cfl_dt(u, FluxModel::quartic(), p));
    CHECK(max_abs_diff(u, next) == 0.0);
  }

  TEST_CASE("mass conservation over 1e5 steps") {
    const auto g = GridSpec::torus(1, 256);
    Field u = wave(g, 0.5, 0.1);
    const double m0 = mean(u);
    double drift = 0.0;
    std::size_t k = 0;
    run_steps(u, FluxModel::burgers(), params(1.5, 0.0), 100000, [&](const Field& f) {
      if (++k % 100 == 0) drift = std::max(drift, std::fabs(mean(f) - m0));
    });
    CHECK(drift <= 1e-13);
  }

  TEST_CASE("discrete maximum principle") {
    const auto g = GridSpec::torus(2, 32);
    Field u = Field::from_function(g, [](std::span<const double> x) {
      return (x[0] > 0.3 && x[0] < 0.6 && x[1] < 0.5) ? 1.0 : -0.5;
    });
    const auto [lo, hi] = std::minmax_element(u.values.begin(), u.values.end());
    const double umin = *lo, umax = *hi;
    double excursion = 0.0;
    run_steps(u, FluxModel::quartic(), params(1.5, 0.0), 2000, [&](const Field& f) {
      const auto [a, b] = std::minmax_element(f.values.begin(), f.values.end());
      excursion = std::max({excursion, umin - *a, *b - umax});
    });
    CHECK(excursion <= 1e-12);
  }

  TEST_CASE("L1 contraction between two runs sharing dt") {
    const auto g = GridSpec::torus(1, 128);
    Field u = wave(g, 0.5, 0.3), v = wave(g, 0.5, 0.3, 0.1);
    const auto p = params(1.5, 0.0);
    solver::Evolver eu(g, FluxModel::burgers(), p), ev(g, FluxModel::burgers(), p);
    double prev = l1_distance(u, v), worst = 0.0;
    for (int s = 0; s < 5000; ++s) {
      const double dt = std::min(eu.prepare(u), ev.prepare(v));
      eu.advance(u, dt);
      ev.advance(v, dt);
      const double d = l1_distance(u, v);
      worst = std::max(worst, d - prev);
      prev = d;
    }
    CHECK(worst <= 1e-12);
  }

  TEST_CASE("gradient stays bounded after the initial transient") {
    const auto g = GridSpec::torus(1, 256);
    Field u = wave(g, 0.2, 0.5);
    solver::Evolver ev(g, FluxModel::burgers(), params(1.5, 0.0));
    std::vector<double> grad;
    for (int s = 0; s < 20000; ++s) {
      ev.advance(u, ev.prepare(u));
      grad.push_back(std::sqrt(ev.max_gradient2()));
    }
    const std::size_t skip = grad.size() / 20, window = grad.size() / 10;
    const double k = *std::max_element(grad.begin() + static_cast<long>(skip), grad.begin() + static_cast<long>(skip + window));
    CHECK(*std::max_element(grad.begin() + static_cast<long>(skip), grad.end()) <= 2.0 * k);
  }

  TEST_CASE("solutions are Cauchy as eps shrinks") {
    const auto g = GridSpec::torus(1, 128);
    const Field u0 = wave(g, 0.3, 0.4);
    auto at_one = [&](double eps) { return solver::integrate(u0, FluxModel::burgers(), params(1.5, eps)).final_field; };
    const Field a = at_one(1e-2), b = at_one(5e-3), c = at_one(2.5e-3);
    const double d1 = l1_distance(a, b), d2 = l1_distance(b, c);
    CHECK(d2 < d1);
  }

  TEST_CASE("self-convergence under refinement") {
    auto solve = [](int n) {
      const auto g = GridSpec::torus(1, n);
      auto p = params(1.5, 0.2);
      p.t_end = 0.05;
      return solver::integrate(wave(g, 0.0, 0.2), FluxModel::burgers(), p).final_field;
    };
    auto restrict2 = [](const Field& fine) {
      std::vector<double> v(fine.size() / 2);
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = 0.5 * (fine[2 * i] + fine[2 * i + 1]);
      return v;
    };
    const Field c = solve(64), m = solve(128), f = solve(256);
    const Field m_on_c(c.grid, restrict2(m)), f_on_m(m.grid, restrict2(f));
    const double e1 = l1_distance(c, m_on_c), e2 = l1_distance(m, f_on_m);
    CHECK(e1 / e2 > 1.7);
  }

  TEST_CASE("integrate lands on snapshot times") {
    const auto g = GridSpec::torus(1, 32);
    const Field u0 = wave(g, 0.5, 0.2);
    auto p = params(1.5, 0.0);
    p.t_end = 0.5;
    p.snapshot_times = {0.0, 0.1, 0.25, 0.5, 2.0};
    std::vector<double> seen;
    bool first_verbatim = false;
    const auto res = solver::integrate(u0, FluxModel::burgers(), p, [&](double t, const Field& f) {
      if (seen.empty()) first_verbatim = f.values == u0.values;
      seen.push_back(t);
    });
    CHECK(first_verbatim);
    CHECK(seen == std::vector<double>{0.0, 0.1, 0.25, 0.5});
    CHECK(res.snapshots.size() == 4);
    CHECK(res.snapshots.back().field.values == res.final_field.values);
  }

  TEST_CASE("non-finite data raises a blow-up error with the step index") {
    const auto g = GridSpec::torus(1, 16);
    Field u(g, 0.1);
    u[3] = std::nan("");
    try {
      solver::integrate(u, FluxModel::burgers(), params(1.5, 0.0));
      FAIL("expected NumericalBlowup");
    } catch (const NumericalBlowup& e) {
      CHECK(e.step() == 1);
    }
  }

  TEST_CASE("step results do not depend on the thread count") {
    const auto g = GridSpec::torus(2, 96);
    const Field u = wave(g, 0.1, 0.5);
    const auto p = params(1.5, 0.0);
    const int saved = parallel::thread_cap();
    parallel::set_thread_cap(1);
    const Field a = solver::step(u, FluxModel::burgers(), p, solver::cfl_dt(u, FluxModel::burgers(), p));
    parallel::set_thread_cap(3);
    const Field b = solver::step(u, FluxModel::burgers(), p, solver::cfl_dt(u, FluxModel::burgers(), p));
    parallel::set_thread_cap(saved);
    CHECK(a.values == b.values);
  }
}
