// Serial reference step against the padded OpenMP evolver on the same state.

#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>

#include "prarefact/reference.hpp"
#include "prarefact/solver.hpp"

namespace {

using namespace prarefact;

Field bench_field(int dim, int n) {
  const GridSpec g = GridSpec::torus(dim, n);
  return Field::from_function(g, [](std::span<const double> x) {
    double s = 0.5;
    for (double xi : x) s += 0.1 * std::sin(2.0 * std::numbers::pi * xi);
    return s;
  });
}

solver::SolverParams bench_params() {
  solver::SolverParams p;
  p.m = 1.5;
  p.eps = 0.0;
  return p;
}

void BM_ReferenceStep(benchmark::State& state) {
  const Field u = bench_field(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto flux = FluxModel::burgers();
  const auto p = bench_params();
  const double dt = solver::cfl_dt(u, flux, p);
  for (auto _ : state) benchmark::DoNotOptimize(solver::reference::step_serial(u, flux, p, dt));
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(u.size()));
}

void BM_EvolverStep(benchmark::State& state) {
  Field u = bench_field(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
  const auto flux = FluxModel::burgers();
  solver::Evolver ev(u.grid, flux, bench_params());
  for (auto _ : state) {
    const double dt = ev.prepare(u);
    ev.advance(u, dt);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long long>(u.size()));
}

}  // namespace

BENCHMARK(BM_ReferenceStep)->Args({1, 1024})->Args({1, 38400})->Args({2, 256});
BENCHMARK(BM_EvolverStep)->Args({1, 1024})->Args({1, 38400})->Args({2, 256});
BENCHMARK_MAIN();
