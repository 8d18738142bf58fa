#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

namespace prarefact::parallel {

/// Loops shorter than this run serially; the fork/join cost dominates below it.
inline constexpr std::size_t kThreshold = 4096;

/// Block length of the fixed-order reductions. Independent of the thread count,
/// so every reduction is bit-reproducible however many threads run it.
inline constexpr std::size_t kBlock = 1024;

/// Current cap on the OpenMP team size.
int thread_cap();
void set_thread_cap(int threads);
/// Reads PRAREFACT_THREADS (positive integer) and applies it; returns the resulting cap.
int apply_thread_env();

/// Pairwise combination of block partials; the tree shape only depends on the count.
double pairwise_sum(std::vector<double>& partials);

/// Sum of term(i) for i in [0, n) with a reduction order fixed by kBlock.
template <class Term>
double fixed_order_sum(std::size_t n, Term term) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  const auto nb = static_cast<long long>(blocks);
#pragma omp parallel for schedule(static) if (n >= kThreshold)
  for (long long b = 0; b < nb; ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[static_cast<std::size_t>(b)] = s;
  }
  return pairwise_sum(partial);
}

/// max of term(i) for i in [0, n); returns `init` when n == 0.
template <class Term>
double max_of(std::size_t n, double init, Term term) {
  double m = init;
  const auto nn = static_cast<long long>(n);
#pragma omp parallel for schedule(static) reduction(max : m) if (n >= kThreshold)
  for (long long i = 0; i < nn; ++i) m = std::max(m, term(static_cast<std::size_t>(i)));
  return m;
}

}  // namespace prarefact::parallel
