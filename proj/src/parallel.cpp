#include "prarefact/parallel.hpp"

#include <omp.h>

#include <cstdlib>
#include <string>

namespace prarefact::parallel {

int thread_cap() { return omp_get_max_threads(); }

void set_thread_cap(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int apply_thread_env() {
  if (const char* env = std::getenv("PRAREFACT_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n > 0) set_thread_cap(n);
    } catch (const std::exception&) {
      // unparsable value: keep the default (hardware count)
    }
  }
  return thread_cap();
}

double pairwise_sum(std::vector<double>& partials) {
  if (partials.empty()) return 0.0;
  std::size_t n = partials.size();
  while (n > 1) {
    const std::size_t half = (n + 1) / 2;
    for (std::size_t i = 0; i + half < n; ++i) partials[i] += partials[i + half];
    n = half;
  }
  return partials[0];
}

}  // namespace prarefact::parallel
