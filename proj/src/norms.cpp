#include "prarefact/norms.hpp"

#include <algorithm>
#include <cmath>

#include "prarefact/error.hpp"
#include "prarefact/parallel.hpp"

namespace prarefact {

double lq_norm(std::span<const double> values, double cell_volume, double q) {
  if (!(q >= 1.0)) throw DomainError("norm exponent must be >= 1");
  const double* v = values.data();
  const double peak = parallel::max_of(values.size(), 0.0, [v](std::size_t i) { return std::fabs(v[i]); });
  if (q == kInf || peak == 0.0) return peak;
  // scaled by the peak so tiny or huge values neither underflow nor overflow
  const double inv = 1.0 / peak;
  const double sum = parallel::fixed_order_sum(values.size(), [v, inv, q](std::size_t i) {
    const double r = std::fabs(v[i]) * inv;
    return q == 2.0 ? r * r : std::pow(r, q);
  });
  return peak * std::pow(sum * cell_volume, 1.0 / q);
}

double lq_norm(const Field& field, double q) {
  return lq_norm(field.values, field.grid.cell_volume(), q);
}

double gradient_norm(const Field& field, double q, const solver::ChannelGhosts* ghosts) {
  if (!(q >= 1.0)) throw DomainError("norm exponent must be >= 1");
  const auto grads = solver::gradient_field(field, ghosts);
  const GridSpec& g = field.grid;
  if (q == kInf) return std::sqrt(grads.max_magnitude2);

  // Periodic axes carry a duplicated last face; skip it so every face counts once.
  double total = 0.0;
  for (int a = 0; a < g.dim(); ++a) {
    const auto& ax = grads.axes[static_cast<std::size_t>(a)];
    const auto& s = ax.shape;
    const int limit = g.periodic(a) ? s[static_cast<std::size_t>(a)] - 1 : s[static_cast<std::size_t>(a)];
    const double* m2 = ax.magnitude2.data();
    const std::size_t n12 = static_cast<std::size_t>(s[1]) * static_cast<std::size_t>(s[2]);
    const std::size_t n2 = static_cast<std::size_t>(s[2]);
    const std::size_t count = ax.magnitude2.size();
    const double part = parallel::fixed_order_sum(count, [&](std::size_t i) {
      const std::size_t ia = a == 0 ? i / n12 : (a == 1 ? (i / n2) % static_cast<std::size_t>(s[1]) : i % n2);
      if (static_cast<int>(ia) >= limit) return 0.0;
      // boundary faces of a channel cover half a cell each
      double w = 1.0;
      if (!g.periodic(a) && (ia == 0 || static_cast<int>(ia) == limit - 1)) w = 0.5;
      return w * std::pow(m2[i], 0.5 * q);
    });
    total += part;
  }
  return std::pow(total * g.cell_volume() / g.dim(), 1.0 / q);
}

double mean(const Field& field) {
  const double* v = field.values.data();
  return parallel::fixed_order_sum(field.size(), [v](std::size_t i) { return v[i]; }) /
         static_cast<double>(field.size());
}

}  // namespace prarefact
