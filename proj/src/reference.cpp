#include "prarefact/reference.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace prarefact::solver::reference {

namespace {

using Index = std::array<int, GridSpec::kMaxDim>;

struct Lookup {
  const Field& field;
  const ChannelGhosts* ghosts;

  // Value at a multi-index that may sit one cell outside the grid on any axis.
  double operator()(Index idx) const {
    const GridSpec& g = field.grid;
    for (int a = 1; a < g.dim(); ++a) {
      const int n = g.cells(a);
      idx[static_cast<std::size_t>(a)] = (idx[static_cast<std::size_t>(a)] % n + n) % n;
    }
    const int n0 = g.cells(0);
    int& i0 = idx[0];
    if (g.periodic(0)) {
      i0 = (i0 % n0 + n0) % n0;
      return field.values[g.flatten(idx)];
    }
    if (i0 >= 0 && i0 < n0) return field.values[g.flatten(idx)];
    Index transverse = idx;
    transverse[0] = 0;
    const std::size_t t = g.flatten(transverse);  // slab offset of the transverse indices
    if (ghosts) return i0 < 0 ? ghosts->left[t] : ghosts->right[t];
    i0 = i0 < 0 ? 0 : n0 - 1;
    return field.values[g.flatten(idx)];
  }
};

// Numerical flux through the face between `left` and left + e_axis.
double face_flux(const Lookup& u, const FluxModel& flux, double m, double eps, int axis, Index left) {
  const GridSpec& g = u.field.grid;
  Index right = left;
  right[static_cast<std::size_t>(axis)] += 1;
  const double ul = u(left);
  const double ur = u(right);

  const double normal = (ur - ul) / g.dx(axis);
  double grad2 = normal * normal;
  for (int b = 0; b < g.dim(); ++b) {
    if (b == axis) continue;
    auto shifted = [&](Index base, int d) {
      base[static_cast<std::size_t>(b)] += d;
      return u(base);
    };
    const double tl = shifted(left, 1) - shifted(left, -1);
    const double tr = shifted(right, 1) - shifted(right, -1);
    const double tangential = (tl + tr) / (4.0 * g.dx(b));
    grad2 += tangential * tangential;
  }
  const double diffusive = std::pow(grad2 + eps * eps, 0.5 * (m - 1.0)) * normal;

  const double a = std::max(std::fabs(flux.speed(axis, ul)), std::fabs(flux.speed(axis, ur)));
  const double convective = 0.5 * (flux.value(axis, ul) + flux.value(axis, ur)) - 0.5 * a * (ur - ul);
  return convective - diffusive;
}

}  // namespace

Field step_serial(const Field& field, const FluxModel& flux, const SolverParams& params, double dt,
                  const ChannelGhosts* ghosts) {
  const GridSpec& g = field.grid;
  const double eps = params.resolved_eps(g);
  const Lookup u{field, ghosts};
  Field out = field;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const Index idx = g.unflatten(k);
    double divergence = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      Index below = idx;
      below[static_cast<std::size_t>(a)] -= 1;
      const double upper = face_flux(u, flux, params.m, eps, a, idx);
      const double lower = face_flux(u, flux, params.m, eps, a, below);
      divergence += (upper - lower) / g.dx(a);
    }
    out.values[k] = field.values[k] - dt * divergence;
  }
  return out;
}

}  // namespace prarefact::solver::reference
