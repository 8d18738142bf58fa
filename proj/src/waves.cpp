#include "prarefact/waves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "prarefact/error.hpp"

namespace prarefact::waves {

WavePair WavePair::make(const FluxModel& flux, double u_minus, double u_plus) {
  if (!(u_minus < u_plus)) throw DomainError("rarefaction needs u_minus < u_plus");
  return {u_minus, u_plus, flux.lambda(u_minus), flux.lambda(u_plus)};
}

void PerturbationSpec::validate(int dim) const {
  for (const auto& m : modes) {
    bool nonzero = false;
    for (int a = 0; a < 3; ++a) {
      const int k = m.k[static_cast<std::size_t>(a)];
      if (a >= dim && k != 0) throw DomainError("perturbation mode has a component beyond the grid dimension");
      nonzero = nonzero || k != 0;
    }
    if (!nonzero) throw DomainError("perturbation mode with zero wave vector would shift the mean");
  }
}

double lambda_inverse(const FluxModel& flux, double s, double lo, double hi) {
  const double s_lo = flux.lambda(lo);
  const double s_hi = flux.lambda(hi);
  const double slack = 1e-14 * (1.0 + std::max(std::fabs(s_lo), std::fabs(s_hi)));
  if (s < s_lo - slack || s > s_hi + slack) throw OutOfRange("lambda_inverse: target speed outside the bracket");
  if (s <= s_lo) return lo;
  if (s >= s_hi) return hi;

  // secant guess, then Newton kept inside the shrinking bracket
  double x = lo + (s - s_lo) / (s_hi - s_lo) * (hi - lo);
  for (int it = 0; it < 200; ++it) {
    const double r = flux.lambda(x) - s;
    if (r == 0.0) return x;
    if (r > 0.0) hi = x;
    else lo = x;
    double next = x - r / flux.lambda_prime(x);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double dx = std::fabs(next - x);
    x = next;
    if (dx <= 1e-15 * std::max(1.0, std::fabs(x)) || hi - lo <= 1e-13) break;
  }
  return x;
}

double rarefaction_profile(const FluxModel& flux, const WavePair& pair, double t, double x1) {
  if (!(t > 0.0)) throw DomainError("rarefaction_profile: t must be positive");
  if (x1 < pair.lambda_minus * t) return pair.u_minus;
  if (x1 > pair.lambda_plus * t) return pair.u_plus;
  return lambda_inverse(flux, x1 / t, pair.u_minus, pair.u_plus);
}

double tanh_exact(double x) {
  if (x > 40.0) return 1.0;
  if (x < -40.0) return -1.0;
  const double ep = std::exp(x);
  const double em = std::exp(-x);
  return (ep - em) / (ep + em);
}

double viscous_rarefaction_init(const FluxModel& flux, const WavePair& pair, double x1) {
  const double mid = 0.5 * (pair.lambda_plus + pair.lambda_minus);
  const double half = 0.5 * (pair.lambda_plus - pair.lambda_minus);
  return lambda_inverse(flux, mid + half * tanh_exact(x1), pair.u_minus, pair.u_plus);
}

double viscous_rarefaction_init_slope(const FluxModel& flux, const WavePair& pair, double x1) {
  const double half = 0.5 * (pair.lambda_plus - pair.lambda_minus);
  const double c = std::cosh(x1);
  const double sech2 = std::isfinite(c) ? 1.0 / (c * c) : 0.0;
  return half * sech2 / flux.lambda_prime(viscous_rarefaction_init(flux, pair, x1));
}

ValueSlope viscous_rarefaction_eval(const FluxModel& flux, const WavePair& pair, double t, double x1) {
  if (!(t >= 0.0)) throw DomainError("viscous_rarefaction_eval: t must be >= 0");
  if (t == 0.0) {
    return {viscous_rarefaction_init(flux, pair, x1), viscous_rarefaction_init_slope(flux, pair, x1)};
  }
  // residual(w) = w - init(x1 - lambda(w) t) is strictly increasing on [u_-, u_+]
  auto residual = [&](double w) { return w - viscous_rarefaction_init(flux, pair, x1 - flux.lambda(w) * t); };
  double lo = pair.u_minus;
  double hi = pair.u_plus;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (residual(mid) > 0.0) hi = mid;
    else lo = mid;
  }
  double w = 0.5 * (lo + hi);
  for (int it = 0; it < 3; ++it) {
    const double r = residual(w);
    if (r == 0.0) break;
    const double d = viscous_rarefaction_init_slope(flux, pair, x1 - flux.lambda(w) * t);
    const double next = w - r / (1.0 + t * flux.lambda_prime(w) * d);
    if (!(next >= lo && next <= hi)) break;
    w = next;
  }
  const double d = viscous_rarefaction_init_slope(flux, pair, x1 - flux.lambda(w) * t);
  return {w, d / (1.0 + t * flux.lambda_prime(w) * d)};
}

double weight_g(const FluxModel& flux, const WavePair& pair, double t, double x1) {
  return (viscous_rarefaction_eval(flux, pair, t, x1).value - pair.u_minus) / (pair.u_plus - pair.u_minus);
}

void sample_viscous_rarefaction(const FluxModel& flux, const WavePair& pair, double t, const GridSpec& grid,
                                Field& value, Field& slope) {
  value = Field(grid);
  slope = Field(grid);
  const int n0 = grid.cells(0);
  const std::size_t slab = grid.slab_size();
#pragma omp parallel for schedule(static) if (grid.size() >= 4096)
  for (int i = 0; i < n0; ++i) {
    const auto vs = viscous_rarefaction_eval(flux, pair, t, grid.center(0, i));
    const std::size_t base = static_cast<std::size_t>(i) * slab;
    for (std::size_t j = 0; j < slab; ++j) {
      value.values[base + j] = vs.value;
      slope.values[base + j] = vs.slope;
    }
  }
}

Field tile_periodic(const Field& torus, const GridSpec& channel) {
  const GridSpec& tg = torus.grid;
  if (tg.kind() != GridKind::torus || channel.kind() != GridKind::channel || tg.dim() != channel.dim()) {
    throw GeometryError("tile_periodic: needs a torus source and a channel target of equal dimension");
  }
  for (int a = 1; a < tg.dim(); ++a) {
    if (tg.cells(a) != channel.cells(a)) throw GeometryError("tile_periodic: transverse cell counts differ");
  }
  const int period = tg.cells(0);
  const double shift_cells = channel.half_length() * period;  // cells between -L and the nearest integer point
  const auto shift = static_cast<long long>(std::llround(shift_cells));
  if (std::fabs(channel.dx(0) - tg.dx(0)) > 1e-12 * tg.dx(0) || std::fabs(shift_cells - static_cast<double>(shift)) > 1e-9) {
    throw GeometryError("tile_periodic: channel cells do not line up with the torus cells");
  }
  Field out(channel);
  const std::size_t slab = channel.slab_size();
  for (int i = 0; i < channel.cells(0); ++i) {
    // channel cell i sits at -L + (i + 1/2) dx; modulo 1 that is torus cell (i - L*period) mod period
    const auto j = static_cast<std::size_t>(((i - shift) % period + period) % period);
    std::copy_n(torus.values.begin() + static_cast<std::ptrdiff_t>(j * slab), slab,
                out.values.begin() + static_cast<std::ptrdiff_t>(static_cast<std::size_t>(i) * slab));
  }
  return out;
}

namespace {
Field blend(const Field& left, const Field& right, const Field& g, const char* context) {
  require_same_grid(left, right, context);
  require_same_grid(left, g, context);
  Field out(left.grid);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double w = g.values[i];
    if (!(w >= 0.0 && w <= 1.0)) throw DomainError(std::string(context) + ": weight outside [0,1]");
    out.values[i] = left.values[i] * (1.0 - w) + right.values[i] * w;
  }
  return out;
}
}  // namespace

Field approximate_wave(const Field& u_l, const Field& u_r, const Field& g_values) {
  return blend(u_l, u_r, g_values, "approximate_wave");
}

Field approximate_wave_gap(const Field& w_l, const Field& w_r, const Field& g_values) {
  return blend(w_l, w_r, g_values, "approximate_wave_gap");
}

double perturbation_eval(const PerturbationSpec& spec, std::span<const double> x) {
  double s = 0.0;
  for (const auto& m : spec.modes) {
    double phase = m.phase;
    for (std::size_t a = 0; a < x.size() && a < 3; ++a) phase += 2.0 * std::numbers::pi * m.k[a] * x[a];
    s += m.amplitude * std::sin(phase);
  }
  return s;
}

}  // namespace prarefact::waves
