#pragma once

// Wave objects of the rarefaction problem:
//   centred rarefaction  u^R(x1/t) = lambda^{-1}(x1/t) inside the fan [lambda_- t, lambda_+ t]
//   smooth rarefaction   inviscid evolution of lambda^{-1}(mid + half * tanh(x1))
//   weight               g = (smooth - u_-) / (u_+ - u_-)
//   approximate wave     u_l (1 - g) + u_r g, blending two periodic solutions

#include <array>
#include <span>
#include <vector>

#include "prarefact/flux.hpp"
#include "prarefact/grid.hpp"

namespace prarefact::waves {

/// Far-field states u_- < u_+ and their characteristic speeds.
struct WavePair {
  double u_minus;
  double u_plus;
  double lambda_minus;
  double lambda_plus;

  /// Throws DomainError unless u_minus < u_plus.
  static WavePair make(const FluxModel& flux, double u_minus, double u_plus);
};

struct Mode {
  std::array<int, 3> k{0, 0, 0};
  double amplitude = 0.0;
  double phase = 0.0;
};

/// Zero-mean periodic perturbation on the unit torus: sum of amplitude * sin(2 pi k.x + phase).
struct PerturbationSpec {
  std::vector<Mode> modes;

  /// Throws DomainError for a zero wave vector, or one with components beyond `dim`.
  void validate(int dim) const;
  bool empty() const noexcept { return modes.empty(); }
};

/// Solves lambda(u) = s for u in [lo, hi] by Newton steps safeguarded with bisection.
/// Throws OutOfRange when s lies outside [lambda(lo), lambda(hi)].
double lambda_inverse(const FluxModel& flux, double s, double lo, double hi);

/// Centred rarefaction at (t, x1). Throws DomainError for t <= 0.
double rarefaction_profile(const FluxModel& flux, const WavePair& pair, double t, double x1);

/// (e^x - e^-x) / (e^x + e^-x), saturated to +-1 for |x| > 40.
double tanh_exact(double x);

double viscous_rarefaction_init(const FluxModel& flux, const WavePair& pair, double x1);
/// d/dx1 of viscous_rarefaction_init.
double viscous_rarefaction_init_slope(const FluxModel& flux, const WavePair& pair, double x1);

struct ValueSlope {
  double value;
  double slope;
};

/// Smooth rarefaction at (t, x1) by characteristics: bisection on w in [u_-, u_+] for
/// w = init(x1 - lambda(w) t), polished by guarded Newton steps. The slope follows from
/// implicit differentiation. Throws DomainError for t < 0.
ValueSlope viscous_rarefaction_eval(const FluxModel& flux, const WavePair& pair, double t, double x1);

double weight_g(const FluxModel& flux, const WavePair& pair, double t, double x1);

/// Smooth rarefaction and its x1-slope at every cell centre of `grid` (constant across
/// transverse axes). Values go to `value`, slopes to `slope`.
void sample_viscous_rarefaction(const FluxModel& flux, const WavePair& pair, double t, const GridSpec& grid,
                                Field& value, Field& slope);

/// Periodic torus field tiled onto a channel whose cells line up with the torus cells.
/// Throws GeometryError when the grids are not aligned.
Field tile_periodic(const Field& torus, const GridSpec& channel);

/// Pointwise u_l (1 - g) + u_r g. Throws GridMismatch or DomainError (g outside [0,1]).
Field approximate_wave(const Field& u_l, const Field& u_r, const Field& g_values);
/// Pointwise w_l (1 - g) + w_r g: the gap between the approximate and the smooth wave.
Field approximate_wave_gap(const Field& w_l, const Field& w_r, const Field& g_values);

double perturbation_eval(const PerturbationSpec& spec, std::span<const double> x);

}  // namespace prarefact::waves
