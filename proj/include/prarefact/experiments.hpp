#pragma once

// Long-time experiments on top of the solver. Each returns recorded series, exponent
// fits against the rate card and named pass/fail checks; gated checks decide the exit
// status of a run.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "prarefact/fit.hpp"
#include "prarefact/flux.hpp"
#include "prarefact/grid.hpp"
#include "prarefact/solver.hpp"
#include "prarefact/waves.hpp"

namespace prarefact::experiments {

struct Check {
  std::string name;
  bool gated = false;
  bool passed = false;
  std::string detail;
};

struct LabeledFit {
  std::string label;
  fit::FitResult fit;
  double theoretical = 0.0;
};

struct ExperimentResult {
  std::vector<fit::DecaySeries> series;
  std::vector<LabeledFit> fits;
  std::vector<Check> checks;
  std::vector<std::string> notes;
  /// Extra key=value report lines, in order.
  std::vector<std::pair<std::string, std::string>> report;

  bool gated_pass() const;
  const fit::DecaySeries* find_series(const std::string& label) const;
  const LabeledFit* find_fit(const std::string& label) const;
  const Check* find_check(const std::string& name) const;
};

/// Receives (tag, t, field) at every recorded time; used to dump snapshots.
using SnapshotSink = std::function<void(const std::string& tag, double t, const Field& field)>;

/// `count`+1 times from 0 to t_end, uniformly spaced in log(1+t).
std::vector<double> log_schedule(double t_end, int count);

/// Recording times of a run: params.snapshot_times if set, else log_schedule(t_end, 100).
std::vector<double> recording_times(const solver::SolverParams& params);

/// Series label of a norm: "l2", "l2.5", "linf".
std::string norm_tag(double q);

/// Window [t_end/10, t_end].
std::pair<double, double> default_window(double t_end);

/// Decay of a zero-mean periodic perturbation on a torus. Records ||u - mean||_q for every
/// q in q_list (q = 2 is always recorded), ||grad u||_{m+1}, and ||grad u||_q for q > m+1.
/// Solution and L^{m+1}-gradient fits are gated one-sided against the rate card (+0.2).
ExperimentResult run_periodic_decay(const FluxModel& flux, const solver::SolverParams& params,
                                    const waves::PerturbationSpec& perturbation, double mean_value,
                                    const std::vector<double>& q_list, const GridSpec& grid,
                                    const SnapshotSink& sink = {});

/// Throws HypothesisError unless 1 < m <= 1.5.
void require_rarefaction_hypothesis(double m);
/// Throws GeometryError unless L > max|lambda_-+| t_end + 10 and the channel cells line up
/// with a unit-period torus (1/dx and L/dx integers).
void require_channel_geometry(const GridSpec& channel, const waves::WavePair& pair, double t_end);
/// Unit torus sharing the channel's cell size and transverse resolution.
GridSpec far_field_torus(const GridSpec& channel);

/// Channel solution from smooth rarefaction + w0 against the approximate wave built from the
/// two far-field torus solutions started at u_-+ + w0. Records ||phi||_r for each r.
/// Gated: sup ||phi||_2 <= 3 ||phi(1)||_2, and every fitted exponent for r > 2 is <= 0.
ExperimentResult run_rarefaction_approach(const FluxModel& flux, const waves::WavePair& pair,
                                          const solver::SolverParams& params,
                                          const waves::PerturbationSpec& perturbation,
                                          const std::vector<double>& r_list, const GridSpec& channel,
                                          const SnapshotSink& sink = {});

/// Two runs on one grid with a shared step. Records ||u - v||_1 and the smoothed
/// functionals int J_delta(u - v), delta in {1e-3, 1e-6}. Gated: per-step non-increase of
/// ||u - v||_1 (1e-12), the discrete max principle (1e-12) and torus mass conservation (1e-13).
ExperimentResult l1_contraction_check(const FluxModel& flux, const solver::SolverParams& params, const Field& u0,
                                      const Field& v0, const SnapshotSink& sink = {});

/// sigma_axis(u, v) = int_0^1 f_axis''(v + theta (u - v)) dtheta by 8-point Gauss-Legendre.
double sigma(const FluxModel& flux, int axis, double u, double v);

struct J1Groups {
  Field group1;
  Field group2;
  Field total;
};

/// Residual J_1 on the channel at time t > 0 from far-field torus states u_l, u_r.
J1Groups residual_j1(const FluxModel& flux, const waves::WavePair& pair, double t, const Field& u_l,
                     const Field& u_r, const GridSpec& channel);

/// Norms of J_1 over the recorded torus states (times must be > 0). Records both groups and
/// the total for each q. Gated: ||J_1||_inf exponent <= rate + 0.25; with `w0_zero`, group 1
/// vanishes to round-off.
ExperimentResult residual_j1_norms(const FluxModel& flux, const waves::WavePair& pair, double m,
                                   const std::vector<std::pair<double, std::pair<Field, Field>>>& states,
                                   const std::vector<double>& q_list, const GridSpec& channel, bool w0_zero,
                                   std::pair<double, double> window);

/// Evolves only the two far-field tori and evaluates residual_j1_norms at the recording times.
ExperimentResult run_residual(const FluxModel& flux, const waves::WavePair& pair, const solver::SolverParams& params,
                              const waves::PerturbationSpec& perturbation, const std::vector<double>& q_list,
                              const GridSpec& channel);

struct OdeOutcome {
  fit::DecaySeries trajectory;
  double bound = 0.0;
  double max_y = 0.0;
  double margin = 0.0;
  bool pass = false;
};

/// y' = C1 (1+t)^-alpha y + C2 (1+t)^-beta, y(0) = 0, classical RK4 with step dt up to t_max,
/// compared against C2/(beta-1) exp(C1/(alpha-1)). Throws HypothesisError unless
/// alpha > 1 and beta > 1, DomainError for negative C1 or C2.
OdeOutcome ode_bound_check(double c1, double c2, double alpha, double beta, double dt = 1e-3, double t_max = 1e4);

ExperimentResult run_ode(double c1, double c2, double alpha, double beta);

/// "%.6e" with the exponent printed as a plain integer: 2.718282e0.
std::string format_sci(double v);

}  // namespace prarefact::experiments
