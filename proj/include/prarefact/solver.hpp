#pragma once

// Explicit monotone finite-volume scheme for
//
//   u_t + div f(u) = div( (|grad u|^2 + eps^2)^{(m-1)/2} grad u )
//
// on a torus or a channel R x T^{N-1} truncated to [-L, L] along x1.
// Convection uses the local Lax-Friedrichs flux, diffusion a face-centred
// gradient (two-point normal difference, averaged tangential differences).

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "prarefact/flux.hpp"
#include "prarefact/grid.hpp"

namespace prarefact::solver {

struct SolverParams {
  double m = 1.5;                  ///< viscosity exponent, > 1
  std::optional<double> eps;       ///< gradient regularization; unset means the grid spacing
  double cfl_safety = 0.9;         ///< in (0, 1]
  double t_end = 1.0;
  std::vector<double> snapshot_times;  ///< sorted; entries past t_end are ignored

  /// Throws DomainError when an invariant (m > 1, eps >= 0, 0 < cfl <= 1, t_end > 0, sorted snapshots) fails.
  void validate() const;
  double resolved_eps(const GridSpec& grid) const { return eps ? *eps : grid.min_dx(); }
};

/// Ghost-cell values just outside a channel's two ends (x1 < -L and x1 > L).
/// Each slab holds GridSpec::slab_size() values in transverse row-major order.
/// When a channel is stepped without ghosts, the boundary cells are copied outward.
struct ChannelGhosts {
  std::vector<double> left;
  std::vector<double> right;
};

/// (s^2 + eps^2)^e with cheap exact paths for the exponents that occur in practice.
class PowerLaw {
 public:
  explicit PowerLaw(double exponent);
  double operator()(double x) const noexcept {
    switch (mode_) {
      case Mode::zero: return 1.0;
      case Mode::half: return std::sqrt(x);
      case Mode::quarter: return std::sqrt(std::sqrt(x));
      case Mode::eighth: return std::sqrt(std::sqrt(std::sqrt(x)));
      case Mode::one: return x;
      case Mode::general: break;
    }
    return std::pow(x, exponent_);
  }
  double exponent() const noexcept { return exponent_; }

 private:
  enum class Mode { zero, half, quarter, eighth, one, general };
  double exponent_;
  Mode mode_;
};

/// Face-centred gradient data, one block per axis. Faces along `axis` sit on the lower
/// side of each cell; the face array has cells(axis)+1 entries along that axis (the last
/// one is the upper boundary, which on periodic axes coincides with face 0).
struct FaceGradients {
  struct Axis {
    std::array<int, GridSpec::kMaxDim> shape{1, 1, 1};
    std::vector<double> normal;      ///< d u / d x_axis across the face
    std::vector<double> magnitude2;  ///< |grad u|^2 at the face (normal + averaged tangential)
  };
  std::vector<Axis> axes;
  double max_magnitude2 = 0.0;
};

FaceGradients gradient_field(const Field& field, const ChannelGhosts* ghosts = nullptr);

/// Stable step from precomputed bounds. lambda_max[a] bounds |f_a'| over the state range,
/// grad2_max bounds |grad u|^2 over the faces. Convective and diffusive rates are added so
/// the update stays a convex combination of its stencil values.
double cfl_dt_from_bounds(const GridSpec& grid, double m, double eps, double cfl_safety,
                          std::span<const double> lambda_max, double grad2_max);

double cfl_dt(const Field& field, const FluxModel& flux, const SolverParams& params,
              const ChannelGhosts* ghosts = nullptr);

/// One explicit Euler step. Throws CflViolation when dt exceeds cfl_dt.
Field step(const Field& field, const FluxModel& flux, const SolverParams& params, double dt,
           const ChannelGhosts* ghosts = nullptr);

/// Reusable stepping engine. prepare() evaluates the face fluxes of a state and returns
/// its stable step; advance() applies them. Several evolvers can share one dt, which is
/// how coupled problems (channel plus far-field tori, paired contraction runs) are stepped.
class Evolver {
 public:
  Evolver(const GridSpec& grid, const FluxModel& flux, const SolverParams& params);
  ~Evolver();
  Evolver(Evolver&&) noexcept;
  Evolver& operator=(Evolver&&) noexcept;

  double prepare(const Field& u, const ChannelGhosts* ghosts = nullptr);
  /// Returns false if any updated value is non-finite.
  bool advance(Field& u, double dt) const;

  double stable_dt() const noexcept;
  double max_gradient2() const noexcept;
  const GridSpec& grid() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct Snapshot {
  double t;
  Field field;
};

using SnapshotObserver = std::function<void(double t, const Field& u)>;
/// Called after every step with the step index (1-based), new time and step size.
using StepMonitor = std::function<void(std::size_t step, double t, double dt, const Field& u)>;

struct IntegrateResult {
  Field final_field;
  std::vector<Snapshot> snapshots;
  std::size_t steps = 0;
};

/// Advances field0 to params.t_end, landing exactly on every snapshot time.
/// Throws NumericalBlowup (with the step index) if a non-finite value appears.
IntegrateResult integrate(const Field& field0, const FluxModel& flux, const SolverParams& params,
                          const SnapshotObserver& observer = {}, const StepMonitor& monitor = {});

}  // namespace prarefact::solver
