#include "prarefact/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "prarefact/error.hpp"
#include "prarefact/parallel.hpp"
#include "stencil.hpp"

namespace prarefact::solver {

void SolverParams::validate() const {
  if (!(m > 1.0)) throw DomainError("m must exceed 1");
  if (eps && !(*eps >= 0.0)) throw DomainError("eps must be >= 0");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) throw DomainError("cfl safety factor must lie in (0,1]");
  if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
  if (!std::is_sorted(snapshot_times.begin(), snapshot_times.end())) {
    throw DomainError("snapshot times must be sorted");
  }
  for (double t : snapshot_times) {
    if (!(t >= 0.0)) throw DomainError("snapshot times must be >= 0");
  }
}

PowerLaw::PowerLaw(double exponent) : exponent_(exponent), mode_(Mode::general) {
  if (exponent == 0.0) mode_ = Mode::zero;
  else if (exponent == 0.5) mode_ = Mode::half;
  else if (exponent == 0.25) mode_ = Mode::quarter;
  else if (exponent == 0.125) mode_ = Mode::eighth;
  else if (exponent == 1.0) mode_ = Mode::one;
}

namespace {

std::array<double, 3> inverse_spacing(const GridSpec& g) {
  std::array<double, 3> inv{0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim(); ++a) inv[static_cast<std::size_t>(a)] = 1.0 / g.dx(a);
  return inv;
}

}  // namespace

FaceGradients gradient_field(const Field& field, const ChannelGhosts* ghosts) {
  detail::Padded pad(field.grid);
  pad.load(field, ghosts);
  const auto inv = inverse_spacing(field.grid);
  FaceGradients out;
  out.max_magnitude2 = 0.0;
  for (int a = 0; a < field.grid.dim(); ++a) {
    FaceGradients::Axis ax;
    ax.shape = detail::face_shape(pad, a);
    const std::size_t nf = detail::face_count(ax.shape);
    ax.normal.assign(nf, 0.0);
    ax.magnitude2.assign(nf, 0.0);
    const double best = detail::for_each_face(pad, a, 0.0, [&](std::size_t face, std::size_t l, std::size_t r) {
      double normal = 0.0;
      const double g2 = detail::face_gradient2(pad, a, inv, l, r, normal);
      ax.normal[face] = normal;
      ax.magnitude2[face] = g2;
      return g2;
    });
    out.max_magnitude2 = std::max(out.max_magnitude2, best);
    out.axes.push_back(std::move(ax));
  }
  return out;
}

double cfl_dt_from_bounds(const GridSpec& grid, double m, double eps, double cfl_safety,
                          std::span<const double> lambda_max, double grad2_max) {
  double conv_rate = 0.0;
  for (int a = 0; a < grid.dim(); ++a) {
    conv_rate = std::max(conv_rate, 2.0 * lambda_max[static_cast<std::size_t>(a)] / grid.dx(a));
  }
  const double h = grid.min_dx();
  const double d_max = m * std::pow(grad2_max + eps * eps, 0.5 * (m - 1.0));
  const double diff_rate = 2.0 * grid.dim() * d_max / (h * h);
  const double rate = conv_rate + diff_rate;
  if (rate == 0.0) return cfl_safety * h * h;
  return cfl_safety / rate;
}

struct Evolver::Impl {
  GridSpec grid;
  FluxModel flux;
  double m;
  double eps;
  double eps2;
  double safety;
  PowerLaw diffusivity;
  detail::Padded pad;
  std::array<double, 3> inv_dx;
  std::vector<std::vector<double>> faces;
  std::array<std::size_t, 3> face_stride{0, 0, 0};
  std::array<std::array<int, 3>, 3> face_shape{};
  double stable = 0.0;
  double grad2_max = 0.0;
  bool prepared = false;

  Impl(const GridSpec& g, const FluxModel& f, const SolverParams& p)
      : grid(g),
        flux(f),
        m(p.m),
        eps(p.resolved_eps(g)),
        eps2(eps * eps),
        safety(p.cfl_safety),
        diffusivity(0.5 * (p.m - 1.0)),
        pad(g),
        inv_dx(inverse_spacing(g)) {
    for (int a = 0; a < g.dim(); ++a) {
      const auto s = detail::face_shape(pad, a);
      faces.emplace_back(detail::face_count(s), 0.0);
      face_shape[static_cast<std::size_t>(a)] = s;
      const std::array<std::size_t, 3> st{static_cast<std::size_t>(s[1]) * static_cast<std::size_t>(s[2]),
                                          static_cast<std::size_t>(s[2]), 1};
      face_stride[static_cast<std::size_t>(a)] = st[static_cast<std::size_t>(a)];
    }
  }

  double prepare(const Field& u, const ChannelGhosts* ghosts) {
    if (!(u.grid == grid)) throw GridMismatch("evolver: field grid differs from evolver grid");
    pad.load(u, ghosts);
    const std::size_t np = pad.data.size();
    const double* P = pad.data.data();
    const double umax = parallel::max_of(np, -std::numeric_limits<double>::infinity(),
                                         [P](std::size_t i) { return P[i]; });
    const double umin = -parallel::max_of(np, -std::numeric_limits<double>::infinity(),
                                          [P](std::size_t i) { return -P[i]; });

    grad2_max = 0.0;
    std::array<double, 3> lambda{0.0, 0.0, 0.0};
    for (int a = 0; a < grid.dim(); ++a) {
      lambda[static_cast<std::size_t>(a)] = flux.max_speed(a, umin, umax);
      double* F = faces[static_cast<std::size_t>(a)].data();
      const double best = detail::for_each_face(pad, a, 0.0, [&](std::size_t face, std::size_t l, std::size_t r) {
        const double ul = P[l];
        const double ur = P[r];
        double normal = 0.0;
        const double g2 = detail::face_gradient2(pad, a, inv_dx, l, r, normal);
        const double visc = diffusivity(g2 + eps2) * normal;
        const double speed = std::max(std::abs(flux.speed(a, ul)), std::abs(flux.speed(a, ur)));
        const double conv = 0.5 * (flux.value(a, ul) + flux.value(a, ur)) - 0.5 * speed * (ur - ul);
        F[face] = conv - visc;
        return g2;
      });
      grad2_max = std::max(grad2_max, best);
    }
    stable = cfl_dt_from_bounds(grid, m, eps, safety, std::span<const double>(lambda.data(), 3), grad2_max);
    prepared = true;
    return stable;
  }

  bool advance(Field& u, double dt) const {
    if (!prepared) throw Error("evolver: advance() called before prepare()");
    if (!(u.grid == grid)) throw GridMismatch("evolver: field grid differs from evolver grid");
    const int n0 = grid.cells(0), n1 = grid.cells(1), n2 = grid.cells(2);
    const int dim = grid.dim();
    double* U = u.values.data();
    int bad = 0;
#pragma omp parallel for schedule(static) reduction(+ : bad) if (u.size() >= parallel::kThreshold)
    for (int i0 = 0; i0 < n0; ++i0) {
      for (int i1 = 0; i1 < n1; ++i1) {
        for (int i2 = 0; i2 < n2; ++i2) {
          double acc = 0.0;
          for (int a = 0; a < dim; ++a) {
            const auto ka = static_cast<std::size_t>(a);
            const auto& fs = face_shape[ka];
            const std::size_t f = (static_cast<std::size_t>(i0) * static_cast<std::size_t>(fs[1]) + static_cast<std::size_t>(i1)) *
                                      static_cast<std::size_t>(fs[2]) +
                                  static_cast<std::size_t>(i2);
            const double* F = faces[ka].data();
            acc += (F[f + face_stride[ka]] - F[f]) * inv_dx[ka];
          }
          const std::size_t k = (static_cast<std::size_t>(i0) * static_cast<std::size_t>(n1) + static_cast<std::size_t>(i1)) *
                                    static_cast<std::size_t>(n2) +
                                static_cast<std::size_t>(i2);
          U[k] -= dt * acc;
          if (!std::isfinite(U[k])) ++bad;
        }
      }
    }
    return bad == 0;
  }
};

Evolver::Evolver(const GridSpec& grid, const FluxModel& flux, const SolverParams& params) {
  params.validate();
  impl_ = std::make_unique<Impl>(grid, flux, params);
}
Evolver::~Evolver() = default;
Evolver::Evolver(Evolver&&) noexcept = default;
Evolver& Evolver::operator=(Evolver&&) noexcept = default;

double Evolver::prepare(const Field& u, const ChannelGhosts* ghosts) { return impl_->prepare(u, ghosts); }
bool Evolver::advance(Field& u, double dt) const { return impl_->advance(u, dt); }
double Evolver::stable_dt() const noexcept { return impl_->stable; }
double Evolver::max_gradient2() const noexcept { return impl_->grad2_max; }
const GridSpec& Evolver::grid() const noexcept { return impl_->grid; }

double cfl_dt(const Field& field, const FluxModel& flux, const SolverParams& params, const ChannelGhosts* ghosts) {
  Evolver ev(field.grid, flux, params);
  return ev.prepare(field, ghosts);
}

Field step(const Field& field, const FluxModel& flux, const SolverParams& params, double dt,
           const ChannelGhosts* ghosts) {
  Evolver ev(field.grid, flux, params);
  const double bound = ev.prepare(field, ghosts);
  if (!(dt > 0.0) || dt > bound * (1.0 + 1e-12)) {
    throw CflViolation("step size " + std::to_string(dt) + " exceeds the stability bound " + std::to_string(bound));
  }
  Field out = field;
  if (!ev.advance(out, dt)) throw NumericalBlowup(1, dt, "single step");
  return out;
}

IntegrateResult integrate(const Field& field0, const FluxModel& flux, const SolverParams& params,
                          const SnapshotObserver& observer, const StepMonitor& monitor) {
  params.validate();
  Evolver ev(field0.grid, flux, params);
  IntegrateResult res{field0, {}, 0};
  Field& u = res.final_field;

  std::vector<double> snaps;
  for (double t : params.snapshot_times) {
    if (t <= params.t_end && (snaps.empty() || t > snaps.back())) snaps.push_back(t);
  }
  std::size_t next = 0;
  auto emit_due = [&](double t) {
    while (next < snaps.size() && snaps[next] <= t) {
      if (observer) observer(snaps[next], u);
      res.snapshots.push_back({snaps[next], u});
      ++next;
    }
  };

  double t = 0.0;
  emit_due(t);
  while (t < params.t_end) {
    double dt = ev.prepare(u);
    const double target = next < snaps.size() ? std::min(snaps[next], params.t_end) : params.t_end;
    double t_new = t + dt;
    if (t_new >= target) {
      dt = target - t;
      t_new = target;
    }
    const bool ok = ev.advance(u, dt);
    ++res.steps;
    if (!ok) throw NumericalBlowup(res.steps, t_new, "solution left the finite range");
    t = t_new;
    if (monitor) monitor(res.steps, t, dt, u);
    emit_due(t);
  }
  return res;
}

}  // namespace prarefact::solver
