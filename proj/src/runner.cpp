#include "prarefact/runner.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>

#include "prarefact/error.hpp"
#include "prarefact/flux.hpp"
#include "prarefact/ineq.hpp"
#include "prarefact/snapshot_io.hpp"

namespace prarefact::cli {

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open for writing: " + path);
  return out;
}

void finish(std::ofstream& out, const std::string& path) {
  out.flush();
  if (!out) throw Error("write failed: " + path);
}

Field perturbed(const GridSpec& grid, double mean, const waves::PerturbationSpec& p) {
  return Field::from_function(grid, [&](std::span<const double> x) { return mean + waves::perturbation_eval(p, x); });
}

experiments::ExperimentResult run_ineq(const RunConfig& c) {
  const auto r = ineq::validate_invariants(c.q, c.grid, c.samples, c.seed);
  experiments::ExperimentResult res;
  const auto& e = r.estimate;
  res.report.emplace_back("q", io::format_double(e.q));
  res.report.emplace_back("c_hat", io::format_double(e.c_hat));
  res.report.emplace_back("argmin_alpha", io::format_double(e.argmin_alpha));
  res.report.emplace_back("argmin_beta", io::format_double(e.argmin_beta));
  res.report.emplace_back("samples", std::to_string(r.samples));
  res.checks.push_back({"c_hat_positive", true, e.c_hat > 0.0, "c_hat=" + io::format_double(e.c_hat)});
  res.checks.push_back({"ab2_upper", true, r.ab2_ok, "max ratio=" + io::format_double(r.max_ab2_ratio)});
  res.checks.push_back({"ab1_lower", true, r.ab1_ok, "min ratio=" + io::format_double(r.min_ab1_ratio)});
  res.checks.push_back({"h_profile", true, r.h_ok, "max h-q=" + io::format_double(r.max_h_excess)});
  res.checks.push_back({"f_boundary_minimum", true, r.f_ok, "max gap=" + io::format_double(r.max_f_monotone_gap)});
  res.checks.push_back({"g_monotone", true, r.g_ok, "failures=" + std::to_string(r.g_monotone_failures)});
  return res;
}

}  // namespace

void emit_csv(const fit::DecaySeries& series, const std::string& path) {
  auto out = open_out(path);
  out << "t," << series.label << '\n';
  for (std::size_t i = 0; i < series.size(); ++i) {
    out << io::format_double(series.times[i]) << ',' << io::format_double(series.values[i]) << '\n';
  }
  finish(out, path);
}

void emit_csv(const std::vector<experiments::LabeledFit>& fits, const std::string& path) {
  auto out = open_out(path);
  out << "label,exponent,theoretical,log_prefactor,rms_residual,window_lo,window_hi\n";
  for (const auto& f : fits) {
    out << f.label << ',' << io::format_double(f.fit.exponent) << ',' << io::format_double(f.theoretical) << ','
        << io::format_double(f.fit.log_prefactor) << ',' << io::format_double(f.fit.rms_residual) << ','
        << io::format_double(f.fit.window_lo) << ',' << io::format_double(f.fit.window_hi) << '\n';
  }
  finish(out, path);
}

experiments::ExperimentResult execute(const RunConfig& c, const experiments::SnapshotSink& sink) {
  validate(c);
  switch (c.experiment) {
    case ExperimentKind::ode: return experiments::run_ode(c.c1, c.c2, c.alpha, c.beta);
    case ExperimentKind::ineq: return run_ineq(c);
    default: break;
  }
  const FluxModel flux = FluxModel::from_name(c.flux);
  const GridSpec grid = c.make_grid();
  const auto params = c.make_params();
  switch (c.experiment) {
    case ExperimentKind::periodic:
      return experiments::run_periodic_decay(flux, params, c.modes, c.mean, c.q_list, grid, sink);
    case ExperimentKind::rarefaction:
      return experiments::run_rarefaction_approach(flux, waves::WavePair::make(flux, c.u_minus, c.u_plus), params,
                                                   c.modes, c.r_list, grid, sink);
    case ExperimentKind::residual:
      return experiments::run_residual(flux, waves::WavePair::make(flux, c.u_minus, c.u_plus), params, c.modes,
                                       c.q_list, grid);
    case ExperimentKind::contraction:
      return experiments::l1_contraction_check(flux, params, perturbed(grid, c.mean, c.modes),
                                               perturbed(grid, c.mean, c.modes_v), sink);
    default: break;
  }
  throw Error("unhandled experiment kind");
}

int run_experiment(const RunConfig& c, std::ostream& log) {
  namespace fs = std::filesystem;
  fs::create_directories(c.out_dir);
  const fs::path dir(c.out_dir);

  experiments::SnapshotSink sink;
  std::size_t dumped = 0;
  if (c.dump_snapshots) {
    sink = [&](const std::string& tag, double t, const Field& f) {
      const std::string name = "snapshot_" + tag + "_" + std::to_string(dumped++) + ".txt";
      io::write_snapshot((dir / name).string(), t, f);
    };
  }
  const auto res = execute(c, sink);

  for (const auto& s : res.series) emit_csv(s, (dir / ("series_" + s.label + ".csv")).string());
  if (c.experiment != ExperimentKind::contraction && c.experiment != ExperimentKind::ineq &&
      c.experiment != ExperimentKind::ode) {
    emit_csv(res.fits, (dir / "fits.csv").string());
  }

  const std::string report_path = (dir / "report.txt").string();
  auto out = open_out(report_path);
  out << "experiment=" << to_string(c.experiment) << '\n';
  for (const auto& [k, v] : res.report) out << k << '=' << v << '\n';
  for (const auto& ch : res.checks) {
    out << "check=" << ch.name << " gated=" << (ch.gated ? "yes" : "no") << " result=" << (ch.passed ? "pass" : "fail")
        << ' ' << ch.detail << '\n';
  }
  for (const auto& n : res.notes) out << "note=" << n << '\n';
  const bool ok = res.gated_pass();
  out << "status=" << (ok ? "pass" : "fail") << '\n';
  finish(out, report_path);

  for (const auto& ch : res.checks) {
    if (ch.gated && !ch.passed) log << "check failed: " << ch.name << " (" << ch.detail << ")\n";
  }
  return ok ? 0 : 1;
}

}  // namespace prarefact::cli
