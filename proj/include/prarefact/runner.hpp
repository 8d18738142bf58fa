#pragma once

// Runs one configured experiment and writes its artifacts into out_dir:
//   series_<label>.csv   header "t,<label>", one row per record
//   fits.csv             label,exponent,theoretical,log_prefactor,rms_residual,window_lo,window_hi
//   report.txt           key=value lines, one line per check, final "status=pass|fail"
// Every number is written with 17 significant digits, so identical runs give identical bytes.

#include <iosfwd>
#include <string>
#include <vector>

#include "prarefact/config.hpp"
#include "prarefact/experiments.hpp"
#include "prarefact/fit.hpp"

namespace prarefact::cli {

/// Writes a two-column series file. Throws Error on I/O failure.
void emit_csv(const fit::DecaySeries& series, const std::string& path);
void emit_csv(const std::vector<experiments::LabeledFit>& fits, const std::string& path);

/// Experiment outcome without touching the disk.
experiments::ExperimentResult execute(const RunConfig& config, const experiments::SnapshotSink& sink = {});

/// Executes, writes the artifacts and returns the exit status: 0 iff every gated check passed.
/// Diagnostics go to `log`. Module errors propagate.
int run_experiment(const RunConfig& config, std::ostream& log);

}  // namespace prarefact::cli
