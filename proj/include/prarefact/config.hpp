#pragma once

// Line-oriented run configuration:
//
//   # comment
//   experiment = periodic
//   m = 1.5
//   cells = 1024
//   mode = 1;0.1;0          (wave vector; amplitude; phase, repeatable)
//
// Unknown keys, repeated scalar keys and malformed values are ParseErrors carrying the
// line number. Constraint violations are ValidationErrors, raised before any compute.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "prarefact/grid.hpp"
#include "prarefact/solver.hpp"
#include "prarefact/waves.hpp"

namespace prarefact::cli {

enum class ExperimentKind { ineq, periodic, rarefaction, contraction, residual, ode };

std::string to_string(ExperimentKind kind);

struct RunConfig {
  ExperimentKind experiment = ExperimentKind::ode;
  std::string flux = "burgers";
  double m = 1.5;
  int dim = 1;
  std::vector<int> cells;         ///< one entry per axis; a single entry is broadcast
  int cells_per_unit = 0;         ///< channel only: overrides cells[0] with 2 L cells_per_unit
  double L = 600.0;
  std::optional<double> eps;      ///< unset means "auto" (the grid spacing)
  double cfl = 0.9;
  double t_end = 1.0;
  int snapshot_count = 100;
  std::vector<double> snapshot_list;  ///< explicit recording times; overrides snapshot_count
  waves::PerturbationSpec modes;
  waves::PerturbationSpec modes_v;    ///< second data set of a contraction run
  double mean = 0.5;
  double u_minus = 0.0;
  double u_plus = 1.0;
  std::vector<double> q_list{2.0};
  std::vector<double> r_list{2.0, 6.0};
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  bool dump_snapshots = false;
  double c1 = 1.0, c2 = 1.0, alpha = 2.0, beta = 2.0;
  double q = 1.0;
  std::size_t grid = 200;
  std::size_t samples = 1000000;

  GridSpec make_grid() const;
  solver::SolverParams make_params() const;
};

/// Parses and validates. Throws ParseError or ValidationError.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Throws ValidationError naming the first violated constraint.
void validate(const RunConfig& config);

}  // namespace prarefact::cli
