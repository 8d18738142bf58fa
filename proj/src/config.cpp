#include "prarefact/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "prarefact/error.hpp"
#include "prarefact/experiments.hpp"
#include "prarefact/flux.hpp"

namespace prarefact::cli {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::ineq: return "ineq";
    case ExperimentKind::periodic: return "periodic";
    case ExperimentKind::rarefaction: return "rarefaction";
    case ExperimentKind::contraction: return "contraction";
    case ExperimentKind::residual: return "residual";
    case ExperimentKind::ode: return "ode";
  }
  return "unknown";
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_real(const std::string& s, std::size_t line) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != end || !std::isfinite(v)) {
    throw ParseError(line, "expected a real number, got '" + s + "'");
  }
  return v;
}

template <class Int>
Int to_int(const std::string& s, std::size_t line) {
  Int v{};
  const char* end = s.data() + s.size();
  const auto r = std::from_chars(s.data(), end, v);
  if (s.empty() || r.ec != std::errc() || r.ptr != end) throw ParseError(line, "expected an integer, got '" + s + "'");
  return v;
}

std::vector<double> to_reals(const std::string& s, std::size_t line) {
  std::vector<double> out;
  for (const auto& item : split(s, ',')) out.push_back(to_real(item, line));
  if (out.empty()) throw ParseError(line, "empty list");
  return out;
}

bool to_bool(const std::string& s, std::size_t line) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ParseError(line, "expected true or false, got '" + s + "'");
}

waves::Mode to_mode(const std::string& s, std::size_t line) {
  const auto parts = split(s, ';');
  if (parts.size() < 2 || parts.size() > 3) throw ParseError(line, "mode must read 'k1,k2,..;amplitude;phase'");
  waves::Mode m;
  const auto ks = split(parts[0], ',');
  if (ks.empty() || ks.size() > 3) throw ParseError(line, "mode wave vector needs 1 to 3 integers");
  for (std::size_t a = 0; a < ks.size(); ++a) m.k[a] = to_int<int>(ks[a], line);
  m.amplitude = to_real(parts[1], line);
  m.phase = parts.size() == 3 ? to_real(parts[2], line) : 0.0;
  return m;
}

ExperimentKind to_kind(const std::string& s, std::size_t line) {
  for (auto k : {ExperimentKind::ineq, ExperimentKind::periodic, ExperimentKind::rarefaction,
                 ExperimentKind::contraction, ExperimentKind::residual, ExperimentKind::ode}) {
    if (to_string(k) == s) return k;
  }
  throw ParseError(line, "unknown experiment '" + s + "'");
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

bool uses_channel(ExperimentKind k) { return k == ExperimentKind::rarefaction || k == ExperimentKind::residual; }

}  // namespace

GridSpec RunConfig::make_grid() const {
  std::vector<int> c = cells;
  if (c.empty()) c.push_back(uses_channel(experiment) ? 0 : 256);
  if (c.size() == 1) c.resize(static_cast<std::size_t>(dim), c.front());
  if (uses_channel(experiment)) {
    if (cells_per_unit > 0) c[0] = static_cast<int>(std::llround(2.0 * L * cells_per_unit));
    return GridSpec::channel(dim, c, L);
  }
  return GridSpec::torus(dim, c);
}

solver::SolverParams RunConfig::make_params() const {
  solver::SolverParams p;
  p.m = m;
  p.eps = eps;
  p.cfl_safety = cfl;
  p.t_end = t_end;
  p.snapshot_times = snapshot_list.empty() ? experiments::log_schedule(t_end, snapshot_count) : snapshot_list;
  return p;
}

void validate(const RunConfig& c) {
  const auto k = c.experiment;
  if (k == ExperimentKind::ode) {
    require(c.alpha > 1.0, "alpha must exceed 1");
    require(c.beta > 1.0, "beta must exceed 1");
    require(c.c1 >= 0.0 && c.c2 >= 0.0, "C1 and C2 must be >= 0");
    return;
  }
  if (k == ExperimentKind::ineq) {
    require(c.q >= 1.0, "q must be >= 1");
    require(c.grid >= 16, "grid must be >= 16");
    require(c.samples >= 1, "samples must be >= 1");
    return;
  }
  require(c.m > 1.0, "m must exceed 1");
  if (uses_channel(k)) require(c.m <= 1.5, "rarefaction experiment requires 1<m<=1.5");
  require(c.dim >= 1 && c.dim <= 3, "N must be 1, 2 or 3");
  require(c.cells.size() <= 1 || static_cast<int>(c.cells.size()) == c.dim, "cells needs one entry or N entries");
  require(!c.eps || *c.eps >= 0.0, "eps must be >= 0");
  require(c.cfl > 0.0 && c.cfl <= 1.0, "cfl must lie in (0,1]");
  require(c.t_end > 0.0, "t_end must be positive");
  require(c.snapshot_count >= 1, "snapshots must be >= 1");
  require(std::is_sorted(c.snapshot_list.begin(), c.snapshot_list.end()), "snapshot times must be sorted");
  require(std::all_of(c.snapshot_list.begin(), c.snapshot_list.end(), [](double t) { return t >= 0.0; }),
          "snapshot times must be >= 0");
  require(std::all_of(c.q_list.begin(), c.q_list.end(), [](double q) { return q >= 1.0; }), "q_list entries must be >= 1");
  require(std::all_of(c.r_list.begin(), c.r_list.end(), [](double r) { return r >= 2.0; }), "r_list entries must be >= 2");
  if (uses_channel(k)) {
    require(c.u_minus < c.u_plus, "u_minus must be below u_plus");
    require(c.L > 0.0, "L must be positive");
    require(c.cells_per_unit > 0 || !c.cells.empty(), "channel runs need cells or cells_per_unit");
  }
  if (k != ExperimentKind::contraction) require(c.modes_v.empty(), "mode_v only applies to contraction runs");

  try {
    const FluxModel flux = FluxModel::from_name(c.flux);
    const GridSpec g = c.make_grid();
    c.modes.validate(c.dim);
    c.modes_v.validate(c.dim);
    if (uses_channel(k)) {
      experiments::require_channel_geometry(g, waves::WavePair::make(flux, c.u_minus, c.u_plus), c.t_end);
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const Error& e) {
    throw ValidationError(e.what());
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::set<std::string> seen;
  bool have_experiment = false;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (val.empty()) throw ParseError(lineno, "missing value for '" + key + "'");
    const bool repeatable = key == "mode" || key == "mode_v";
    if (!repeatable && !seen.insert(key).second) throw ParseError(lineno, "duplicate key '" + key + "'");

    if (key == "experiment") {
      c.experiment = to_kind(val, lineno);
      have_experiment = true;
    } else if (key == "flux") {
      if (val != "burgers" && val != "quartic") throw ParseError(lineno, "unknown flux '" + val + "'");
      c.flux = val;
    } else if (key == "m") c.m = to_real(val, lineno);
    else if (key == "N") c.dim = to_int<int>(val, lineno);
    else if (key == "cells") {
      c.cells.clear();
      for (const auto& s : split(val, ',')) c.cells.push_back(to_int<int>(s, lineno));
    } else if (key == "cells_per_unit") c.cells_per_unit = to_int<int>(val, lineno);
    else if (key == "L") c.L = to_real(val, lineno);
    else if (key == "eps") c.eps = val == "auto" ? std::nullopt : std::optional<double>(to_real(val, lineno));
    else if (key == "cfl") c.cfl = to_real(val, lineno);
    else if (key == "t_end") c.t_end = to_real(val, lineno);
    else if (key == "snapshots") {
      if (val.find_first_of(",.eE") == std::string::npos) c.snapshot_count = to_int<int>(val, lineno);
      else c.snapshot_list = to_reals(val, lineno);
    } else if (key == "mode") c.modes.modes.push_back(to_mode(val, lineno));
    else if (key == "mode_v") c.modes_v.modes.push_back(to_mode(val, lineno));
    else if (key == "mean") c.mean = to_real(val, lineno);
    else if (key == "u_minus") c.u_minus = to_real(val, lineno);
    else if (key == "u_plus") c.u_plus = to_real(val, lineno);
    else if (key == "q_list") c.q_list = to_reals(val, lineno);
    else if (key == "r_list") c.r_list = to_reals(val, lineno);
    else if (key == "seed") c.seed = to_int<std::uint64_t>(val, lineno);
    else if (key == "out_dir") c.out_dir = val;
    else if (key == "dump_snapshots") c.dump_snapshots = to_bool(val, lineno);
    else if (key == "C1") c.c1 = to_real(val, lineno);
    else if (key == "C2") c.c2 = to_real(val, lineno);
    else if (key == "alpha") c.alpha = to_real(val, lineno);
    else if (key == "beta") c.beta = to_real(val, lineno);
    else if (key == "q") c.q = to_real(val, lineno);
    else if (key == "grid") c.grid = to_int<std::size_t>(val, lineno);
    else if (key == "samples") c.samples = to_int<std::size_t>(val, lineno);
    else throw ParseError(lineno, "unknown key '" + key + "'");
  }
  if (!have_experiment) throw ValidationError("missing required key 'experiment'");
  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace prarefact::cli
