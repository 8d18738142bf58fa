// prarefact run <config>
// prarefact ineq --q <real> --grid <n> --samples <n> --seed <u64>

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "prarefact/config.hpp"
#include "prarefact/error.hpp"
#include "prarefact/ineq.hpp"
#include "prarefact/parallel.hpp"
#include "prarefact/runner.hpp"
#include "prarefact/snapshot_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Degenerate-viscosity conservation law laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
  run->add_option("config", config_path, "Path to a key = value config file")->required();

  double q = 1.0;
  std::size_t grid = 200, samples = 1000000;
  std::uint64_t seed = 0;
  auto* ineq_cmd = app.add_subcommand("ineq", "Estimate the lower-bound constant and sweep the inequality invariants");
  ineq_cmd->add_option("--q", q, "Exponent q >= 1")->required();
  ineq_cmd->add_option("--grid", grid, "Grid density of the constant search (>= 16)");
  ineq_cmd->add_option("--samples", samples, "Random samples per invariant");
  ineq_cmd->add_option("--seed", seed, "Generator seed");

  CLI11_PARSE(app, argc, argv);

  try {
    prarefact::parallel::apply_thread_env();
    if (*run) {
      const auto config = prarefact::cli::load_config(config_path);
      return prarefact::cli::run_experiment(config, std::cerr);
    }
    const auto r = prarefact::ineq::validate_invariants(q, grid, samples, seed);
    using prarefact::io::format_double;
    std::cout << "q=" << format_double(r.estimate.q) << " c_hat=" << format_double(r.estimate.c_hat)
              << " argmin_alpha=" << format_double(r.estimate.argmin_alpha)
              << " argmin_beta=" << format_double(r.estimate.argmin_beta) << '\n';
    if (!r.all_ok()) {
      std::cerr << "invariant failure: ab2=" << r.ab2_ok << " ab1=" << r.ab1_ok << " h=" << r.h_ok << " f=" << r.f_ok
                << " g=" << r.g_ok << '\n';
      return 1;
    }
    return 0;
  } catch (const prarefact::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
