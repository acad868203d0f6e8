#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cellmech/cli.hpp"
#include "cellmech/config.hpp"
#include "cellmech/errors.hpp"
#include "cellmech/threads.hpp"
#include "cellmech/verification.hpp"

namespace {

struct Common {
  std::string config_path;
  int threads = 0;
  std::string output_dir;
  std::string preset;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config_path, "INI configuration file");
  sub->add_option("--threads", c.threads, "worker thread count")
      ->envname("CELLMECH_THREADS");
  sub->add_option("--output", c.output_dir, "output directory (overrides [output])");
  sub->add_option("--preset", c.preset, "named parameter set (replaces [params] values)");
}

cellmech::RunConfig load(const Common& c) {
  cellmech::RunConfig cfg;
  if (!c.config_path.empty()) cfg = cellmech::parse_config_file(c.config_path);
  if (!c.preset.empty()) {
    cellmech::ModelParams fresh = cellmech::params_preset(c.preset);
    cfg.params = fresh;
  }
  if (!c.output_dir.empty()) cfg.output.directory = c.output_dir;
  if (c.threads > 0) cellmech::set_thread_count(c.threads);
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coupled bulk-surface signalling and cell mechanics simulator"};
  app.require_subcommand(1);

  Common c_run, c_sweep, c_sens, c_bench, c_info;

  CLI::App* run = app.add_subcommand("run", "single simulation with snapshots and a time series");
  add_common(run, c_run);

  CLI::App* sweep = app.add_subcommand("sweep", "grid sweep over stiffness and feedback axes");
  add_common(sweep, c_sweep);

  CLI::App* sens =
      app.add_subcommand("sensitivity", "parameter perturbation study around the coupled baseline");
  add_common(sens, c_sens);

  CLI::App* bench = app.add_subcommand("benchmark", "convergence benchmark on the unit ball");
  add_common(bench, c_bench);
  cellmech::BenchmarkOptions bopt;
  bench->add_option("--levels", bopt.levels, "mesh refinement levels (at least two)");
  bench->add_option("--t-end", bopt.t_end, "benchmark time horizon");
  bench->add_option("--dt-factor", bopt.dt_factor, "time step scale: dt ~ factor * h^2");

  CLI::App* conv = app.add_subcommand("convert-units", "surface density unit conversion");
  std::vector<double> conv_values;
  bool from_counts = false;
  conv->add_option("values", conv_values, "densities to convert");
  conv->add_flag("--from-counts", from_counts,
                 "convert molecules/um^2 to umol/dm^2 (default is the reverse)");

  CLI::App* info = app.add_subcommand("mesh-info", "mesh statistics for the configured mesh");
  add_common(info, c_info);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      cellmech::cmd_run(load(c_run), std::cout);
    } else if (*sweep) {
      cellmech::cmd_sweep(load(c_sweep), std::cout);
    } else if (*sens) {
      cellmech::cmd_sensitivity(load(c_sens), std::cout);
    } else if (*bench) {
      cellmech::RunConfig cfg = load(c_bench);
      cellmech::cmd_benchmark(bopt, cfg.output.directory, std::cout);
    } else if (*conv) {
      cellmech::cmd_convert_units(conv_values, !from_counts, std::cout);
    } else if (*info) {
      cellmech::cmd_mesh_info(load(c_info), std::cout);
    }
  } catch (const cellmech::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
