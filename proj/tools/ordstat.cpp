#include <iostream>

#include <CLI11.hpp>

#include "ordstat/cli.hpp"

int main(int argc, char** argv) {
  using namespace ordstat::cli;

  CLI::App app{"Second-order statistics of MPHR samples: survival, hazard and stochastic-order checks"};
  app.require_subcommand(1);

  GlobalOptions options;
  std::size_t grid_points = 0;
  double u_min = 0.0;
  std::string out_dir;
  auto* points_opt = app.add_option("--grid-points", grid_points, "number of grid points in u")
                         ->check(CLI::Range(std::size_t{50}, std::size_t{1000000}));
  auto* umin_opt = app.add_option("--u-min", u_min, "smallest grid u (x = -ln u)")->check(CLI::Range(1e-300, 0.999));
  auto* out_opt = app.add_option("--out-dir", out_dir, "output directory (default $ORDSTAT_OUT or ./ordstat_out)");

  int example_id = 0;
  auto* reproduce = app.add_subcommand("reproduce", "reproduce one of the four worked examples");
  reproduce->add_option("example", example_id, "example id")->required()->check(CLI::Range(1, 4));

  std::string scenario_path;
  auto* compare = app.add_subcommand("compare", "compare the two sides of a scenario file");
  compare->add_option("scenario", scenario_path, "scenario JSON file")->required();

  int oracle_n = 4;
  int trials = 200;
  std::uint64_t seed = 1;
  std::vector<std::string> generators;
  auto* oracle = app.add_subcommand("oracle-check", "closed form against the inclusion-exclusion oracle");
  oracle->add_option("--n", oracle_n, "sample size (2..10)")->check(CLI::Range(2, 10));
  oracle->add_option("--trials", trials, "random specifications")->check(CLI::PositiveNumber);
  oracle->add_option("--seed", seed, "random seed");
  oracle->add_option("--generator", generators, "restrict to these generators (repeatable)");

  std::size_t replications = 100000;
  std::uint64_t sim_seed = 1;
  std::string sim_path;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo check of an independent scenario");
  simulate->add_option("scenario", sim_path, "scenario JSON file")->required();
  simulate->add_option("--replications", replications, "replications per side")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim_seed, "random seed");

  std::string csv_path;
  auto* plot = app.add_subcommand("plot", "re-render the SVG plot of a curves CSV");
  plot->add_option("csv", csv_path, "curves CSV file")->required();

  int export_id = 0;
  auto* exporter = app.add_subcommand("export-example", "print a worked example as a scenario file");
  exporter->add_option("example", export_id, "example id")->required()->check(CLI::Range(1, 4));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  if (points_opt->count()) options.grid_points = grid_points;
  if (umin_opt->count()) options.u_min = u_min;
  if (out_opt->count()) options.out_dir = out_dir;

  if (*reproduce) return cmd_reproduce(example_id, options, std::cout, std::cerr);
  if (*compare) return cmd_compare(scenario_path, options, std::cout, std::cerr);
  if (*oracle) return cmd_oracle_check(oracle_n, trials, seed, generators, std::cout, std::cerr);
  if (*simulate) return cmd_simulate(sim_path, replications, sim_seed, options, std::cout, std::cerr);
  if (*plot) return cmd_plot(csv_path, options, std::cout, std::cerr);
  if (*exporter) return cmd_export_example(export_id, options, std::cout, std::cerr);
  return kExitParse;
}
