// Command-line driver for random-mean experiments.  Thin wrapper over the
// C API: parses flags, runs one experiment config, maps statuses to exit
// codes (0 ok, 2 bad config/flags, 3 statistical check failed, 4 I/O).
#include <cstdint>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "randmeans.h"

namespace {

constexpr const char* kDescription =
    R"(Runs one experiment described by a JSON config file and writes
summary.json plus result tables (CSV or JSON) into the output directory.

The config's "command" field selects the experiment:
  rho          sup-metric distance between two means ("mean1", "mean2")
  expectation  expectation of a random mean, tabulated on the grid
               (closed form, quadrature, or Monte Carlo via "method")
  slln         strong-law trajectories: sup-distance of the running
               average to the expectation along "n_schedule"
  clt          replicated sqrt(n) * sup-distance statistic, compared
               against its distributional limit (KS check)
  limit-law    direct samples of the distributional limit, checked
               against the closed form where one is known
  power-limit  geometric-averaging limit for the weighted power family
               (sup-ratio statistic, log-domain KS check)

Statistical checks use fixed thresholds recorded in summary.json; exit
code 3 means the run finished but a check failed.)";

} // namespace

int main(int argc, char** argv) {
  CLI::App app{kDescription};
  app.name("randmeans");

  std::string config_path;
  app.add_option("config", config_path, "Path to the JSON experiment config")
      ->required();

  std::uint64_t seed = 0;
  auto* seed_opt =
      app.add_option("--seed", seed, "Override the RNG seed (64-bit unsigned)");
  int grid_points = 0;
  auto* grid_opt = app.add_option(
      "--grid", grid_points, "Override the number of grid points per axis");
  long long n = 0;
  auto* n_opt =
      app.add_option("--n", n, "Override the sample size per replicate");
  int replicates = 0;
  auto* rep_opt =
      app.add_option("--replicates", replicates, "Override the replicate count");
  std::string out_dir;
  auto* out_opt =
      app.add_option("--out", out_dir, "Override the output directory");

  app.set_version_flag("--version", std::string(rmn_version()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e); // --help / --version: prints and exits 0
  } catch (const CLI::ParseError& e) {
    app.exit(e); // prints the parse error
    return 2;
  }

  rmn_run_options opts{};
  if (*seed_opt) {
    opts.has_seed = 1;
    opts.seed = seed;
  }
  if (*grid_opt) {
    opts.has_grid_points = 1;
    opts.grid_points = grid_points;
  }
  if (*n_opt) {
    opts.has_n = 1;
    opts.n = n;
  }
  if (*rep_opt) {
    opts.has_replicates = 1;
    opts.replicates = replicates;
  }
  if (*out_opt) opts.output_dir = out_dir.c_str();

  const rmn_status status = rmn_run_experiment_file(config_path.c_str(), &opts);
  if (status != RMN_OK) std::fprintf(stderr, "randmeans: %s\n", rmn_last_error());
  return static_cast<int>(status);
}
