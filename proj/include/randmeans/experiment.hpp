#ifndef RANDMEANS_EXPERIMENT_HPP
#define RANDMEANS_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "randmeans/limit_sim.hpp"
#include "randmeans/mean.hpp"
#include "randmeans/random_mean.hpp"

namespace randmeans {

enum class Command { rho, expectation, slln, clt, power_limit, limit_law };

std::string to_string(Command c); // hyphenated config names, e.g. "power-limit"

enum class TableFormat { csv, json };

enum class MethodChoice { automatic, closed_form, quadrature, monte_carlo };

// One experiment: a command plus everything needed to run it.  Parsed
// from a JSON config; defaults are command-appropriate (n = 10^4,
// R = 2000, grid 101 points/axis for p = 2 and 31 otherwise, grid
// interval/arity inherited from the spec when present).
struct ExperimentConfig {
  Command command = Command::rho;
  SimConfig sim;
  std::optional<RandomMeanSpec> spec;   // all commands except rho
  std::optional<MeanExpr> mean1, mean2; // rho only
  MethodChoice method = MethodChoice::automatic; // expectation only
  int quadrature_nodes = 64;                     // expectation only
  std::string output_dir = "out";
  TableFormat format = TableFormat::csv;
};

// Command-line overrides, applied after parsing and echoed under
// "overrides" in the summary for provenance.
struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> grid_points;
  std::optional<long long> n;
  std::optional<int> replicates;
  std::optional<std::string> output_dir;
};

ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

// Runs the experiment and writes artifacts into output_dir:
// summary.json always (command, seed, grid, n, replicates, echoed spec,
// applied overrides, results, checks with their thresholds, overall
// pass); a results table plus, for two-sample comparisons, a reference
// table, as CSV or JSON per config.format.  Output is byte-identical
// across reruns of the same effective config.
//
// Returns 0 when every statistical check passes and 3 when at least one
// fails (artifacts are still written).  Operational problems throw
// Error: parse/invalid map to exit 2 at the CLI, I/O failures to 4.
int run_experiment(const ExperimentConfig& config,
                   const RunOverrides& overrides = {});

int run_experiment_file(const std::string& config_path,
                        const RunOverrides& overrides = {});
int run_experiment_json(const std::string& config_text,
                        const RunOverrides& overrides = {});

} // namespace randmeans

#endif
