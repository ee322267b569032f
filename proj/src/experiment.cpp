#include "randmeans/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "randmeans/errors.hpp"
#include "randmeans/expectation.hpp"
#include "randmeans/metric.hpp"
#include "json_internal.hpp"

namespace randmeans {

namespace {

namespace fs = std::filesystem;
using jsonio::json;

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Check {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool pass = true;
};

struct Row {
  long long replicate = 0;
  long long n = 0;
  double value = 0.0;
};

// Everything a command produces before anything touches the filesystem.
struct Artifacts {
  json results = json::object();
  std::vector<Check> checks;
  std::optional<std::vector<Row>> rows;
  std::optional<std::vector<Row>> reference;
  std::optional<std::pair<GridSpec, std::vector<double>>> node_table;
};

const RandomMeanSpec& need_spec(const ExperimentConfig& cfg) {
  if (!cfg.spec)
    fail(ErrorCode::invalid,
         "config: command '" + to_string(cfg.command) + "' needs a spec");
  return *cfg.spec;
}

std::vector<Row> sample_rows(const EmpiricalSample& s, long long n) {
  std::vector<Row> rows(s.size());
  for (std::size_t r = 0; r < s.size(); ++r)
    rows[r] = Row{static_cast<long long>(r), n, s.values()[r]};
  return rows;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Scale of the half-normal limit law when one is available in closed
// form: sup|m1 - m2| * sd(indicator) for two-atom mixtures, diam(I) *
// sd(xi) for two-argument weighted arithmetic means.
std::optional<double> closed_form_limit_sigma(const RandomMeanSpec& spec,
                                              const GridSpec& g) {
  if (const auto* dm = std::get_if<DiscreteMixtureSpec>(&spec.node())) {
    if (dm->means.size() != 2) return std::nullopt;
    const double q = mixture_probs(*dm).front();
    return rho(dm->means[0], dm->means[1], g) * std::sqrt(q * (1.0 - q));
  }
  if (const auto* wa = std::get_if<WeightedArithmeticSpec>(&spec.node())) {
    if (wa->p != 2) return std::nullopt;
    const VectorMoments m = moments(wa->weight_dist);
    return spec.interval().diameter() * std::sqrt(m.cov.at(0, 0));
  }
  return std::nullopt;
}

Artifacts run_rho(const ExperimentConfig& cfg) {
  if (!cfg.mean1 || !cfg.mean2)
    fail(ErrorCode::invalid, "config: command 'rho' needs mean1 and mean2");
  Artifacts a;
  a.results["rho"] = rho(*cfg.mean1, *cfg.mean2, cfg.sim.grid);
  return a;
}

Artifacts run_expectation(const ExperimentConfig& cfg) {
  const RandomMeanSpec& spec = need_spec(cfg);
  const GridSpec& g = cfg.sim.grid;
  std::optional<ExpectationResult> er;
  switch (cfg.method) {
    case MethodChoice::automatic:
      er = closed_form_expectation(spec);
      if (!er) er = quadrature_expectation(spec, g, cfg.quadrature_nodes);
      break;
    case MethodChoice::closed_form:
      er = closed_form_expectation(spec);
      if (!er)
        fail(ErrorCode::unsupported,
             "no closed-form expectation is known for this spec");
      break;
    case MethodChoice::quadrature:
      er = quadrature_expectation(spec, g, cfg.quadrature_nodes);
      break;
    case MethodChoice::monte_carlo: {
      RngStream rng(cfg.sim.seed, 0);
      er = monte_carlo_expectation(spec, g, cfg.sim.n, rng);
      break;
    }
  }
  const double violation = check_is_mean(*er, g);
  Artifacts a;
  a.results["method"] = to_string(er->method);
  a.results["error_estimate"] = er->error_estimate;
  a.results["internality_violation"] = violation;
  a.checks.push_back(
      Check{"internality_zero", violation, 0.0, violation <= 0.0});
  a.node_table = std::make_pair(g, tabulate(er->mean, g));
  return a;
}

Artifacts run_slln(ExperimentConfig& cfg) {
  const RandomMeanSpec& spec = need_spec(cfg);
  if (cfg.sim.n_schedule.empty()) cfg.sim.n_schedule = {100, 1000, 10000};
  const TrajectoryTable table = spec.averages_geometrically()
                                    ? power_deviation_trajectory(spec, cfg.sim)
                                    : slln_trajectory(spec, cfg.sim);
  Artifacts a;
  std::vector<Row> rows;
  rows.reserve(table.values.size() * table.schedule.size());
  for (std::size_t r = 0; r < table.values.size(); ++r)
    for (std::size_t j = 0; j < table.schedule.size(); ++j)
      rows.push_back(Row{static_cast<long long>(r), table.schedule[j],
                         table.values[r][j]});
  a.rows = std::move(rows);

  std::vector<double> medians(table.schedule.size());
  for (std::size_t j = 0; j < table.schedule.size(); ++j) {
    std::vector<double> column(table.values.size());
    for (std::size_t r = 0; r < table.values.size(); ++r)
      column[r] = table.values[r][j];
    medians[j] = median(std::move(column));
  }
  a.results["statistic"] = spec.averages_geometrically()
                               ? "abs_exponent_deviation"
                               : "kappa";
  a.results["schedule"] = table.schedule;
  a.results["medians"] = medians;
  // Degenerate specs sit at 0 for every n; that satisfies the strong law
  // trivially, so the trend check does not reject them.
  const bool degenerate = medians.front() == 0.0 && medians.back() == 0.0;
  const bool pass = degenerate || medians.back() < medians.front();
  a.checks.push_back(Check{"median_trend_decreasing",
                           medians.back() - medians.front(), 0.0, pass});
  return a;
}

Artifacts run_clt(const ExperimentConfig& cfg) {
  const RandomMeanSpec& spec = need_spec(cfg);
  const EmpiricalSample emp = clt_sample(spec, cfg.sim);
  Artifacts a;
  a.rows = sample_rows(emp, cfg.sim.n);
  a.results["empirical_mean"] = emp.mean();
  a.results["empirical_stddev"] = emp.stddev();
  const std::optional<double> sigma =
      closed_form_limit_sigma(spec, cfg.sim.grid);
  if (sigma) {
    const double ks = ks_against_cdf(
        emp, [s = *sigma](double x) { return half_normal_cdf(s, x); });
    a.results["limit_sigma"] = *sigma;
    a.results["ks"] = ks;
    a.checks.push_back(Check{"ks_vs_closed_form_limit", ks, 0.05, ks <= 0.05});
  } else {
    const EmpiricalSample theo = limit_law_sample(spec, cfg.sim);
    a.reference = sample_rows(theo, cfg.sim.n);
    const double ks = ks_distance(emp, theo);
    a.results["ks"] = ks;
    a.checks.push_back(Check{"ks_vs_limit_law_sample", ks, 0.05, ks <= 0.05});
  }
  return a;
}

Artifacts run_limit_law(const ExperimentConfig& cfg) {
  const RandomMeanSpec& spec = need_spec(cfg);
  const EmpiricalSample theo = limit_law_sample(spec, cfg.sim);
  Artifacts a;
  a.rows = sample_rows(theo, cfg.sim.n);
  a.results["sample_mean"] = theo.mean();
  a.results["sample_stddev"] = theo.stddev();

  if (const auto* dm = std::get_if<DiscreteMixtureSpec>(&spec.node());
      dm && dm->means.size() == 2) {
    // Generic sup-based sampler against the two-atom closed form.
    const EmpiricalSample closed = two_atom_limit_closed_form(spec, cfg.sim);
    a.reference = sample_rows(closed, cfg.sim.n);
    const double ks = ks_distance(theo, closed);
    a.results["ks"] = ks;
    a.checks.push_back(
        Check{"ks_generic_vs_closed_form", ks, 0.04, ks <= 0.04});
  } else if (const auto* wp = std::get_if<WeightedPowerSpec>(&spec.node())) {
    const double sigma_ln = std::log(spec.interval().hi / spec.interval().lo) *
                            std::sqrt(moments(wp->exponent_dist).var);
    std::vector<double> logs(theo.size());
    for (std::size_t i = 0; i < theo.size(); ++i)
      logs[i] = std::log(theo.values()[i]);
    const EmpiricalSample ln_sample(std::move(logs), theo.seed(),
                                    theo.stream_begin());
    const double ks = ks_against_cdf(ln_sample, [=](double x) {
      return half_normal_cdf(sigma_ln, x);
    });
    a.results["log_limit_sigma"] = sigma_ln;
    a.results["ks"] = ks;
    a.checks.push_back(Check{"ks_log_vs_closed_form", ks, 0.05, ks <= 0.05});
  } else if (const std::optional<double> sigma =
                 closed_form_limit_sigma(spec, cfg.sim.grid)) {
    const double ks = ks_against_cdf(
        theo, [s = *sigma](double x) { return half_normal_cdf(s, x); });
    a.results["limit_sigma"] = *sigma;
    a.results["ks"] = ks;
    a.checks.push_back(Check{"ks_vs_closed_form_limit", ks, 0.05, ks <= 0.05});
  }
  return a;
}

Artifacts run_power_limit(const ExperimentConfig& cfg) {
  const RandomMeanSpec& spec = need_spec(cfg);
  const PowerLimitSamples samples = power_limit_sample(spec, cfg.sim);
  const auto* wp = std::get_if<WeightedPowerSpec>(&spec.node());
  const double sigma_ln = std::log(spec.interval().hi / spec.interval().lo) *
                          std::sqrt(moments(wp->exponent_dist).var);
  std::vector<double> logs(samples.empirical.size());
  for (std::size_t i = 0; i < samples.empirical.size(); ++i)
    logs[i] = std::log(samples.empirical.values()[i]);
  const EmpiricalSample ln_emp(std::move(logs), samples.empirical.seed(),
                               samples.empirical.stream_begin());
  const double ks = ks_against_cdf(
      ln_emp, [=](double x) { return half_normal_cdf(sigma_ln, x); });

  Artifacts a;
  a.rows = sample_rows(samples.empirical, cfg.sim.n);
  a.reference = sample_rows(samples.theoretical, cfg.sim.n);
  a.results["empirical_mean"] = samples.empirical.mean();
  a.results["log_limit_sigma"] = sigma_ln;
  a.results["ks"] = ks;
  a.checks.push_back(Check{"ks_log_vs_closed_form", ks, 0.05, ks <= 0.05});
  return a;
}

Artifacts dispatch(ExperimentConfig& cfg) {
  switch (cfg.command) {
    case Command::rho: return run_rho(cfg);
    case Command::expectation: return run_expectation(cfg);
    case Command::slln: return run_slln(cfg);
    case Command::clt: return run_clt(cfg);
    case Command::limit_law: return run_limit_law(cfg);
    case Command::power_limit: return run_power_limit(cfg);
  }
  fail(ErrorCode::invalid, "config: unknown command");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    fail(ErrorCode::io, "cannot open '" + path.string() + "' for writing");
  out << content;
  out.flush();
  if (!out) fail(ErrorCode::io, "failed writing '" + path.string() + "'");
}

std::string rows_to_csv(const std::vector<Row>& rows) {
  std::string out = "replicate,n,value\n";
  for (const Row& r : rows) {
    out += std::to_string(r.replicate);
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += g17(r.value);
    out += '\n';
  }
  return out;
}

json rows_to_json(const std::vector<Row>& rows) {
  json arr = json::array();
  for (const Row& r : rows)
    arr.push_back(
        json{{"replicate", r.replicate}, {"n", r.n}, {"value", r.value}});
  return arr;
}

std::string node_table_to_csv(const GridSpec& g,
                              const std::vector<double>& values) {
  std::string out;
  for (int axis = 1; axis <= g.p; ++axis) {
    out += 'x';
    out += std::to_string(axis);
    out += ',';
  }
  out += "value\n";
  for_each_node(g, [&](std::size_t index, std::span<const double> x) {
    for (double c : x) {
      out += g17(c);
      out += ',';
    }
    out += g17(values[index]);
    out += '\n';
  });
  return out;
}

json node_table_to_json(const GridSpec& g, const std::vector<double>& values) {
  json arr = json::array();
  for_each_node(g, [&](std::size_t index, std::span<const double> x) {
    json row = json::object();
    for (std::size_t axis = 0; axis < x.size(); ++axis)
      row["x" + std::to_string(axis + 1)] = x[axis];
    row["value"] = values[index];
    arr.push_back(std::move(row));
  });
  return arr;
}

void write_table(const fs::path& dir, const char* stem, TableFormat format,
                 const std::vector<Row>& rows) {
  if (format == TableFormat::csv)
    write_file(dir / (std::string(stem) + ".csv"), rows_to_csv(rows));
  else
    write_file(dir / (std::string(stem) + ".json"),
               rows_to_json(rows).dump(2) + "\n");
}

Command command_from_string(const std::string& s) {
  if (s == "rho") return Command::rho;
  if (s == "expectation") return Command::expectation;
  if (s == "slln") return Command::slln;
  if (s == "clt") return Command::clt;
  if (s == "power-limit") return Command::power_limit;
  if (s == "limit-law") return Command::limit_law;
  fail(ErrorCode::parse, "config: unknown command '" + s + "'");
}

} // namespace

std::string to_string(Command c) {
  switch (c) {
    case Command::rho: return "rho";
    case Command::expectation: return "expectation";
    case Command::slln: return "slln";
    case Command::clt: return "clt";
    case Command::power_limit: return "power-limit";
    case Command::limit_law: return "limit-law";
  }
  return "unknown";
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  const json j = jsonio::parse_text(json_text);
  ExperimentConfig cfg;
  cfg.command = command_from_string(jsonio::require_string(j, "command", "config"));

  switch (cfg.command) {
    case Command::rho:
      jsonio::check_keys(j,
                         {"command", "seed", "grid", "output_dir", "format",
                          "mean1", "mean2"},
                         "config");
      break;
    case Command::expectation:
      jsonio::check_keys(j,
                         {"command", "seed", "grid", "output_dir", "format",
                          "spec", "n", "method", "quadrature_nodes"},
                         "config");
      break;
    case Command::slln:
      jsonio::check_keys(j,
                         {"command", "seed", "grid", "output_dir", "format",
                          "spec", "n", "replicates", "n_schedule"},
                         "config");
      break;
    default:
      jsonio::check_keys(j,
                         {"command", "seed", "grid", "output_dir", "format",
                          "spec", "n", "replicates"},
                         "config");
      break;
  }

  cfg.sim.seed = jsonio::get_uint64(j, "seed", 42, "config");
  cfg.sim.n = jsonio::get_int(j, "n", 10000, "config");
  cfg.sim.replicates =
      static_cast<int>(jsonio::get_int(j, "replicates", 2000, "config"));
  if (j.contains("n_schedule")) {
    const json& sched = j.at("n_schedule");
    if (!sched.is_array())
      fail(ErrorCode::parse, "config: n_schedule must be an array of integers");
    for (const json& v : sched) {
      if (!v.is_number_integer())
        fail(ErrorCode::parse, "config: n_schedule must be an array of integers");
      cfg.sim.n_schedule.push_back(v.get<long long>());
    }
  }

  if (j.contains("spec")) cfg.spec = jsonio::spec_from(j.at("spec"));
  if (j.contains("mean1")) cfg.mean1 = jsonio::mean_from(j.at("mean1"));
  if (j.contains("mean2")) cfg.mean2 = jsonio::mean_from(j.at("mean2"));

  jsonio::GridDefaults defaults;
  if (cfg.spec) {
    defaults.interval = cfg.spec->interval();
    defaults.p = cfg.spec->arity();
  }
  if (j.contains("grid")) {
    cfg.sim.grid = jsonio::grid_from(j.at("grid"), defaults);
  } else if (cfg.spec) {
    cfg.sim.grid = GridSpec{cfg.spec->interval(), cfg.spec->arity(),
                            cfg.spec->arity() == 2 ? 101 : 31};
  } else {
    fail(ErrorCode::parse, "config: 'grid' is required when no spec is given");
  }

  if (j.contains("method")) {
    const std::string m = jsonio::require_string(j, "method", "config");
    if (m == "auto")
      cfg.method = MethodChoice::automatic;
    else if (m == "closed_form")
      cfg.method = MethodChoice::closed_form;
    else if (m == "quadrature")
      cfg.method = MethodChoice::quadrature;
    else if (m == "monte_carlo")
      cfg.method = MethodChoice::monte_carlo;
    else
      fail(ErrorCode::parse, "config: unknown method '" + m + "'");
  }
  cfg.quadrature_nodes =
      static_cast<int>(jsonio::get_int(j, "quadrature_nodes", 64, "config"));

  if (j.contains("output_dir"))
    cfg.output_dir = jsonio::require_string(j, "output_dir", "config");
  if (j.contains("format")) {
    const std::string f = jsonio::require_string(j, "format", "config");
    if (f == "csv")
      cfg.format = TableFormat::csv;
    else if (f == "json")
      cfg.format = TableFormat::json;
    else
      fail(ErrorCode::parse, "config: unknown format '" + f + "'");
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::parse, "cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

int run_experiment(const ExperimentConfig& config, const RunOverrides& overrides) {
  ExperimentConfig cfg = config;
  json applied = json::object();
  if (overrides.seed) {
    cfg.sim.seed = *overrides.seed;
    applied["seed"] = *overrides.seed;
  }
  if (overrides.grid_points) {
    cfg.sim.grid.points_per_axis = *overrides.grid_points;
    applied["grid_points"] = *overrides.grid_points;
  }
  if (overrides.n) {
    cfg.sim.n = *overrides.n;
    applied["n"] = *overrides.n;
  }
  if (overrides.replicates) {
    cfg.sim.replicates = *overrides.replicates;
    applied["replicates"] = *overrides.replicates;
  }
  // The output directory is applied but not echoed: it changes where the
  // artifacts land, not what the experiment computes, and the summary of
  // one experiment must not depend on its destination.
  if (overrides.output_dir) cfg.output_dir = *overrides.output_dir;
  cfg.sim.grid.validate();
  if (cfg.sim.n < 1) fail(ErrorCode::invalid, "config: n must be >= 1");
  if (cfg.sim.replicates < 1)
    fail(ErrorCode::invalid, "config: replicates must be >= 1");
  if ((cfg.command == Command::clt || cfg.command == Command::limit_law ||
       cfg.command == Command::power_limit) &&
      cfg.sim.replicates < 2)
    fail(ErrorCode::invalid,
         "config: distributional comparisons need replicates >= 2");

  Artifacts art = dispatch(cfg);

  json summary;
  summary["command"] = to_string(cfg.command);
  summary["seed"] = cfg.sim.seed;
  summary["grid"] = jsonio::to(cfg.sim.grid);
  summary["n"] = cfg.sim.n;
  summary["replicates"] = cfg.sim.replicates;
  if (cfg.command == Command::slln) summary["n_schedule"] = cfg.sim.n_schedule;
  if (cfg.spec) summary["spec"] = jsonio::to(*cfg.spec);
  if (cfg.mean1) summary["mean1"] = jsonio::to(*cfg.mean1);
  if (cfg.mean2) summary["mean2"] = jsonio::to(*cfg.mean2);
  summary["format"] = cfg.format == TableFormat::csv ? "csv" : "json";
  summary["overrides"] = applied;
  summary["results"] = art.results;
  json checks = json::array();
  bool all_pass = true;
  for (const Check& c : art.checks) {
    checks.push_back(json{{"name", c.name},
                          {"value", c.value},
                          {"threshold", c.threshold},
                          {"pass", c.pass}});
    all_pass = all_pass && c.pass;
  }
  summary["checks"] = std::move(checks);
  summary["pass"] = all_pass;

  const fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    fail(ErrorCode::io,
         "cannot create output directory '" + dir.string() + "': " + ec.message());

  write_file(dir / "summary.json", summary.dump(2) + "\n");
  if (art.node_table) {
    const auto& [grid, values] = *art.node_table;
    if (cfg.format == TableFormat::csv)
      write_file(dir / "results.csv", node_table_to_csv(grid, values));
    else
      write_file(dir / "results.json",
                 node_table_to_json(grid, values).dump(2) + "\n");
  }
  if (art.rows) write_table(dir, "results", cfg.format, *art.rows);
  if (art.reference) write_table(dir, "reference", cfg.format, *art.reference);

  return all_pass ? 0 : 3;
}

int run_experiment_file(const std::string& config_path,
                        const RunOverrides& overrides) {
  return run_experiment(load_experiment_config(config_path), overrides);
}

int run_experiment_json(const std::string& config_text,
                        const RunOverrides& overrides) {
  return run_experiment(parse_experiment_config(config_text), overrides);
}

} // namespace randmeans
