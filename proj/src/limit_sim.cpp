#include "randmeans/limit_sim.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

#include "randmeans/errors.hpp"
#include "randmeans/metric.hpp"

namespace randmeans {

namespace {

// Sufficient-statistic path engines.  Each engine consumes the random
// stream exactly as draw(spec, rng) would -- same uniforms, same order --
// but folds every draw into a small running statistic, so the sup
// distance after n draws costs one grid sweep instead of n evaluations.
class PathEngine {
public:
  virtual ~PathEngine() = default;
  virtual void reset() = 0;
  virtual void push(RngStream& rng) = 0;
  // sup-distance between the average of the first n pushed draws and the
  // expectation, over the engine's grid.
  virtual double distance(long long n) const = 0;
};

class DiscreteMixtureEngine final : public PathEngine {
public:
  DiscreteMixtureEngine(const DiscreteMixtureSpec& s, const GridSpec& g)
      : probs_(mixture_probs(s)), counts_(probs_.size(), 0) {
    tables_.reserve(s.means.size());
    for (const MeanExpr& m : s.means) tables_.push_back(tabulate(m, g));
  }

  void reset() override { std::fill(counts_.begin(), counts_.end(), 0LL); }

  void push(RngStream& rng) override {
    // Mirrors the finite-discrete sampler: one uniform, cumulative scan.
    double u = rng.uniform01();
    std::size_t i = 0;
    for (; i + 1 < probs_.size(); ++i) {
      u -= probs_[i];
      if (u < 0.0) break;
    }
    ++counts_[i];
  }

  double distance(long long n) const override {
    std::vector<double> excess(probs_.size());
    for (std::size_t i = 0; i < probs_.size(); ++i)
      excess[i] = static_cast<double>(counts_[i]) / static_cast<double>(n) - probs_[i];
    double worst = 0.0;
    const std::size_t nodes = tables_.front().size();
    for (std::size_t t = 0; t < nodes; ++t) {
      // The excesses sum to zero, so a common reference can be subtracted
      // from every table; centering on the first one makes the collapse
      // of identical component means exact, not just tiny.
      double s = 0.0;
      for (std::size_t i = 1; i < excess.size(); ++i)
        s += excess[i] * (tables_[i][t] - tables_[0][t]);
      worst = std::max(worst, std::abs(s));
    }
    return worst;
  }

private:
  std::vector<double> probs_;
  std::vector<std::vector<double>> tables_; // tables_[i][node] = means[i](node)
  std::vector<long long> counts_;
};

class WeightedArithmeticEngine final : public PathEngine {
public:
  WeightedArithmeticEngine(const WeightedArithmeticSpec& s, const GridSpec& g)
      : dist_(s.weight_dist), mu_(moments(s.weight_dist).mean),
        sums_(mu_.size(), 0.0) {
    // S_n(x) - E(x) = sum_j (wbar_j - mu_j) (x_j - x_p): only the
    // coordinate differences enter, tabulated once.
    diff_tables_.assign(mu_.size(), std::vector<double>(g.node_count()));
    for_each_node(g, [&](std::size_t t, std::span<const double> x) {
      for (std::size_t j = 0; j < mu_.size(); ++j)
        diff_tables_[j][t] = x[j] - x[x.size() - 1];
    });
  }

  void reset() override { std::fill(sums_.begin(), sums_.end(), 0.0); }

  void push(RngStream& rng) override {
    const std::vector<double> w = sample(dist_, rng);
    for (std::size_t j = 0; j < sums_.size(); ++j) sums_[j] += w[j];
  }

  double distance(long long n) const override {
    std::vector<double> excess(sums_.size());
    for (std::size_t j = 0; j < sums_.size(); ++j)
      excess[j] = sums_[j] / static_cast<double>(n) - mu_[j];
    double worst = 0.0;
    const std::size_t nodes = diff_tables_.front().size();
    for (std::size_t t = 0; t < nodes; ++t) {
      double s = 0.0;
      for (std::size_t j = 0; j < excess.size(); ++j)
        s += excess[j] * diff_tables_[j][t];
      worst = std::max(worst, std::abs(s));
    }
    return worst;
  }

private:
  const VectorDist& dist_;
  std::vector<double> mu_;
  std::vector<std::vector<double>> diff_tables_;
  std::vector<double> sums_;
};

class HolderKernelEngine final : public PathEngine {
public:
  HolderKernelEngine(const RandomHolderSpec& s, const RandomMeanSpec& spec,
                     const GridSpec& g)
      : family_(s) {
    const auto closed = closed_form_expectation(spec);
    if (!closed)
      fail(ErrorCode::unsupported,
           "trajectory statistics for the kernel family need a weight law "
           "with a closed-form expectation");
    expect_ = tabulate(closed->mean, g);
    acc_.assign(expect_.size(), 0.0);
    nodes_.resize(2 * g.node_count());
    for_each_node(g, [&](std::size_t t, std::span<const double> x) {
      nodes_[2 * t] = x[0];
      nodes_[2 * t + 1] = x[1];
    });
  }

  void reset() override { std::fill(acc_.begin(), acc_.end(), 0.0); }

  void push(RngStream& rng) override {
    const double lambda = sample(family_.lambda_dist, rng);
    const MeanExpr kernel{PowerMean{family_.alpha0, lambda}};
    for (std::size_t t = 0; t < acc_.size(); ++t)
      acc_[t] += eval(kernel, {nodes_[2 * t], nodes_[2 * t + 1]});
  }

  double distance(long long n) const override {
    double worst = 0.0;
    for (std::size_t t = 0; t < acc_.size(); ++t)
      worst = std::max(worst,
                       std::abs(acc_[t] / static_cast<double>(n) - expect_[t]));
    return worst;
  }

private:
  const RandomHolderSpec& family_;
  std::vector<double> expect_;
  std::vector<double> acc_;
  std::vector<double> nodes_; // (x1, x2) per grid node
};

void check_grid_matches(const RandomMeanSpec& spec, const GridSpec& g) {
  if (g.p != spec.arity() || !(g.interval == spec.interval()))
    fail(ErrorCode::invalid,
         "simulation grid must match the spec's arity and interval");
}

std::unique_ptr<PathEngine> make_engine(const RandomMeanSpec& spec,
                                        const GridSpec& g) {
  check_grid_matches(spec, g);
  return std::visit(
      [&](const auto& s) -> std::unique_ptr<PathEngine> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiscreteMixtureSpec>) {
          return std::make_unique<DiscreteMixtureEngine>(s, g);
        } else if constexpr (std::is_same_v<T, WeightedArithmeticSpec>) {
          return std::make_unique<WeightedArithmeticEngine>(s, g);
        } else if constexpr (std::is_same_v<T, RandomHolderSpec>) {
          return std::make_unique<HolderKernelEngine>(s, spec, g);
        } else {
          fail(ErrorCode::unsupported,
               "the weighted power family averages geometrically; use "
               "power_limit_sample / power_deviation_trajectory");
        }
      },
      spec.node());
}

const WeightedPowerSpec& require_power_family(const RandomMeanSpec& spec) {
  const auto* ps = std::get_if<WeightedPowerSpec>(&spec.node());
  if (!ps)
    fail(ErrorCode::unsupported,
         "this statistic applies to the weighted power family only");
  return *ps;
}

} // namespace

void SimConfig::validate(bool need_schedule) const {
  grid.validate();
  if (n < 1) fail(ErrorCode::invalid, "simulation: n must be >= 1");
  if (replicates < 1)
    fail(ErrorCode::invalid, "simulation: replicates must be >= 1");
  if (need_schedule) {
    if (n_schedule.empty())
      fail(ErrorCode::invalid, "simulation: n_schedule must not be empty");
    long long prev = 0;
    for (long long v : n_schedule) {
      if (v <= prev)
        fail(ErrorCode::invalid,
             "simulation: n_schedule must be positive and strictly increasing");
      prev = v;
    }
  }
}

double kappa(const RandomMeanSpec& spec, const MeanExpr& running_avg,
             const MeanExpr& expectation_mean, const GridSpec& g) {
  if (spec.averages_geometrically())
    fail(ErrorCode::unsupported,
         "kappa applies to the arithmetically averaged families");
  check_grid_matches(spec, g);
  return rho(running_avg, expectation_mean, g);
}

TrajectoryTable slln_trajectory(const RandomMeanSpec& spec, const SimConfig& cfg) {
  cfg.validate(true);
  const auto engine = make_engine(spec, cfg.grid);
  TrajectoryTable out;
  out.schedule = cfg.n_schedule;
  out.values.assign(static_cast<std::size_t>(cfg.replicates),
                    std::vector<double>(out.schedule.size(), 0.0));
  for (int r = 0; r < cfg.replicates; ++r) {
    engine->reset();
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
    std::size_t next = 0;
    for (long long step = 1; step <= out.schedule.back(); ++step) {
      engine->push(rng);
      if (step == out.schedule[next]) {
        out.values[static_cast<std::size_t>(r)][next] = engine->distance(step);
        ++next;
      }
    }
  }
  return out;
}

TrajectoryTable power_deviation_trajectory(const RandomMeanSpec& spec,
                                           const SimConfig& cfg) {
  cfg.validate(true);
  const WeightedPowerSpec& family = require_power_family(spec);
  const double mu = moments(family.exponent_dist).mean;
  TrajectoryTable out;
  out.schedule = cfg.n_schedule;
  out.values.assign(static_cast<std::size_t>(cfg.replicates),
                    std::vector<double>(out.schedule.size(), 0.0));
  for (int r = 0; r < cfg.replicates; ++r) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
    double sum = 0.0;
    std::size_t next = 0;
    for (long long step = 1; step <= out.schedule.back(); ++step) {
      sum += sample(family.exponent_dist, rng);
      if (step == out.schedule[next]) {
        out.values[static_cast<std::size_t>(r)][next] =
            std::abs(sum / static_cast<double>(step) - mu);
        ++next;
      }
    }
  }
  return out;
}

EmpiricalSample clt_sample(const RandomMeanSpec& spec, const SimConfig& cfg) {
  cfg.validate();
  const auto engine = make_engine(spec, cfg.grid);
  std::vector<double> values(static_cast<std::size_t>(cfg.replicates));
  const double root_n = std::sqrt(static_cast<double>(cfg.n));
  for (int r = 0; r < cfg.replicates; ++r) {
    engine->reset();
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
    for (long long i = 0; i < cfg.n; ++i) engine->push(rng);
    values[static_cast<std::size_t>(r)] = root_n * engine->distance(cfg.n);
  }
  return EmpiricalSample(std::move(values), cfg.seed, 0);
}

EmpiricalSample limit_law_sample(const RandomMeanSpec& spec, const SimConfig& cfg) {
  cfg.validate();
  check_grid_matches(spec, cfg.grid);
  std::vector<double> values(static_cast<std::size_t>(cfg.replicates));

  if (const auto* dm = std::get_if<DiscreteMixtureSpec>(&spec.node())) {
    const std::vector<double>& probs = mixture_probs(*dm);
    const CovMatrix q = multinomial_covariance(probs);
    std::vector<std::vector<double>> tables;
    tables.reserve(dm->means.size());
    for (const MeanExpr& m : dm->means) tables.push_back(tabulate(m, cfg.grid));
    const std::size_t nodes = tables.front().size();
    for (int r = 0; r < cfg.replicates; ++r) {
      RngStream rng(cfg.seed, kLimitStreamBase + static_cast<std::uint64_t>(r));
      const std::vector<double> z = sample_gaussian(q, rng);
      double worst = 0.0;
      for (std::size_t t = 0; t < nodes; ++t) {
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i) s += z[i] * tables[i][t];
        worst = std::max(worst, std::abs(s));
      }
      values[static_cast<std::size_t>(r)] = worst;
    }
  } else if (const auto* wa = std::get_if<WeightedArithmeticSpec>(&spec.node())) {
    const VectorMoments m = moments(wa->weight_dist);
    std::vector<std::vector<double>> diff_tables(
        m.mean.size(), std::vector<double>(cfg.grid.node_count()));
    for_each_node(cfg.grid, [&](std::size_t t, std::span<const double> x) {
      for (std::size_t j = 0; j < m.mean.size(); ++j)
        diff_tables[j][t] = x[j] - x[x.size() - 1];
    });
    const std::size_t nodes = diff_tables.front().size();
    for (int r = 0; r < cfg.replicates; ++r) {
      RngStream rng(cfg.seed, kLimitStreamBase + static_cast<std::uint64_t>(r));
      const std::vector<double> z = sample_gaussian(m.cov, rng);
      double worst = 0.0;
      for (std::size_t t = 0; t < nodes; ++t) {
        double s = 0.0;
        for (std::size_t j = 0; j < z.size(); ++j) s += z[j] * diff_tables[j][t];
        worst = std::max(worst, std::abs(s));
      }
      values[static_cast<std::size_t>(r)] = worst;
    }
  } else if (const auto* wp = std::get_if<WeightedPowerSpec>(&spec.node())) {
    const double sigma = std::sqrt(moments(wp->exponent_dist).var);
    const double ratio = spec.interval().hi / spec.interval().lo;
    for (int r = 0; r < cfg.replicates; ++r) {
      RngStream rng(cfg.seed, kLimitStreamBase + static_cast<std::uint64_t>(r));
      values[static_cast<std::size_t>(r)] =
          std::pow(ratio, std::abs(sigma * rng.normal()));
    }
  } else {
    fail(ErrorCode::unsupported,
         "no distributional limit sampler for the kernel family");
  }
  return EmpiricalSample(std::move(values), cfg.seed, kLimitStreamBase);
}

EmpiricalSample two_atom_limit_closed_form(const RandomMeanSpec& spec,
                                           const SimConfig& cfg) {
  cfg.validate();
  check_grid_matches(spec, cfg.grid);
  const auto* dm = std::get_if<DiscreteMixtureSpec>(&spec.node());
  if (!dm || dm->means.size() != 2)
    fail(ErrorCode::unsupported,
         "the closed-form limit requires a two-atom discrete mixture");
  const double q = mixture_probs(*dm).front();
  const double sigma = std::sqrt(q * (1.0 - q));
  const double sup = rho(dm->means[0], dm->means[1], cfg.grid);
  std::vector<double> values(static_cast<std::size_t>(cfg.replicates));
  for (int r = 0; r < cfg.replicates; ++r) {
    RngStream rng(cfg.seed, kReferenceStreamBase + static_cast<std::uint64_t>(r));
    values[static_cast<std::size_t>(r)] = sup * std::abs(sigma * rng.normal());
  }
  return EmpiricalSample(std::move(values), cfg.seed, kReferenceStreamBase);
}

double power_sup_ratio(const RandomMeanSpec& spec,
                       std::span<const double> exponent_draws, const GridSpec& g) {
  const WeightedPowerSpec& family = require_power_family(spec);
  check_grid_matches(spec, g);
  if (exponent_draws.empty())
    fail(ErrorCode::invalid, "sup ratio: need at least one exponent draw");
  const MeanExpr avg = running_geometric(spec, exponent_draws);
  const double mu = moments(family.exponent_dist).mean;
  const MeanExpr ref{GeometricWeighted{{mu, 1.0 - mu}}};
  const std::vector<double> a = tabulate(avg, g);
  const std::vector<double> b = tabulate(ref, g);
  double worst = 0.0;
  for (std::size_t t = 0; t < a.size(); ++t)
    worst = std::max(worst, a[t] / b[t]);
  return worst;
}

PowerLimitSamples power_limit_sample(const RandomMeanSpec& spec,
                                     const SimConfig& cfg) {
  cfg.validate();
  const WeightedPowerSpec& family = require_power_family(spec);
  check_grid_matches(spec, cfg.grid);
  const double root_n = std::sqrt(static_cast<double>(cfg.n));

  std::vector<double> empirical(static_cast<std::size_t>(cfg.replicates));
  std::vector<double> draws(static_cast<std::size_t>(cfg.n));
  for (int r = 0; r < cfg.replicates; ++r) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
    for (double& d : draws) d = sample(family.exponent_dist, rng);
    empirical[static_cast<std::size_t>(r)] =
        std::pow(power_sup_ratio(spec, draws, cfg.grid), root_n);
  }

  PowerLimitSamples out{EmpiricalSample(std::move(empirical), cfg.seed, 0),
                        limit_law_sample(spec, cfg)};
  return out;
}

} // namespace randmeans
