#ifndef RANDMEANS_LIMIT_SIM_HPP
#define RANDMEANS_LIMIT_SIM_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "randmeans/expectation.hpp"
#include "randmeans/grid.hpp"
#include "randmeans/random_mean.hpp"
#include "randmeans/stats.hpp"

namespace randmeans {

// Stream-id bases keep the independent sampling purposes of one
// experiment on disjoint RNG streams: replicate r of the empirical
// statistic uses stream r, replicate r of a limit-law sampler uses
// kLimitStreamBase + r, and closed-form reference samplers use
// kReferenceStreamBase + r.
inline constexpr std::uint64_t kLimitStreamBase = std::uint64_t{1} << 32;
inline constexpr std::uint64_t kReferenceStreamBase = std::uint64_t{1} << 33;

struct SimConfig {
  std::uint64_t seed = 42;
  GridSpec grid;
  long long n = 10000;
  int replicates = 2000;
  std::vector<long long> n_schedule; // checkpoints for trajectory runs

  void validate(bool need_schedule = false) const;
};

// kappa_n: sup-distance between a running average and the expectation.
// Only meaningful for the arithmetically averaged families.
double kappa(const RandomMeanSpec& spec, const MeanExpr& running_avg,
             const MeanExpr& expectation_mean, const GridSpec& g);

// values[r][j] = statistic of replicate r after n_schedule[j] draws of a
// single nested path (stream (seed, r)).  For the arithmetic families the
// statistic is kappa_n; power_deviation_trajectory records |lambda_bar - E xi|
// for the geometrically averaged family instead.
struct TrajectoryTable {
  std::vector<long long> schedule;
  std::vector<std::vector<double>> values;
};

TrajectoryTable slln_trajectory(const RandomMeanSpec& spec, const SimConfig& cfg);
TrajectoryTable power_deviation_trajectory(const RandomMeanSpec& spec,
                                           const SimConfig& cfg);

// replicates independent realizations of sqrt(n) * kappa_n, each from a
// fresh size-n sample on stream (seed, r).
EmpiricalSample clt_sample(const RandomMeanSpec& spec, const SimConfig& cfg);

// replicates draws from the distributional limit of sqrt(n) * kappa_n:
//   discrete mixture    sup_x |<Z, m(x)>|, Z ~ N_k(0, multinomial cov)
//   weighted arithmetic sup_x |<Z, (x_i - x_p)_i>|, Z ~ N_{p-1}(0, cov xi)
//   weighted power      (max I / min I)^{|N(0, Var xi)|}
EmpiricalSample limit_law_sample(const RandomMeanSpec& spec, const SimConfig& cfg);

// Closed-form limit for two-atom discrete mixtures:
// sup|m1 - m2| * |N(0, q (1-q))|, sampled directly.
EmpiricalSample two_atom_limit_closed_form(const RandomMeanSpec& spec,
                                           const SimConfig& cfg);

// Grid supremum of the ratio (geometric running average) / (reference
// mean) for the weighted power family; equals
// (max I / min I)^{|lambda_bar - E xi|} up to grid-node rounding.
double power_sup_ratio(const RandomMeanSpec& spec,
                       std::span<const double> exponent_draws, const GridSpec& g);

// Empirical statistic (sup ratio after n draws)^{sqrt n} and its
// distributional limit (max I / min I)^{|N(0, Var xi)|}, replicated.
struct PowerLimitSamples {
  EmpiricalSample empirical;
  EmpiricalSample theoretical;
};

PowerLimitSamples power_limit_sample(const RandomMeanSpec& spec,
                                     const SimConfig& cfg);

} // namespace randmeans

#endif
