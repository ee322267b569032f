// End-to-end acceptance harness.  Runs ten numbered release criteria
// against the library and the CLI executable (argv[1]) and prints one
// [PASS]/[FAIL] line per criterion; failure details are indented below
// the line.  Exits nonzero when any criterion fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "json.hpp"
#include "randmeans/errors.hpp"
#include "randmeans/expectation.hpp"
#include "randmeans/experiment.hpp"
#include "randmeans/grid.hpp"
#include "randmeans/json_io.hpp"
#include "randmeans/limit_sim.hpp"
#include "randmeans/mean.hpp"
#include "randmeans/metric.hpp"
#include "randmeans/random_mean.hpp"
#include "randmeans/rng.hpp"
#include "randmeans/stats.hpp"

using namespace randmeans;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Notes = std::vector<std::string>;

constexpr double kE = 2.71828182845904523536;

MeanExpr am2() { return MeanExpr(ArithmeticWeighted{{0.5, 0.5}}); }
MeanExpr gm2() { return MeanExpr(GeometricWeighted{{0.5, 0.5}}); }

double eval2(const MeanExpr& m, double x1, double x2) {
  const double x[2] = {x1, x2};
  return eval(m, std::span<const double>(x, 2));
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> random_simplex_weights(int p, RngStream& rng) {
  std::vector<double> cuts(static_cast<std::size_t>(p) - 1);
  for (double& c : cuts) c = rng.uniform01();
  std::sort(cuts.begin(), cuts.end());
  std::vector<double> w;
  double prev = 0.0, sum = 0.0;
  for (double c : cuts) {
    w.push_back(c - prev);
    sum += w.back();
    prev = c;
  }
  w.push_back(1.0 - sum);
  return w;
}

RandomMeanSpec bernoulli_mixture(double q) {
  return RandomMeanSpec(DiscreteMixtureSpec{
      FiniteDiscrete{{0.0, 1.0}, {1.0 - q, q}}, {am2(), gm2()}, {0.0, 1.0}, 2});
}

// The two-argument closed-form expectation means together with an
// interval on which each is defined (all accept zero boundaries).
std::vector<MeanExpr> closed_form_pool() {
  return {MeanExpr(LogarithmicMean{}),
          MeanExpr(CauchyPowerMean{1.0}),
          MeanExpr(CauchyPowerMean{2.0}),
          MeanExpr(TriangularDensityPowerMean{1.0}),
          MeanExpr(TriangularDensityPowerMean{2.0}),
          MeanExpr(TriangularDensityLogMean{}),
          MeanExpr(ScaledLogMean{}),
          MeanExpr(SineDensityMean{})};
}

// The kernel-family specs whose expectations have closed forms.
std::vector<RandomMeanSpec> holder_closed_form_specs(const Interval& iv) {
  std::vector<RandomMeanSpec> out;
  for (double a : {0.0, 1.0, 2.0}) {
    out.emplace_back(RandomHolderSpec{a, ScalarDist(Uniform01{}), iv});
    out.emplace_back(RandomHolderSpec{a, ScalarDist(TriangularDensity{}), iv});
  }
  out.emplace_back(RandomHolderSpec{0.0, ScalarDist(TruncatedExponential{}), iv});
  out.emplace_back(RandomHolderSpec{0.0, ScalarDist(SineDensity{}), iv});
  return out;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return "<unreadable:" + p.string() + ">";
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / "randmeans_acceptance" / tag;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Aggregates named sub-checks; failed names land in the notes.
struct Battery {
  Notes& notes;
  bool pass = true;
  explicit Battery(Notes& n) : notes(n) {}
  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back(what);
    }
  }
};

// ---------------------------------------------------------------- 1
bool criterion_sup_distance(Notes& notes) {
  const GridSpec g{{0.0, 1.0}, 2, 101};
  const double d = rho(am2(), gm2(), g);
  if (d != 0.5) {
    notes.push_back("expected exactly 0.5, got " + std::to_string(d));
    return false;
  }
  return true;
}

// ---------------------------------------------------------------- 2
bool criterion_quadrature_oracles(Notes& notes) {
  const GridSpec g{{0.1, 2.0}, 2, 51};
  bool all = true;
  for (const RandomMeanSpec& s : holder_closed_form_specs({0.1, 2.0})) {
    const auto closed = closed_form_expectation(s);
    if (!closed) {
      notes.push_back("missing closed form for a kernel-family combination");
      all = false;
      continue;
    }
    const ExpectationResult quad = quadrature_expectation(s, g, 64);
    const auto& table = std::get<GridMean>(quad.mean.node());
    double worst = 0.0;
    std::size_t i = 0;
    for_each_node(g, [&](std::int64_t, std::span<const double> x) {
      worst = std::max(worst, std::abs(table.values[i] - eval(closed->mean, x)));
      ++i;
    });
    if (worst > 1e-8) {
      notes.push_back("closed form vs quadrature deviates by " +
                      std::to_string(worst));
      all = false;
    }
  }
  return all;
}

// ---------------------------------------------------------------- 3
bool closed_form_means_are_certified(Notes& notes) {
  bool all = true;
  auto certify = [&](const RandomMeanSpec& s, const GridSpec& g,
                     const char* label) {
    const auto closed = closed_form_expectation(s);
    if (!closed) {
      notes.push_back(std::string(label) + ": closed form unavailable");
      all = false;
      return;
    }
    const double v = check_is_mean(*closed, g);
    if (v != 0.0) {
      notes.push_back(std::string(label) + ": internality violation " +
                      std::to_string(v));
      all = false;
    }
  };

  const GridSpec wide{{0.0, 2.0}, 2, 101};
  for (const RandomMeanSpec& s : holder_closed_form_specs({0.0, 2.0}))
    certify(s, wide, "kernel family");
  certify(bernoulli_mixture(0.3), GridSpec{{0.0, 1.0}, 2, 101}, "two-atom mixture");
  certify(RandomMeanSpec(
              WeightedArithmeticSpec{VectorDist(SimplexUniform{2}), {0.0, 1.0}, 3}),
          GridSpec{{0.0, 1.0}, 3, 101}, "weighted arithmetic");
  certify(RandomMeanSpec(WeightedPowerSpec{ScalarDist(Uniform01{}), {1.0, 2.0}}),
          GridSpec{{1.0, 2.0}, 2, 101}, "weighted power");
  certify(RandomMeanSpec(WeightedPowerSpec{ScalarDist(Bernoulli{0.5}), {1.0, 2.0}}),
          GridSpec{{1.0, 2.0}, 2, 101}, "weighted power (two-atom exponent)");
  return all;
}

// ---------------------------------------------------------------- 4
bool criterion_two_atom_clt(Notes& notes) {
  SimConfig cfg;
  cfg.seed = 42;
  cfg.grid = GridSpec{{0.0, 1.0}, 2, 101};
  cfg.n = 10000;
  cfg.replicates = 2000;
  const EmpiricalSample s = clt_sample(bernoulli_mixture(0.3), cfg);
  const double sigma = 0.5 * std::sqrt(0.21);
  const double ks =
      ks_against_cdf(s, [&](double x) { return half_normal_cdf(sigma, x); });
  if (ks > 0.05) {
    notes.push_back("KS distance " + std::to_string(ks) + " > 0.05");
    return false;
  }
  return true;
}

// ---------------------------------------------------------------- 5
bool generic_and_closed_form_limits_agree(Notes& notes) {
  SimConfig cfg;
  cfg.seed = 42;
  cfg.grid = GridSpec{{0.0, 1.0}, 2, 101};
  cfg.replicates = 2000;
  const RandomMeanSpec dm = bernoulli_mixture(0.3);
  const double ks =
      ks_distance(limit_law_sample(dm, cfg), two_atom_limit_closed_form(dm, cfg));
  if (ks > 0.04) {
    notes.push_back("two-sample KS " + std::to_string(ks) + " > 0.04");
    return false;
  }
  return true;
}

// ---------------------------------------------------------------- 6
bool criterion_weighted_arithmetic_clt(Notes& notes) {
  const RandomMeanSpec wa(WeightedArithmeticSpec{
      VectorDist(ProductOfScalars{{ScalarDist(Uniform01{})}}), {0.0, 1.0}, 2});
  SimConfig cfg;
  cfg.seed = 42;
  cfg.grid = GridSpec{{0.0, 1.0}, 2, 101};
  cfg.n = 10000;
  cfg.replicates = 2000;
  const EmpiricalSample s = clt_sample(wa, cfg);
  const double sigma = std::sqrt(1.0 / 12.0);
  const double ks =
      ks_against_cdf(s, [&](double x) { return half_normal_cdf(sigma, x); });
  if (ks > 0.05) {
    notes.push_back("KS distance " + std::to_string(ks) + " > 0.05");
    return false;
  }
  return true;
}

// ---------------------------------------------------------------- 7
bool sup_ratio_matches_closed_form(Notes& notes) {
  const RandomMeanSpec wp(
      WeightedPowerSpec{ScalarDist(Bernoulli{0.5}), {1.0, 2.0}});
  const GridSpec g{{1.0, 2.0}, 2, 21};
  const ScalarDist law(Bernoulli{0.5});
  RngStream rng(42, 99);
  bool ok = true;
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + static_cast<int>(rng.uniform01() * 50.0);
    std::vector<double> draws(static_cast<std::size_t>(n));
    double sum = 0.0;
    for (double& d : draws) {
      d = sample(law, rng);
      sum += d;
    }
    const double ratio = power_sup_ratio(wp, draws, g);
    const double expect = std::pow(2.0, std::abs(sum / n - 0.5));
    const double rel = std::abs(ratio - expect) / expect;
    worst = std::max(worst, rel);
    ok = ok && rel <= 1e-10;
  }
  if (!ok)
    notes.push_back("sup-ratio closed form off by up to " + std::to_string(worst));
  return ok;
}

bool criterion_power_limit(Notes& notes) {
  const RandomMeanSpec wp(
      WeightedPowerSpec{ScalarDist(Bernoulli{0.5}), {1.0, 2.0}});
  SimConfig cfg;
  cfg.seed = 42;
  cfg.grid = GridSpec{{1.0, 2.0}, 2, 101};
  cfg.n = 10000;
  cfg.replicates = 2000;
  const PowerLimitSamples s = power_limit_sample(wp, cfg);
  std::vector<double> logs;
  logs.reserve(s.empirical.size());
  for (double v : s.empirical.values()) logs.push_back(std::log(v));
  const EmpiricalSample ln_emp(std::move(logs), cfg.seed, 0);
  const double sigma_ln = std::log(2.0) * 0.5;
  const double ks = ks_against_cdf(
      ln_emp, [&](double x) { return half_normal_cdf(sigma_ln, x); });
  bool ok = true;
  if (ks > 0.05) {
    notes.push_back("log-domain KS " + std::to_string(ks) + " > 0.05");
    ok = false;
  }
  ok = sup_ratio_matches_closed_form(notes) && ok;
  return ok;
}

// ---------------------------------------------------------------- 8
bool criterion_slln_trend(Notes& notes) {
  bool all = true;
  auto trend = [&](std::vector<double> first, std::vector<double> last,
                   const char* label) {
    const double m0 = median(std::move(first));
    const double m1 = median(std::move(last));
    if (!(m1 < m0)) {
      notes.push_back(std::string(label) + ": median went " +
                      std::to_string(m0) + " -> " + std::to_string(m1));
      all = false;
    }
  };
  auto split = [](const TrajectoryTable& t, std::vector<double>& first,
                  std::vector<double>& last) {
    for (const auto& row : t.values) {
      first.push_back(row.front());
      last.push_back(row.back());
    }
  };

  SimConfig cfg;
  cfg.seed = 42;
  cfg.replicates = 20;
  cfg.n_schedule = {100, 10000};

  cfg.grid = GridSpec{{0.0, 1.0}, 2, 101};
  std::vector<double> f1, l1;
  split(slln_trajectory(bernoulli_mixture(0.3), cfg), f1, l1);
  trend(f1, l1, "two-atom mixture");

  cfg.grid = GridSpec{{0.0, 1.0}, 3, 31};
  const RandomMeanSpec wa(
      WeightedArithmeticSpec{VectorDist(SimplexUniform{2}), {0.0, 1.0}, 3});
  std::vector<double> f2, l2;
  split(slln_trajectory(wa, cfg), f2, l2);
  trend(f2, l2, "weighted arithmetic");

  cfg.grid = GridSpec{{1.0, 2.0}, 2, 101};
  const RandomMeanSpec wp(
      WeightedPowerSpec{ScalarDist(Bernoulli{0.5}), {1.0, 2.0}});
  std::vector<double> f3, l3;
  split(power_deviation_trajectory(wp, cfg), f3, l3);
  trend(f3, l3, "weighted power");
  return all;
}

// ---------------------------------------------------------------- 9
bool battery_means(Battery& b) {
  RngStream rng(20250823, 1);
  const std::vector<MeanExpr> pool = closed_form_pool();

  // Exact internality at grid nodes across every variant.
  {
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
      const int branch = static_cast<int>(rng.uniform01() * 6.0);
      MeanExpr m = am2();
      Interval iv{0.0, 2.0};
      int p = 2;
      switch (branch) {
        case 0: {
          p = 2 + static_cast<int>(rng.uniform01() * 3.0);
          m = MeanExpr(ArithmeticWeighted{random_simplex_weights(p, rng)});
          break;
        }
        case 1: {
          p = 2 + static_cast<int>(rng.uniform01() * 3.0);
          m = MeanExpr(GeometricWeighted{random_simplex_weights(p, rng)});
          break;
        }
        case 2: {
          const double alpha = -3.0 + 6.0 * rng.uniform01();
          if (alpha < 0.0) iv = {0.5, 2.0};
          m = MeanExpr(PowerMean{alpha, rng.uniform01()});
          break;
        }
        case 3:
          m = pool[static_cast<std::size_t>(rng.uniform01() * 8.0)];
          break;
        case 4:
          m = MeanExpr(Mixture{{0.25, 0.75},
                               {gm2(), MeanExpr(PowerMean{2.0, 0.3})}});
          break;
        default: {
          // Tabulated means are internal at their own nodes; between nodes
          // the multilinear blend of a curved mean can leave the envelope,
          // so the check grid must match the tabulation grid.
          iv = {0.0, 1.0};
          const GridSpec tab{iv, 2, 11};
          m = MeanExpr(GridMean{tab, tabulate(MeanExpr(PowerMean{2.0, 0.4}), tab)});
          break;
        }
      }
      const GridSpec g{iv, p, 11};
      ok = ok && internality_violation(m, g) == 0.0;
    }
    b.check(ok, "means: internality must be exact at grid nodes");
  }

  // Diagonal idempotence within 1e-12 relative.
  {
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
      const MeanExpr& m = pool[static_cast<std::size_t>(rng.uniform01() * 8.0)];
      const double t = 0.01 + 1.99 * rng.uniform01();
      ok = ok && rel_diff(eval2(m, t, t), t) <= 1e-12;
    }
    for (double t : {0.3, 1.0, 1.7}) {
      ok = ok && eval2(MeanExpr(PowerMean{-1.5, 0.3}), t, t) == t;
      const std::vector<double> x3 = {t, t, t};
      ok = ok && eval(MeanExpr(ArithmeticWeighted{{0.2, 0.3, 0.5}}), x3) == t;
    }
    b.check(ok, "means: diagonal evaluations must return the coordinate");
  }

  // Metric axioms on identical grids.
  {
    bool ok = true;
    const GridSpec g{{0.1, 2.0}, 2, 21};
    for (int i = 0; i < 200; ++i) {
      const MeanExpr& a = pool[static_cast<std::size_t>(rng.uniform01() * 8.0)];
      const MeanExpr& bb = pool[static_cast<std::size_t>(rng.uniform01() * 8.0)];
      const MeanExpr& c = pool[static_cast<std::size_t>(rng.uniform01() * 8.0)];
      ok = ok && rho(a, a, g) == 0.0;
      ok = ok && rho(a, bb, g) == rho(bb, a, g);
      ok = ok && rho(a, c, g) <= rho(a, bb, g) + rho(bb, c, g) + 1e-12;
    }
    b.check(ok, "means: sup-metric identity/symmetry/triangle");
  }

  // Mixture linearity within 1e-12 relative.
  {
    bool ok = true;
    for (int i = 0; i < 1000; ++i) {
      const int k = 2 + static_cast<int>(rng.uniform01() * 3.0);
      std::vector<double> coeffs = random_simplex_weights(k, rng);
      std::vector<MeanExpr> comps;
      for (int j = 0; j < k; ++j)
        comps.push_back(pool[static_cast<std::size_t>(rng.uniform01() * 8.0)]);
      const MeanExpr mix(Mixture{coeffs, comps});
      const double x1 = 0.05 + 1.95 * rng.uniform01();
      const double x2 = 0.05 + 1.95 * rng.uniform01();
      double want = 0.0;
      for (int j = 0; j < k; ++j)
        want += coeffs[static_cast<std::size_t>(j)] *
                eval2(comps[static_cast<std::size_t>(j)], x1, x2);
      ok = ok && rel_diff(eval2(mix, x1, x2), want) <= 1e-12;
    }
    b.check(ok, "means: mixtures evaluate as convex combinations");
  }

  // Monotone refinement of the sup estimates.
  {
    const std::vector<int> levels = {3, 11, 101};
    const std::vector<double> r1 = refine_sup(am2(), gm2(), {0.0, 1.0}, 2, levels);
    const std::vector<double> r2 = refine_sup(MeanExpr(LogarithmicMean{}), gm2(),
                                              {1.0, 2.0}, 2, levels);
    bool ok = r1.size() == 3 && r2.size() == 3;
    for (std::size_t i = 1; ok && i < 3; ++i)
      ok = r1[i] >= r1[i - 1] && r2[i] >= r2[i - 1];
    ok = ok && r1.back() == 0.5;
    b.check(ok, "means: refinement estimates must be nondecreasing");
  }

  // Exponent continuity at the branch point.
  {
    bool ok = true;
    for (int i = 0; i < 100; ++i) {
      const double x1 = 0.5 + 1.5 * rng.uniform01();
      const double x2 = 0.5 + 1.5 * rng.uniform01();
      const double lambda = rng.uniform01();
      const double ref = eval2(MeanExpr(PowerMean{0.0, lambda}), x1, x2);
      for (double alpha : {1e-8, -1e-8, 1e-9, 2e-8, -1e-7, 1e-7})
        ok = ok &&
             std::abs(eval2(MeanExpr(PowerMean{alpha, lambda}), x1, x2) - ref) <=
                 1e-6;
    }
    b.check(ok, "means: small exponents must stay near the geometric branch");
  }
  return b.pass;
}

bool battery_distributions(Battery& b) {
  // Bitwise reproducibility for fixed (seed, stream).
  {
    bool ok = true;
    const std::vector<ScalarDist> scalars = {
        ScalarDist(Bernoulli{0.3}),
        ScalarDist(FiniteDiscrete{{0.0, 0.5, 1.0}, {0.2, 0.3, 0.5}}),
        ScalarDist(Uniform01{}),
        ScalarDist(TriangularDensity{}),
        ScalarDist(TruncatedExponential{}),
        ScalarDist(SineDensity{}),
        ScalarDist(Dirac{0.7})};
    for (const ScalarDist& d : scalars) {
      RngStream r1(5, 3), r2(5, 3);
      for (int i = 0; i < 100; ++i) ok = ok && sample(d, r1) == sample(d, r2);
    }
    const std::vector<VectorDist> vectors = {
        VectorDist(SimplexUniform{2}),
        VectorDist(ProductOfScalars{{ScalarDist(Uniform01{}), ScalarDist(Dirac{0.2})}}),
        VectorDist(FiniteDiscreteVector{{{0.1, 0.2}, {0.3, 0.4}}, {0.5, 0.5}})};
    for (const VectorDist& d : vectors) {
      RngStream r1(5, 4), r2(5, 4);
      for (int i = 0; i < 100; ++i) ok = ok && sample(d, r1) == sample(d, r2);
    }
    b.check(ok, "distributions: draws must be bitwise reproducible");
  }

  // Inversion samplers against the analytic CDFs.
  {
    bool ok = true;
    const double bound = 1.36 / std::sqrt(100000.0) * 1.5;
    int stream = 10;
    for (const ScalarDist& d : {ScalarDist(TruncatedExponential{}),
                                ScalarDist(SineDensity{})}) {
      RngStream rng(5, static_cast<std::uint64_t>(stream++));
      std::vector<double> v(100000);
      for (double& x : v) x = sample(d, rng);
      const EmpiricalSample s(std::move(v), 5, 0);
      ok = ok && ks_against_cdf(s, [&](double x) { return cdf(d, x); }) <= bound;
    }
    b.check(ok, "distributions: inversion samplers must match their CDFs");
  }

  // Frequency covariance structure: symmetry, zero row sums, PSD.
  {
    bool ok = true;
    RngStream rng(20250823, 2);
    for (int c = 0; c < 1000; ++c) {
      const int k = 2 + static_cast<int>(rng.uniform01() * 5.0);
      std::vector<double> probs = random_simplex_weights(k, rng);
      const CovMatrix q = multinomial_covariance(probs);
      Eigen::MatrixXd m(k, k);
      for (int i = 0; i < k; ++i) {
        double row = 0.0;
        for (int j = 0; j < k; ++j) {
          ok = ok && q.at(i, j) == q.at(j, i);
          row += q.at(i, j);
          m(i, j) = q.at(i, j);
        }
        ok = ok && std::abs(row) <= 1e-12;
      }
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
      ok = ok && es.eigenvalues().minCoeff() >= -1e-10;
    }
    b.check(ok, "distributions: frequency covariance symmetry/rows/eigenvalues");
  }

  // Monte Carlo means against the analytic moments.
  {
    bool ok = true;
    const std::vector<std::pair<ScalarDist, double>> cases = {
        {ScalarDist(Bernoulli{0.3}), 0.3},
        {ScalarDist(FiniteDiscrete{{0.0, 0.5, 1.0}, {0.2, 0.3, 0.5}}), 0.65},
        {ScalarDist(Uniform01{}), 0.5},
        {ScalarDist(TriangularDensity{}), 2.0 / 3.0},
        {ScalarDist(TruncatedExponential{}), (kE - 2.0) / (kE - 1.0)},
        {ScalarDist(SineDensity{}),
         (std::sin(1.0) - std::cos(1.0)) / (1.0 - std::cos(1.0))},
        {ScalarDist(Dirac{0.7}), 0.7}};
    int stream = 30;
    for (const auto& [d, want] : cases) {
      RngStream rng(5, static_cast<std::uint64_t>(stream++));
      const long long n = 1000000;
      double sum = 0.0;
      for (long long i = 0; i < n; ++i) sum += sample(d, rng);
      const double se = std::sqrt(moments(d).var / static_cast<double>(n));
      // The 1e-9 floor absorbs summation rounding for zero-variance laws.
      ok = ok && std::abs(sum / static_cast<double>(n) - want) <= 4.0 * se + 1e-9;
    }
    b.check(ok, "distributions: Monte Carlo means within four standard errors");
  }
  return b.pass;
}

bool battery_random_mean(Battery& b) {
  RngStream rng(20250823, 3);

  // Realized kernels are means: internality 0 on 21-point grids.
  {
    bool ok = true;
    const RandomMeanSpec dm = bernoulli_mixture(0.3);
    const GridSpec g01{{0.0, 1.0}, 2, 21};
    for (int i = 0; i < 1000; ++i) {
      const std::vector<double> y = {rng.uniform01() < 0.3 ? 1.0 : 0.0};
      ok = ok && internality_violation(realize(dm, y), g01) == 0.0;
    }
    const RandomMeanSpec rh0(RandomHolderSpec{0.0, ScalarDist(Uniform01{}), {0.0, 1.0}});
    const RandomMeanSpec rh2(RandomHolderSpec{2.0, ScalarDist(Uniform01{}), {0.0, 1.0}});
    const RandomMeanSpec rhn(RandomHolderSpec{-1.0, ScalarDist(Uniform01{}), {0.5, 2.0}});
    const GridSpec gpos{{0.5, 2.0}, 2, 21};
    for (int i = 0; i < 334; ++i) {
      const std::vector<double> y = {rng.uniform01()};
      ok = ok && internality_violation(realize(rh0, y), g01) == 0.0;
      ok = ok && internality_violation(realize(rh2, y), g01) == 0.0;
      ok = ok && internality_violation(realize(rhn, y), gpos) == 0.0;
    }
    const RandomMeanSpec wa(
        WeightedArithmeticSpec{VectorDist(SimplexUniform{2}), {0.0, 1.0}, 3});
    const VectorDist wlaw(SimplexUniform{2});
    const GridSpec g3{{0.0, 1.0}, 3, 21};
    for (int i = 0; i < 1000; ++i)
      ok = ok &&
           internality_violation(realize(wa, sample(wlaw, rng)), g3) == 0.0;
    const RandomMeanSpec wp(WeightedPowerSpec{ScalarDist(Uniform01{}), {1.0, 2.0}});
    const GridSpec g12{{1.0, 2.0}, 2, 21};
    for (int i = 0; i < 1000; ++i) {
      const std::vector<double> y = {rng.uniform01()};
      ok = ok && internality_violation(realize(wp, y), g12) == 0.0;
    }
    b.check(ok, "families: every realized kernel must satisfy internality");
  }

  // Averaging stays inside the set of means.
  {
    bool ok = true;
    const RandomMeanSpec dm = bernoulli_mixture(0.3);
    const RandomMeanSpec wa(
        WeightedArithmeticSpec{VectorDist(SimplexUniform{1}), {0.0, 1.0}, 2});
    const RandomMeanSpec rh(
        RandomHolderSpec{0.0, ScalarDist(Uniform01{}), {0.0, 1.0}});
    const GridSpec g{{0.0, 1.0}, 2, 21};
    for (const RandomMeanSpec* spec : {&dm, &wa, &rh}) {
      for (int rep = 0; rep < 20; ++rep) {
        std::vector<MeanExpr> draws;
        for (int i = 0; i < 15; ++i) draws.push_back(draw(*spec, rng));
        ok = ok && internality_violation(running_average(*spec, draws), g) == 0.0;
      }
    }
    b.check(ok, "families: running averages must remain means");
  }

  // Geometric averaging equals the literal product's n-th root.
  {
    bool ok = true;
    const RandomMeanSpec wp(
        WeightedPowerSpec{ScalarDist(Uniform01{}), {0.5, 2.0}});
    for (int n = 1; n <= 50; ++n) {
      std::vector<double> lambdas(static_cast<std::size_t>(n));
      for (double& l : lambdas) l = rng.uniform01();
      const MeanExpr collapsed = running_geometric(wp, lambdas);
      for (int i = 0; i < 10; ++i) {
        const double x1 = 0.5 + 1.5 * rng.uniform01();
        const double x2 = 0.5 + 1.5 * rng.uniform01();
        double prod = 1.0;
        for (double l : lambdas) prod *= std::pow(x1, l) * std::pow(x2, 1.0 - l);
        ok = ok &&
             rel_diff(eval2(collapsed, x1, x2), std::pow(prod, 1.0 / n)) <= 1e-12;
      }
    }
    b.check(ok, "families: geometric averages must add exponents");
  }

  // Component selection frequencies match the mixing law.
  {
    const RandomMeanSpec dm(DiscreteMixtureSpec{
        FiniteDiscrete{{0.0, 0.5, 1.0}, {0.2, 0.3, 0.5}},
        {am2(), gm2(), MeanExpr(PowerMean{2.0, 0.5})},
        {0.0, 1.0},
        2});
    const int n = 100000;
    RngStream draws_rng(20250823, 4);
    std::vector<int> counts(3, 0);
    for (int i = 0; i < n; ++i) {
      DrawValue y;
      draw(dm, draws_rng, &y);
      if (y[0] == 0.0) ++counts[0];
      else if (y[0] == 0.5) ++counts[1];
      else ++counts[2];
    }
    const double probs[3] = {0.2, 0.3, 0.5};
    bool ok = true;
    for (int i = 0; i < 3; ++i) {
      const double se = std::sqrt(probs[i] * (1.0 - probs[i]) / n);
      ok = ok && std::abs(static_cast<double>(counts[static_cast<std::size_t>(i)]) / n -
                          probs[i]) <= 4.0 * se;
    }
    b.check(ok, "families: atom frequencies within four binomial standard errors");
  }
  return b.pass;
}

bool battery_expectation(Battery& b) {
  RngStream rng(20250823, 5);

  // Quadrature tracks the closed forms; Monte Carlo does within noise.
  {
    Notes scratch;
    b.check(criterion_quadrature_oracles(scratch),
            "expectation: quadrature must match the closed forms within 1e-8");

    const RandomMeanSpec wa(
        WeightedArithmeticSpec{VectorDist(SimplexUniform{1}), {0.0, 1.0}, 2});
    const GridSpec g{{0.0, 1.0}, 2, 11};
    RngStream mc_rng(20250823, 6);
    const ExpectationResult mc = monte_carlo_expectation(wa, g, 100000, mc_rng);
    const auto closed = closed_form_expectation(wa);
    const auto& table = std::get<GridMean>(mc.mean.node());
    bool ok = true;
    std::size_t i = 0;
    for_each_node(g, [&](std::int64_t, std::span<const double> x) {
      ok = ok && std::abs(table.values[i] - eval(closed->mean, x)) <=
                     4.0 * mc.error_estimate + 1e-12;
      ++i;
    });
    b.check(ok, "expectation: Monte Carlo must land within four standard errors");
  }

  // Every closed-form expectation is certified as a mean.
  {
    Notes scratch;
    b.check(closed_form_means_are_certified(scratch),
            "expectation: closed forms must pass the internality certificate");
  }

  // Idempotence of the expectation means.
  {
    bool ok = true;
    for (const RandomMeanSpec& s : holder_closed_form_specs({0.0, 2.0})) {
      const auto closed = closed_form_expectation(s);
      for (int i = 0; i < 100; ++i) {
        const double t = 0.01 + 1.98 * rng.uniform01();
        ok = ok && rel_diff(eval2(closed->mean, t, t), t) <= 1e-12;
      }
    }
    b.check(ok, "expectation: closed forms must be idempotent on the diagonal");
  }

  // Rescaled-logarithm identity.
  {
    bool ok = true;
    const MeanExpr scaled(ScaledLogMean{});
    const MeanExpr log_mean(LogarithmicMean{});
    int tested = 0;
    while (tested < 1000) {
      const double x1 = 0.05 + 1.95 * rng.uniform01();
      const double x2 = 0.05 + 1.95 * rng.uniform01();
      if (std::abs(x1 - kE * x2) <= 1e-4) continue;
      ++tested;
      const double want = eval2(log_mean, x1 / (kE - 1.0), kE * x2 / (kE - 1.0));
      ok = ok && rel_diff(eval2(scaled, x1, x2), want) <= 1e-12;
    }
    b.check(ok, "expectation: rescaled-logarithm identity within 1e-12");
  }
  return b.pass;
}

bool battery_limit_sim(Battery& b) {
  // Identical component means collapse the statistics to exact zeros.
  {
    bool ok = true;
    const RandomMeanSpec degen(DiscreteMixtureSpec{
        FiniteDiscrete{{0.0, 1.0}, {0.3, 0.7}}, {gm2(), gm2()}, {0.0, 1.0}, 2});
    SimConfig cfg;
    cfg.grid = GridSpec{{0.0, 1.0}, 2, 21};
    cfg.replicates = 8;
    for (long long n : {1LL, 7LL, 137LL, 1000LL}) {
      cfg.n = n;
      const EmpiricalSample s = clt_sample(degen, cfg);
      for (double v : s.values()) ok = ok && v == 0.0;
    }
    cfg.n_schedule = {3, 10, 137};
    const TrajectoryTable traj = slln_trajectory(degen, cfg);
    for (const auto& row : traj.values)
      for (double v : row) ok = ok && v == 0.0;
    b.check(ok, "limits: degenerate mixtures must collapse to exact zeros");
  }

  // Generic sampler vs closed form (two-sample agreement).
  {
    Notes scratch;
    b.check(generic_and_closed_form_limits_agree(scratch),
            "limits: generic and closed-form limit samples must agree");
  }

  // Sup-ratio closed-form identity.
  {
    Notes scratch;
    b.check(sup_ratio_matches_closed_form(scratch),
            "limits: sup-ratio must equal its closed form within 1e-10");
  }

  // Positive homogeneity of the sup of inner products.
  {
    bool ok = true;
    RngStream rng(20250823, 7);
    const std::vector<MeanExpr> means = {am2(), gm2(),
                                         MeanExpr(PowerMean{2.0, 0.5})};
    const GridSpec g{{0.0, 1.0}, 2, 11};
    for (int i = 0; i < 100; ++i) {
      const int k = 2 + static_cast<int>(rng.uniform01() * 2.0);
      std::vector<double> z(static_cast<std::size_t>(k));
      for (double& v : z) v = -2.0 + 4.0 * rng.uniform01();
      const std::span<const MeanExpr> ms(means.data(), static_cast<std::size_t>(k));
      const double base = sup_abs_inner(z, ms, g);
      for (double t : {2.0, 4.0, 0.5}) {
        std::vector<double> tz = z;
        for (double& v : tz) v *= t;
        ok = ok && sup_abs_inner(tz, ms, g) == t * base;
      }
      std::vector<double> z3 = z;
      for (double& v : z3) v *= 3.0;
      ok = ok && rel_diff(sup_abs_inner(z3, ms, g), 3.0 * base) <= 1e-12;
    }
    b.check(ok, "limits: sup of inner products must scale with the coefficients");
  }

  // Identical configurations reproduce identical samples.
  {
    bool ok = true;
    const RandomMeanSpec dm = bernoulli_mixture(0.3);
    SimConfig cfg;
    cfg.grid = GridSpec{{0.0, 1.0}, 2, 21};
    cfg.n = 200;
    cfg.replicates = 20;
    ok = ok && clt_sample(dm, cfg).values() == clt_sample(dm, cfg).values();
    ok = ok &&
         limit_law_sample(dm, cfg).values() == limit_law_sample(dm, cfg).values();
    const RandomMeanSpec wp(
        WeightedPowerSpec{ScalarDist(Bernoulli{0.5}), {1.0, 2.0}});
    SimConfig pcfg;
    pcfg.grid = GridSpec{{1.0, 2.0}, 2, 21};
    pcfg.n = 100;
    pcfg.replicates = 10;
    const PowerLimitSamples p1 = power_limit_sample(wp, pcfg);
    const PowerLimitSamples p2 = power_limit_sample(wp, pcfg);
    ok = ok && p1.empirical.values() == p2.empirical.values();
    ok = ok && p1.theoretical.values() == p2.theoretical.values();
    b.check(ok, "limits: identical configurations must reproduce bitwise");
  }
  return b.pass;
}

bool battery_cli_contract(Battery& b) {
  const std::string mixture = spec_to_json(bernoulli_mixture(0.3));
  const std::string power = spec_to_json(RandomMeanSpec(
      WeightedPowerSpec{ScalarDist(Bernoulli{0.5}), {1.0, 2.0}}));
  const std::vector<std::pair<std::string, std::string>> runs = {
      {"rho",
       R"({"command": "rho",
           "mean1": {"kind": "arithmetic_weighted", "weights": [0.5, 0.5]},
           "mean2": {"kind": "geometric_weighted", "weights": [0.5, 0.5]},
           "grid": {"interval": [0, 1], "points_per_axis": 21}})"},
      {"expectation",
       R"({"command": "expectation", "spec": {"kind": "random_holder",
           "alpha0": 0, "lambda_dist": {"kind": "uniform01"},
           "interval": [0, 1]},
           "grid": {"interval": [0, 1], "points_per_axis": 11}})"},
      {"slln", std::string(R"({"command": "slln", "replicates": 10,
           "n_schedule": [50, 200],
           "grid": {"interval": [0, 1], "points_per_axis": 21},
           "spec": )") + mixture + "}"},
      {"clt", std::string(R"({"command": "clt", "n": 300, "replicates": 50,
           "grid": {"interval": [0, 1], "points_per_axis": 21},
           "spec": )") + mixture + "}"},
      {"limit-law", std::string(R"({"command": "limit-law", "replicates": 200,
           "grid": {"interval": [0, 1], "points_per_axis": 21},
           "spec": )") + mixture + "}"},
      {"power-limit", std::string(R"({"command": "power-limit", "n": 200,
           "replicates": 50,
           "grid": {"interval": [1, 2], "points_per_axis": 21},
           "spec": )") + power + "}"},
  };

  bool identical = true;
  bool complete = true;
  for (const auto& [name, config] : runs) {
    const fs::path a = fresh_dir("det-" + name + "-a");
    const fs::path bdir = fresh_dir("det-" + name + "-b");
    RunOverrides oa, ob;
    oa.output_dir = a.string();
    ob.output_dir = bdir.string();
    try {
      run_experiment_json(config, oa);
      run_experiment_json(config, ob);
    } catch (const Error& e) {
      b.check(false, "cli: experiment '" + name + "' failed: " + e.what());
      continue;
    }
    for (const char* f : {"summary.json", "results.csv", "reference.csv"}) {
      const bool ea = fs::exists(a / f), eb = fs::exists(bdir / f);
      identical = identical && ea == eb;
      if (ea && eb) identical = identical && slurp(a / f) == slurp(bdir / f);
    }

    const json s = json::parse(slurp(a / "summary.json"));
    for (const char* key : {"seed", "grid", "n", "replicates", "command"})
      complete = complete && s.contains(key);
    complete = complete && s.contains("checks");
    if (s.contains("checks"))
      for (const json& c : s.at("checks"))
        complete = complete && c.contains("threshold") && c.contains("name") &&
                   c.contains("value") && c.contains("pass");
  }
  b.check(identical, "cli: identical configs must write byte-identical artifacts");
  b.check(complete,
          "cli: every summary must carry seed/grid/n/replicates/command and "
          "check thresholds");
  return b.pass;
}

bool criterion_invariant_battery(Notes& notes) {
  Battery b(notes);
  battery_means(b);
  battery_distributions(b);
  battery_random_mean(b);
  battery_expectation(b);
  battery_limit_sim(b);
  battery_cli_contract(b);
  return b.pass;
}

// ---------------------------------------------------------------- 10
bool criterion_cli_reproducibility(const std::string& cli, Notes& notes) {
  const fs::path base = fresh_dir("cli");
  const fs::path cfg = base / "config.json";
  {
    std::ofstream out(cfg);
    out << R"({"command": "limit-law", "replicates": 2000, "spec": )"
        << spec_to_json(bernoulli_mixture(0.3)) << "}";
  }
  const fs::path a = base / "a";
  const fs::path bdir = base / "b";
  auto invoke = [&](const fs::path& dir) {
    const std::string cmd = "\"" + cli + "\" \"" + cfg.string() + "\" --out \"" +
                            dir.string() + "\" > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  const int ra = invoke(a);
  const int rb = invoke(bdir);
  if (ra != 0 || rb != 0) {
    notes.push_back("CLI exited with status " + std::to_string(ra) + " / " +
                    std::to_string(rb));
    return false;
  }
  bool ok = true;
  for (const char* f : {"summary.json", "results.csv", "reference.csv"}) {
    if (slurp(a / f) != slurp(bdir / f)) {
      notes.push_back(std::string(f) + " differs between reruns");
      ok = false;
    }
  }

  // A second, cheap command for good measure.
  const fs::path cfg2 = base / "rho.json";
  {
    std::ofstream out(cfg2);
    out << R"({"command": "rho",
               "mean1": {"kind": "arithmetic_weighted", "weights": [0.5, 0.5]},
               "mean2": {"kind": "geometric_weighted", "weights": [0.5, 0.5]},
               "grid": {"interval": [0, 1]}})";
  }
  const fs::path c = base / "c";
  const fs::path d = base / "d";
  auto invoke2 = [&](const fs::path& dir) {
    const std::string cmd = "\"" + cli + "\" \"" + cfg2.string() + "\" --out \"" +
                            dir.string() + "\" > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  if (invoke2(c) != 0 || invoke2(d) != 0) {
    notes.push_back("CLI failed on the sup-distance config");
    ok = false;
  } else if (slurp(c / "summary.json") != slurp(d / "summary.json")) {
    notes.push_back("sup-distance summaries differ between reruns");
    ok = false;
  }
  return ok;
}

struct CriterionSpec {
  int id;
  const char* label;
  double time_limit; // seconds; 0 = unlimited
  std::function<bool(Notes&)> run;
};

} // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: %s <path-to-cli>\n", argv[0]);
    return 2;
  }
  const std::string cli = argv[1];

  const std::vector<CriterionSpec> criteria = {
      {1, "arithmetic-geometric sup distance is exactly one half", 1.0,
       criterion_sup_distance},
      {2, "closed-form expectations match 64-node quadrature within 1e-8", 10.0,
       criterion_quadrature_oracles},
      {3, "closed-form expectations certify as means on fine grids", 5.0,
       closed_form_means_are_certified},
      {4, "two-atom mixture statistic matches its scaled half-normal limit",
       60.0, criterion_two_atom_clt},
      {5, "generic limit sampler matches the two-atom closed form", 30.0,
       generic_and_closed_form_limits_agree},
      {6, "weighted arithmetic statistic matches its half-normal limit", 60.0,
       criterion_weighted_arithmetic_clt},
      {7, "weighted power limit matches in the log domain with exact sup ratios",
       60.0, criterion_power_limit},
      {8, "running-average deviations shrink from n=100 to n=10000", 60.0,
       criterion_slln_trend},
      {9, "module invariants hold as randomized property suites", 120.0,
       criterion_invariant_battery},
      {10, "CLI reruns produce byte-identical artifacts", 0.0,
       [&cli](Notes& n) { return criterion_cli_reproducibility(cli, n); }},
  };

  int failures = 0;
  for (const CriterionSpec& c : criteria) {
    Notes notes;
    const auto start = std::chrono::steady_clock::now();
    bool ok = false;
    try {
      ok = c.run(notes);
    } catch (const std::exception& e) {
      notes.push_back(std::string("unexpected exception: ") + e.what());
      ok = false;
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (c.time_limit > 0.0 && elapsed >= c.time_limit) {
      notes.push_back("runtime " + std::to_string(elapsed) + " s exceeded " +
                      std::to_string(c.time_limit) + " s");
      ok = false;
    }
    std::printf("[%s] criterion %d: %s (%.2f s)\n", ok ? "PASS" : "FAIL", c.id,
                c.label, elapsed);
    for (const std::string& n : notes) std::printf("    - %s\n", n.c_str());
    if (!ok) ++failures;
  }
  if (failures > 0) {
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return 1;
  }
  std::printf("all %zu criteria passed\n", criteria.size());
  return 0;
}
