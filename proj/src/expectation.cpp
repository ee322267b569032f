#include "randmeans/expectation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "randmeans/metric.hpp"
#include "randmeans/quadrature.hpp"

namespace randmeans {

namespace {

constexpr double kEulerE = 2.71828182845904523536;
constexpr double kZeroBranch = 1e-8;

// Probability density of the continuous scalar laws on (0, 1); nullopt
// signals a discrete law (handled by exact summation instead).
std::optional<std::function<double(double)>> density_of(const ScalarDist& d) {
  using Fn = std::function<double(double)>;
  return std::visit(
      [](const auto& n) -> std::optional<Fn> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Uniform01>)
          return Fn([](double) { return 1.0; });
        else if constexpr (std::is_same_v<T, TriangularDensity>)
          return Fn([](double t) { return 2.0 * t; });
        else if constexpr (std::is_same_v<T, TruncatedExponential>)
          return Fn([](double t) { return kEulerE / (kEulerE - 1.0) * std::exp(-t); });
        else if constexpr (std::is_same_v<T, SineDensity>)
          return Fn([](double t) { return std::sin(t) / (1.0 - std::cos(1.0)); });
        else
          return std::nullopt;
      },
      d.node());
}

// Atom/probability view of the discrete scalar laws.
std::vector<std::pair<double, double>> atoms_of(const ScalarDist& d) {
  return std::visit(
      [](const auto& n) -> std::vector<std::pair<double, double>> {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, FiniteDiscrete>) {
          std::vector<std::pair<double, double>> out;
          for (std::size_t i = 0; i < n.atoms.size(); ++i)
            out.emplace_back(n.atoms[i], n.probs[i]);
          return out;
        } else if constexpr (std::is_same_v<T, Dirac>) {
          return {{n.a, 1.0}};
        } else if constexpr (std::is_same_v<T, Bernoulli>) {
          return {{0.0, 1.0 - n.q}, {1.0, n.q}};
        } else {
          fail(ErrorCode::unsupported, "expectation: law has no atom decomposition");
        }
      },
      d.node());
}

// Tabulates f over g with node values projected into [min(x), max(x)];
// the projection removes sub-ulp rounding excess so the tabulated
// expectation is itself a mean, node for node.
GridMean tabulate_clamped(const GridSpec& g,
                          const std::function<double(std::span<const double>)>& f) {
  GridMean out{g, std::vector<double>(static_cast<std::size_t>(g.node_count()))};
  for_each_node(g, [&](std::int64_t node, std::span<const double> x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    out.values[static_cast<std::size_t>(node)] = std::clamp(f(x), *lo, *hi);
  });
  return out;
}

double max_node_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

// Expected exponent of the weighted power family by direct integration
// (Gauss-Legendre for continuous laws, exact sums otherwise).
double integrated_mean_exponent(const ScalarDist& d, int nodes) {
  if (auto dens = density_of(d)) {
    const QuadratureRule rule = gauss_legendre_01(nodes);
    double m = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
      m += rule.weights[i] * (*dens)(rule.nodes[i]) * rule.nodes[i];
    return m;
  }
  double m = 0.0;
  for (const auto& [a, p] : atoms_of(d)) m += p * a;
  return m;
}

GridMean holder_quadrature_table(const RandomHolderSpec& s, const GridSpec& g,
                                 int nodes) {
  std::vector<MeanExpr> kernels;
  std::vector<double> weights;
  if (auto dens = density_of(s.lambda_dist)) {
    const QuadratureRule rule = gauss_legendre_01(nodes);
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      kernels.emplace_back(PowerMean{s.alpha0, rule.nodes[i]});
      weights.push_back(rule.weights[i] * (*dens)(rule.nodes[i]));
    }
  } else {
    for (const auto& [a, p] : atoms_of(s.lambda_dist)) {
      if (!(a > 0.0 && a < 1.0))
        fail(ErrorCode::invalid, "expectation: kernel weight atom outside (0, 1)");
      kernels.emplace_back(PowerMean{s.alpha0, a});
      weights.push_back(p);
    }
  }
  return tabulate_clamped(g, [&](std::span<const double> x) {
    double v = 0.0;
    for (std::size_t i = 0; i < kernels.size(); ++i)
      v += weights[i] * eval(kernels[i], x);
    return v;
  });
}

std::vector<double> arithmetic_weights_from_moments(const WeightedArithmeticSpec& s) {
  const VectorMoments m = moments(s.weight_dist);
  std::vector<double> w = m.mean;
  double sum = 0.0;
  for (double v : w) sum += v;
  w.push_back(std::max(0.0, 1.0 - sum));
  return w;
}

} // namespace

std::string to_string(ExpectationMethod m) {
  switch (m) {
    case ExpectationMethod::closed_form: return "closed_form";
    case ExpectationMethod::quadrature: return "quadrature";
    default: return "monte_carlo";
  }
}

std::optional<ExpectationResult> closed_form_expectation(const RandomMeanSpec& spec) {
  return std::visit(
      [&](const auto& s) -> std::optional<ExpectationResult> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiscreteMixtureSpec>) {
          return ExpectationResult{
              MeanExpr(Mixture{mixture_probs(s), s.means}),
              ExpectationMethod::closed_form, 0.0};
        } else if constexpr (std::is_same_v<T, RandomHolderSpec>) {
          const bool zero = std::abs(s.alpha0) <= kZeroBranch;
          const bool positive = s.alpha0 > kZeroBranch;
          const auto& dn = s.lambda_dist.node();
          if (std::holds_alternative<Uniform01>(dn)) {
            if (zero)
              return ExpectationResult{MeanExpr(LogarithmicMean{}),
                                       ExpectationMethod::closed_form, 0.0};
            if (positive)
              return ExpectationResult{MeanExpr(CauchyPowerMean{s.alpha0}),
                                       ExpectationMethod::closed_form, 0.0};
            return std::nullopt;
          }
          if (std::holds_alternative<TriangularDensity>(dn)) {
            if (zero)
              return ExpectationResult{MeanExpr(TriangularDensityLogMean{}),
                                       ExpectationMethod::closed_form, 0.0};
            if (positive)
              return ExpectationResult{MeanExpr(TriangularDensityPowerMean{s.alpha0}),
                                       ExpectationMethod::closed_form, 0.0};
            return std::nullopt;
          }
          if (std::holds_alternative<TruncatedExponential>(dn) && zero)
            return ExpectationResult{MeanExpr(ScaledLogMean{}),
                                     ExpectationMethod::closed_form, 0.0};
          if (std::holds_alternative<SineDensity>(dn) && zero)
            return ExpectationResult{MeanExpr(SineDensityMean{}),
                                     ExpectationMethod::closed_form, 0.0};
          return std::nullopt;
        } else if constexpr (std::is_same_v<T, WeightedArithmeticSpec>) {
          return ExpectationResult{
              MeanExpr(ArithmeticWeighted{arithmetic_weights_from_moments(s)}),
              ExpectationMethod::closed_form, 0.0};
        } else {
          const double m = moments(s.exponent_dist).mean;
          return ExpectationResult{MeanExpr(GeometricWeighted{{m, 1.0 - m}}),
                                   ExpectationMethod::closed_form, 0.0};
        }
      },
      spec.node());
}

ExpectationResult quadrature_expectation(const RandomMeanSpec& spec,
                                         const GridSpec& g, int nodes) {
  g.validate();
  if (nodes < 1) fail(ErrorCode::invalid, "expectation: need at least one quadrature node");
  if (g.p != spec.arity())
    fail(ErrorCode::domain, "expectation: grid dimension does not match family arity");
  if (g.interval.lo < spec.interval().lo || g.interval.hi > spec.interval().hi)
    fail(ErrorCode::domain, "expectation: grid exceeds the family interval");

  return std::visit(
      [&](const auto& s) -> ExpectationResult {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiscreteMixtureSpec>) {
          const std::vector<double>& probs = mixture_probs(s);
          GridMean table = tabulate_clamped(g, [&](std::span<const double> x) {
            double v = 0.0;
            for (std::size_t i = 0; i < s.means.size(); ++i)
              v += probs[i] * eval(s.means[i], x);
            return v;
          });
          return {MeanExpr(std::move(table)), ExpectationMethod::quadrature, 0.0};
        } else if constexpr (std::is_same_v<T, RandomHolderSpec>) {
          GridMean coarse = holder_quadrature_table(s, g, nodes);
          const bool discrete = !density_of(s.lambda_dist).has_value();
          double err = 0.0;
          if (!discrete) {
            const GridMean fine = holder_quadrature_table(s, g, 2 * nodes);
            err = max_node_diff(coarse.values, fine.values);
          }
          return {MeanExpr(std::move(coarse)), ExpectationMethod::quadrature, err};
        } else if constexpr (std::is_same_v<T, WeightedArithmeticSpec>) {
          // Only first moments of the weight law enter the expectation, so
          // the simplex integral reduces to the analytic moment vector.
          const MeanExpr exact(ArithmeticWeighted{arithmetic_weights_from_moments(s)});
          GridMean table = tabulate_clamped(
              g, [&](std::span<const double> x) { return eval(exact, x); });
          return {MeanExpr(std::move(table)), ExpectationMethod::quadrature, 0.0};
        } else {
          // Geometric averaging: integrate the exponent in the log domain.
          const double m = integrated_mean_exponent(s.exponent_dist, nodes);
          const MeanExpr ref(GeometricWeighted{{m, 1.0 - m}});
          GridMean table = tabulate_clamped(
              g, [&](std::span<const double> x) { return eval(ref, x); });
          double err = 0.0;
          if (density_of(s.exponent_dist)) {
            const double m2 = integrated_mean_exponent(s.exponent_dist, 2 * nodes);
            const MeanExpr ref2(GeometricWeighted{{m2, 1.0 - m2}});
            const GridMean table2 = tabulate_clamped(
                g, [&](std::span<const double> x) { return eval(ref2, x); });
            err = max_node_diff(table.values, table2.values);
          }
          return {MeanExpr(std::move(table)), ExpectationMethod::quadrature, err};
        }
      },
      spec.node());
}

ExpectationResult monte_carlo_expectation(const RandomMeanSpec& spec,
                                          const GridSpec& g, long long n,
                                          RngStream& rng) {
  g.validate();
  if (n < 1) fail(ErrorCode::invalid, "expectation: need at least one draw");
  if (g.p != spec.arity())
    fail(ErrorCode::domain, "expectation: grid dimension does not match family arity");
  if (g.interval.lo < spec.interval().lo || g.interval.hi > spec.interval().hi)
    fail(ErrorCode::domain, "expectation: grid exceeds the family interval");

  const bool log_domain = spec.averages_geometrically();
  const auto count = static_cast<std::size_t>(g.node_count());
  std::vector<double> mean_acc(count, 0.0), m2_acc(count, 0.0), first(count, 0.0);
  for (long long j = 1; j <= n; ++j) {
    const MeanExpr m = draw(spec, rng);
    for_each_node(g, [&](std::int64_t node, std::span<const double> x) {
      const double raw = eval(m, x);
      const double v = log_domain ? std::log(raw) : raw;
      const auto i = static_cast<std::size_t>(node);
      if (j == 1) first[i] = raw;
      const double delta = v - mean_acc[i];
      mean_acc[i] += delta / static_cast<double>(j);
      m2_acc[i] += delta * (v - mean_acc[i]);
    });
  }

  double max_se = 0.0;
  GridMean table{g, std::vector<double>(count)};
  std::size_t i = 0;
  for_each_node(g, [&](std::int64_t, std::span<const double> x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    double value;
    double se = 0.0;
    if (m2_acc[i] == 0.0) {
      // Every draw produced the same value here (e.g. a deterministic
      // exponent law): the average is that value, with no roundtrip error.
      value = first[i];
    } else {
      value = log_domain ? std::exp(mean_acc[i]) : mean_acc[i];
      if (n > 1)
        se = std::sqrt(m2_acc[i] / (static_cast<double>(n - 1) *
                                    static_cast<double>(n)));
      if (log_domain) se *= value; // delta method back to the value scale
    }
    table.values[i] = std::clamp(value, *lo, *hi);
    max_se = std::max(max_se, se);
    ++i;
  });
  return {MeanExpr(std::move(table)), ExpectationMethod::monte_carlo, max_se};
}

double check_is_mean(const ExpectationResult& result, const GridSpec& g) {
  return internality_violation(result.mean, g);
}

} // namespace randmeans
