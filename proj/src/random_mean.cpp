#include "randmeans/random_mean.hpp"

#include <algorithm>
#include <cmath>

#include "randmeans/metric.hpp"

namespace randmeans {

namespace {

// Construction-time sanity grid: internality of user-supplied component
// means is checked exhaustively but coarsely.
constexpr int kConstructionGridPts = 11;

std::size_t mixture_atom_count(const DiscreteMixtureSpec& s) {
  return mixture_probs(s).size();
}

// Index of the atom equal to y, or npos.
std::size_t mixture_atom_index(const DiscreteMixtureSpec& s,
                               std::span<const double> y) {
  if (const auto* fd = std::get_if<FiniteDiscrete>(&s.dist)) {
    if (y.size() != 1) return static_cast<std::size_t>(-1);
    for (std::size_t i = 0; i < fd->atoms.size(); ++i)
      if (fd->atoms[i] == y[0]) return i;
    return static_cast<std::size_t>(-1);
  }
  const auto& fdv = std::get<FiniteDiscreteVector>(s.dist);
  for (std::size_t i = 0; i < fdv.atoms.size(); ++i)
    if (std::equal(fdv.atoms[i].begin(), fdv.atoms[i].end(), y.begin(), y.end()) &&
        fdv.atoms[i].size() == y.size())
      return i;
  return static_cast<std::size_t>(-1);
}

} // namespace

const std::vector<double>& mixture_probs(const DiscreteMixtureSpec& s) {
  if (const auto* fd = std::get_if<FiniteDiscrete>(&s.dist)) return fd->probs;
  return std::get<FiniteDiscreteVector>(s.dist).probs;
}

RandomMeanSpec::RandomMeanSpec(Node node) : node_(std::move(node)) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        s.interval.validate();
        if constexpr (std::is_same_v<T, DiscreteMixtureSpec>) {
          if (s.p < 1) fail(ErrorCode::invalid, "discrete mixture: p must be >= 1");
          const std::size_t k = std::visit(
              [](const auto& d) { return d.probs.size(); }, s.dist);
          // Run the constructor validation of the discrete law itself.
          if (const auto* fd = std::get_if<FiniteDiscrete>(&s.dist))
            (void)ScalarDist(*fd);
          else
            (void)VectorDist(std::get<FiniteDiscreteVector>(s.dist));
          if (s.means.size() != k)
            fail(ErrorCode::invalid, "discrete mixture: one mean per atom required");
          const GridSpec check{s.interval, s.p, kConstructionGridPts};
          for (const MeanExpr& m : s.means) {
            if (m.arity() != s.p)
              fail(ErrorCode::invalid, "discrete mixture: component arity mismatch");
            m.validate_on(s.interval);
            if (internality_violation(m, check) > 0.0)
              fail(ErrorCode::invalid,
                   "discrete mixture: component violates internality on the interval");
          }
        } else if constexpr (std::is_same_v<T, RandomHolderSpec>) {
          if (!s.interval.nonneg())
            fail(ErrorCode::invalid, "random kernel family needs a nonnegative interval");
          if (s.alpha0 < 0.0 && !s.interval.positive())
            fail(ErrorCode::invalid,
                 "negative-exponent kernel family needs a positive interval");
          if (!support_in_open01(s.lambda_dist))
            fail(ErrorCode::invalid,
                 "random kernel family: weight law must live inside (0, 1)");
        } else if constexpr (std::is_same_v<T, WeightedArithmeticSpec>) {
          if (s.p < 2)
            fail(ErrorCode::invalid, "weighted arithmetic family: p must be >= 2");
          if (s.weight_dist.dim() != s.p - 1)
            fail(ErrorCode::invalid,
                 "weighted arithmetic family: weight law must have dimension p - 1");
          if (std::holds_alternative<ProductOfScalars>(s.weight_dist.node())) {
            const auto& prod = std::get<ProductOfScalars>(s.weight_dist.node());
            for (const ScalarDist& c : prod.components)
              if (support_lo(c) < 0.0)
                fail(ErrorCode::invalid,
                     "weighted arithmetic family: weights must be nonnegative");
          }
          if (support_upper_bound_sum(s.weight_dist) > 1.0)
            fail(ErrorCode::invalid,
                 "weighted arithmetic family: weights may exceed the simplex");
          if (const auto* fdv = std::get_if<FiniteDiscreteVector>(&s.weight_dist.node())) {
            for (const auto& a : fdv->atoms) {
              double sum = 0.0;
              for (double v : a) {
                if (v < 0.0)
                  fail(ErrorCode::invalid,
                       "weighted arithmetic family: weights must be nonnegative");
                sum += v;
              }
              if (sum > 1.0 + 1e-12)
                fail(ErrorCode::invalid,
                     "weighted arithmetic family: weights may exceed the simplex");
            }
          }
        } else {
          if (!s.interval.positive())
            fail(ErrorCode::invalid, "weighted power family needs a positive interval");
          if (!support_in_closed01(s.exponent_dist))
            fail(ErrorCode::invalid,
                 "weighted power family: exponent law must live in [0, 1]");
        }
      },
      node_);
}

int RandomMeanSpec::arity() const {
  return std::visit(
      [](const auto& s) -> int {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiscreteMixtureSpec>)
          return s.p;
        else if constexpr (std::is_same_v<T, WeightedArithmeticSpec>)
          return s.p;
        else
          return 2;
      },
      node_);
}

const Interval& RandomMeanSpec::interval() const {
  return std::visit([](const auto& s) -> const Interval& { return s.interval; },
                    node_);
}

MeanExpr realize(const RandomMeanSpec& spec, std::span<const double> y) {
  return std::visit(
      [&](const auto& s) -> MeanExpr {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiscreteMixtureSpec>) {
          const std::size_t i = mixture_atom_index(s, y);
          if (i == static_cast<std::size_t>(-1))
            fail(ErrorCode::domain, "discrete mixture: value is not an atom");
          return s.means[i];
        } else if constexpr (std::is_same_v<T, RandomHolderSpec>) {
          if (y.size() != 1 || !(y[0] > 0.0 && y[0] < 1.0))
            fail(ErrorCode::domain, "random kernel family: weight must lie in (0, 1)");
          return MeanExpr(PowerMean{s.alpha0, y[0]});
        } else if constexpr (std::is_same_v<T, WeightedArithmeticSpec>) {
          if (static_cast<int>(y.size()) != s.p - 1)
            fail(ErrorCode::domain, "weighted arithmetic family: wrong weight dimension");
          double sum = 0.0;
          for (double v : y) {
            if (!(v >= 0.0))
              fail(ErrorCode::domain, "weighted arithmetic family: negative weight");
            sum += v;
          }
          if (sum > 1.0 + 1e-12)
            fail(ErrorCode::domain, "weighted arithmetic family: weights exceed simplex");
          std::vector<double> w(y.begin(), y.end());
          w.push_back(std::max(0.0, 1.0 - sum));
          return MeanExpr(ArithmeticWeighted{std::move(w)});
        } else {
          if (y.size() != 1 || !(y[0] >= 0.0 && y[0] <= 1.0))
            fail(ErrorCode::domain, "weighted power family: exponent must lie in [0, 1]");
          return MeanExpr(GeometricWeighted{{y[0], 1.0 - y[0]}});
        }
      },
      spec.node());
}

MeanExpr draw(const RandomMeanSpec& spec, RngStream& rng, DrawValue* value) {
  DrawValue y = std::visit(
      [&](const auto& s) -> DrawValue {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, DiscreteMixtureSpec>) {
          if (const auto* fd = std::get_if<FiniteDiscrete>(&s.dist))
            return {sample(ScalarDist(*fd), rng)};
          return sample(VectorDist(std::get<FiniteDiscreteVector>(s.dist)), rng);
        } else if constexpr (std::is_same_v<T, RandomHolderSpec>) {
          return {sample(s.lambda_dist, rng)};
        } else if constexpr (std::is_same_v<T, WeightedArithmeticSpec>) {
          return sample(s.weight_dist, rng);
        } else {
          return {sample(s.exponent_dist, rng)};
        }
      },
      spec.node());
  MeanExpr m = realize(spec, y);
  if (value) *value = std::move(y);
  return m;
}

MeanExpr running_average(const RandomMeanSpec& spec,
                         std::span<const MeanExpr> draws) {
  if (spec.averages_geometrically())
    fail(ErrorCode::unsupported,
         "running_average: weighted power family averages geometrically");
  if (draws.empty()) fail(ErrorCode::domain, "running_average: no draws");
  const auto n = draws.size();

  if (const auto* wa = std::get_if<WeightedArithmeticSpec>(&spec.node())) {
    // Linear family: the average of arithmetic means is the arithmetic
    // mean with averaged weights.
    std::vector<double> w(static_cast<std::size_t>(wa->p), 0.0);
    for (const MeanExpr& d : draws) {
      const auto* aw = std::get_if<ArithmeticWeighted>(&d.node());
      if (!aw || static_cast<int>(aw->weights.size()) != wa->p)
        fail(ErrorCode::domain, "running_average: draw is not a weighted arithmetic mean");
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += aw->weights[i];
    }
    for (double& v : w) v /= static_cast<double>(n);
    return MeanExpr(ArithmeticWeighted{std::move(w)});
  }

  if (const auto* dm = std::get_if<DiscreteMixtureSpec>(&spec.node())) {
    const std::size_t k = mixture_atom_count(*dm);
    if (k < n) {
      // Frequency form: count how often each component was drawn.
      std::vector<double> freq(k, 0.0);
      bool matched = true;
      for (const MeanExpr& d : draws) {
        const auto it = std::find(dm->means.begin(), dm->means.end(), d);
        if (it == dm->means.end()) {
          matched = false;
          break;
        }
        freq[static_cast<std::size_t>(it - dm->means.begin())] += 1.0;
      }
      if (matched) {
        std::vector<double> coeffs;
        std::vector<MeanExpr> comps;
        for (std::size_t i = 0; i < k; ++i) {
          if (freq[i] == 0.0) continue;
          coeffs.push_back(freq[i] / static_cast<double>(n));
          comps.push_back(dm->means[i]);
        }
        return MeanExpr(Mixture{std::move(coeffs), std::move(comps)});
      }
    }
  }

  std::vector<double> coeffs(n, 1.0 / static_cast<double>(n));
  return MeanExpr(Mixture{std::move(coeffs),
                          std::vector<MeanExpr>(draws.begin(), draws.end())});
}

MeanExpr running_geometric(const RandomMeanSpec& spec,
                           std::span<const double> exponent_draws) {
  if (!spec.averages_geometrically())
    fail(ErrorCode::unsupported,
         "running_geometric: only the weighted power family averages geometrically");
  if (exponent_draws.empty()) fail(ErrorCode::domain, "running_geometric: no draws");
  double sum = 0.0;
  for (double v : exponent_draws) {
    if (!(v >= 0.0 && v <= 1.0))
      fail(ErrorCode::domain, "running_geometric: exponent outside [0, 1]");
    sum += v;
  }
  const double lbar = sum / static_cast<double>(exponent_draws.size());
  return MeanExpr(GeometricWeighted{{lbar, 1.0 - lbar}});
}

} // namespace randmeans
