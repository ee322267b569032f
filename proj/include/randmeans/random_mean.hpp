#ifndef RANDMEANS_RANDOM_MEAN_HPP
#define RANDMEANS_RANDOM_MEAN_HPP

#include <span>
#include <variant>
#include <vector>

#include "randmeans/distributions.hpp"
#include "randmeans/interval.hpp"
#include "randmeans/mean.hpp"

namespace randmeans {

class RandomMeanSpec;

// Random mean picking mean i with probability probs[i]; the driving
// variable is the atom value (scalar or vector), mapped to its index.
struct DiscreteMixtureSpec {
  std::variant<FiniteDiscrete, FiniteDiscreteVector> dist;
  std::vector<MeanExpr> means;
  Interval interval;
  int p = 2;
};

// Two-argument Holder-type kernel with fixed exponent alpha0 and random
// weight lambda ~ lambda_dist on (0, 1).
struct RandomHolderSpec {
  double alpha0 = 0.0;
  ScalarDist lambda_dist;
  Interval interval;
};

// Arithmetic mean with random weight vector (xi_1, ..., xi_{p-1}), the
// last weight being the slack 1 - sum xi_i.  The weight law must keep
// sum xi_i <= 1 surely.
struct WeightedArithmeticSpec {
  VectorDist weight_dist;
  Interval interval;
  int p = 2;
};

// Geometric two-argument kernel x1^xi x2^{1-xi} with random exponent
// xi in [0, 1]; averaged geometrically (log domain), so its natural
// expectation object is the reference mean x1^{E xi} x2^{1-E xi}.
struct WeightedPowerSpec {
  ScalarDist exponent_dist;
  Interval interval;
};

// Atom probabilities of the driving discrete law.
const std::vector<double>& mixture_probs(const DiscreteMixtureSpec& s);

class RandomMeanSpec {
public:
  using Node = std::variant<DiscreteMixtureSpec, RandomHolderSpec,
                            WeightedArithmeticSpec, WeightedPowerSpec>;

  RandomMeanSpec(Node node); // validates admissibility
  const Node& node() const noexcept { return node_; }

  int arity() const;
  const Interval& interval() const;
  bool averages_geometrically() const {
    return std::holds_alternative<WeightedPowerSpec>(node_);
  }

private:
  Node node_;
};

// A draw of the driving variable, scalar or vector depending on family.
using DrawValue = std::vector<double>;

// Maps an admissible value of the driving variable to the realized mean:
//   discrete mixture      atom y        -> means[index of y]
//   random Holder kernel  weight y      -> PowerMean{alpha0, y}
//   weighted arithmetic   weights y     -> ArithmeticWeighted{y..., 1 - sum y}
//   weighted power        exponent y    -> GeometricWeighted{y, 1 - y}
// Values outside the admissible set are rejected.
MeanExpr realize(const RandomMeanSpec& spec, std::span<const double> y);

// Samples the driving variable and realizes it.  The driving value is
// also returned through *value when requested (used by averaging paths).
MeanExpr draw(const RandomMeanSpec& spec, RngStream& rng,
              DrawValue* value = nullptr);

// Arithmetic running average S_n = (1/n) sum draws as a MeanExpr.
// Weighted-arithmetic draws collapse to a single mean with averaged
// weights; discrete-mixture draws collapse to an atom-frequency mixture
// when that is smaller than n; otherwise an n-component mixture is built.
// Rejected for the geometric-averaging (weighted power) family.
MeanExpr running_average(const RandomMeanSpec& spec,
                         std::span<const MeanExpr> draws);

// Geometric running average of weighted-power draws: the exponents are
// averaged, giving GeometricWeighted{mean exponent, 1 - mean exponent}.
// Rejected for the arithmetic-averaging families.
MeanExpr running_geometric(const RandomMeanSpec& spec,
                           std::span<const double> exponent_draws);

} // namespace randmeans

#endif
