#ifndef RANDMEANS_MEAN_HPP
#define RANDMEANS_MEAN_HPP

#include <span>
#include <variant>
#include <vector>

#include "randmeans/grid.hpp"
#include "randmeans/interval.hpp"

namespace randmeans {

class MeanExpr;

// ---------------------------------------------------------------------------
// Mean variants.  Every variant satisfies internality
//     min(x) <= m(x) <= max(x)
// on its admissible interval, is continuous there, and agrees with the
// common coordinate on the diagonal.  The two-argument closed forms below
// arise as exact expectations of randomly weighted Holder-type means; they
// are kept as first-class variants so expectations stay in closed form.
// ---------------------------------------------------------------------------

// sum_i w_i x_i with w in the probability simplex.
struct ArithmeticWeighted {
  std::vector<double> weights;
};

// prod_i x_i^{w_i} with w in the probability simplex; value 0 when any
// coordinate with positive weight is 0 (continuous extension to [0, b]).
struct GeometricWeighted {
  std::vector<double> weights;
};

// Two-argument weighted Holder mean (lambda x1^alpha + (1-lambda) x2^alpha)^{1/alpha};
// alpha == 0 means the weighted geometric branch x1^lambda x2^{1-lambda}.
// Evaluation switches to the alpha == 0 branch when |alpha| <= 1e-8.
struct PowerMean {
  double alpha = 1.0;
  double lambda = 0.5;
};

// (x1 - x2) / (ln x1 - ln x2): the expectation of the geometric-branch
// Holder kernel under a uniformly distributed weight.
struct LogarithmicMean {};

// Cauchy quotient mean of t^{alpha0+1} and t^{alpha0}:
// (x1^{alpha0+1} - x2^{alpha0+1}) / ((1/alpha0 + 1)(x1^{alpha0} - x2^{alpha0})).
// Expectation of the alpha0-power Holder kernel under a uniform weight.
struct CauchyPowerMean {
  double alpha0 = 1.0;
};

// Expectation of the alpha0-power Holder kernel under the density 2 t on (0,1).
struct TriangularDensityPowerMean {
  double alpha0 = 1.0;
};

// Expectation of the geometric-branch kernel under the density 2 t on (0,1).
struct TriangularDensityLogMean {};

// Expectation of the geometric-branch kernel under the truncated exponential
// density e^{1-t}/(e-1) on (0,1); equals the logarithmic mean of
// (x1/(e-1), e x2/(e-1)).
struct ScaledLogMean {};

// Expectation of the geometric-branch kernel under the density
// sin t / (1 - cos 1) on (0,1).
struct SineDensityMean {};

// Convex combination sum_i c_i m_i of means of common arity.
struct Mixture {
  std::vector<double> coeffs;
  std::vector<MeanExpr> components;
};

// Tabulated mean: values on a regular grid, multilinear interpolation in
// between.  Used for quadrature / Monte Carlo expectation results.
struct GridMean {
  GridSpec grid;
  std::vector<double> values; // row-major, last axis fastest
};

class MeanExpr {
public:
  using Node =
      std::variant<ArithmeticWeighted, GeometricWeighted, PowerMean,
                   LogarithmicMean, CauchyPowerMean, TriangularDensityPowerMean,
                   TriangularDensityLogMean, ScaledLogMean, SineDensityMean,
                   Mixture, GridMean>;

  MeanExpr() : node_(ArithmeticWeighted{{0.5, 0.5}}) {}
  MeanExpr(Node node); // validates; throws Error(invalid) on bad parameters

  const Node& node() const noexcept { return node_; }

  // Number of arguments this mean accepts.
  int arity() const;

  // Checks the variant is admissible on the given interval (e.g. negative
  // exponents need a positive interval, log-family means a nonnegative one).
  void validate_on(const Interval& interval) const;

  bool operator==(const MeanExpr& other) const;

private:
  Node node_;
};

// Evaluates m at x (dimension must equal m.arity()).  Exact on the
// diagonal: if all coordinates are equal the common value is returned.
double eval(const MeanExpr& m, std::span<const double> x);

inline double eval(const MeanExpr& m, std::initializer_list<double> x) {
  return eval(m, std::span<const double>(x.begin(), x.size()));
}

// Node-by-node tabulation of m over g (row-major order).
std::vector<double> tabulate(const MeanExpr& m, const GridSpec& g);

} // namespace randmeans

#endif
