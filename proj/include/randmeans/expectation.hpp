#ifndef RANDMEANS_EXPECTATION_HPP
#define RANDMEANS_EXPECTATION_HPP

#include <optional>
#include <string>

#include "randmeans/grid.hpp"
#include "randmeans/mean.hpp"
#include "randmeans/random_mean.hpp"
#include "randmeans/rng.hpp"

namespace randmeans {

enum class ExpectationMethod { closed_form, quadrature, monte_carlo };

std::string to_string(ExpectationMethod m);

// The expectation of a random mean is itself a (non-random) mean; this
// carries the mean together with how it was obtained and an error bound
// for the non-exact routes (0 for closed forms).
struct ExpectationResult {
  MeanExpr mean;
  ExpectationMethod method = ExpectationMethod::closed_form;
  double error_estimate = 0.0;
};

// Exact expectation when one is known:
//   discrete mixture                    -> Mixture{probs, means}
//   kernel family, uniform weight       -> CauchyPowerMean / LogarithmicMean
//   kernel family, triangular weight    -> TriangularDensityPowerMean / ...LogMean
//   kernel family (exponent 0), trunc-exponential weight -> ScaledLogMean
//   kernel family (exponent 0), sine weight              -> SineDensityMean
//   weighted arithmetic                 -> ArithmeticWeighted{E xi..., slack}
//   weighted power                      -> GeometricWeighted{E xi, 1 - E xi}
// (exponents within 1e-8 of zero take the logarithmic branch).  Returns
// nullopt for combinations without a known closed form.
std::optional<ExpectationResult> closed_form_expectation(const RandomMeanSpec& spec);

// Numerical expectation, tabulated on g as a GridMean.  Continuous weight
// laws are integrated with an n-node Gauss-Legendre rule (density folded
// in); discrete laws are summed exactly; the weighted power family is
// integrated in the log domain, matching its geometric averaging.  The
// error estimate is the max node difference against the 2n-node rule.
ExpectationResult quadrature_expectation(const RandomMeanSpec& spec,
                                         const GridSpec& g, int nodes = 64);

// Monte Carlo expectation from n draws, tabulated on g.  Node values are
// running (Welford) averages of the realized means -- geometric averages
// for the weighted power family -- and the error estimate is the largest
// node standard error.
ExpectationResult monte_carlo_expectation(const RandomMeanSpec& spec,
                                          const GridSpec& g, long long n,
                                          RngStream& rng);

// Internality violation of the computed expectation over g: 0 certifies
// that the expectation is again a mean on the grid.
double check_is_mean(const ExpectationResult& result, const GridSpec& g);

} // namespace randmeans

#endif
