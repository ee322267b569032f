#ifndef RANDMEANS_DISTRIBUTIONS_HPP
#define RANDMEANS_DISTRIBUTIONS_HPP

#include <span>
#include <variant>
#include <vector>

#include "randmeans/errors.hpp"
#include "randmeans/rng.hpp"

namespace randmeans {

// Small dense symmetric matrix (row-major).  Only used for covariance
// bookkeeping of the low-dimensional weight laws, so no linear-algebra
// library leaks into the public interface.
struct CovMatrix {
  int n = 0;
  std::vector<double> a; // n * n entries, row-major

  static CovMatrix zero(int n) {
    return CovMatrix{n, std::vector<double>(static_cast<std::size_t>(n) * n, 0.0)};
  }
  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

// --- scalar laws on subsets of [0, 1] (plus Dirac) -------------------------

struct Bernoulli {
  double q = 0.5; // P(1) = q, P(0) = 1 - q
};

struct FiniteDiscrete {
  std::vector<double> atoms;
  std::vector<double> probs;
};

struct Uniform01 {};

// Density 2 t on (0, 1); sampled by inversion, F^{-1}(u) = sqrt(u).
struct TriangularDensity {};

// Density (e/(e-1)) e^{-t} on (0, 1).
struct TruncatedExponential {};

// Density sin t / (1 - cos 1) on (0, 1).
struct SineDensity {};

struct Dirac {
  double a = 0.0;
};

class ScalarDist {
public:
  using Node = std::variant<Bernoulli, FiniteDiscrete, Uniform01,
                            TriangularDensity, TruncatedExponential,
                            SineDensity, Dirac>;

  ScalarDist() : node_(Uniform01{}) {}
  ScalarDist(Node node); // validates
  const Node& node() const noexcept { return node_; }

private:
  Node node_;
};

struct ScalarMoments {
  double mean = 0.0;
  double var = 0.0;
};

double sample(const ScalarDist& d, RngStream& rng);
ScalarMoments moments(const ScalarDist& d);
double cdf(const ScalarDist& d, double x);

// Closed support bounds, used for admissibility checks of weight laws.
double support_lo(const ScalarDist& d);
double support_hi(const ScalarDist& d);
// True when every realization lies strictly inside (0, 1).
bool support_in_open01(const ScalarDist& d);
// True when every realization lies in [0, 1].
bool support_in_closed01(const ScalarDist& d);

// --- vector laws for simplex-valued weights --------------------------------

struct ProductOfScalars {
  std::vector<ScalarDist> components;
};

// Uniform distribution on {y in R_+^dim : sum y_i <= 1}, sampled via
// sorted-uniform spacings with the slack coordinate dropped.
struct SimplexUniform {
  int dim = 1;
};

struct FiniteDiscreteVector {
  std::vector<std::vector<double>> atoms;
  std::vector<double> probs;
};

class VectorDist {
public:
  using Node = std::variant<ProductOfScalars, SimplexUniform, FiniteDiscreteVector>;

  VectorDist() : node_(SimplexUniform{1}) {}
  VectorDist(Node node); // validates
  const Node& node() const noexcept { return node_; }
  int dim() const;

private:
  Node node_;
};

struct VectorMoments {
  std::vector<double> mean;
  CovMatrix cov;
};

std::vector<double> sample(const VectorDist& d, RngStream& rng);
VectorMoments moments(const VectorDist& d);

// Sum of componentwise support upper bounds; a product law is an
// admissible weight law only when this is <= 1 (the constraint must hold
// surely, not just in expectation).
double support_upper_bound_sum(const VectorDist& d);

// Covariance of the multinomial frequency vector for one trial:
// diagonal q_i (1 - q_i), off-diagonal -q_i q_j.  Singular (rows sum to 0)
// but positive semidefinite.
CovMatrix multinomial_covariance(std::span<const double> probs);

// Draws from N(0, cov) for symmetric positive-semidefinite cov via
// spectral decomposition; eigenvalues in (-1e-10, 1e-10) are treated as
// exact zeros, anything below -1e-10 is rejected as indefinite.
std::vector<double> sample_gaussian(const CovMatrix& cov, RngStream& rng);

} // namespace randmeans

#endif
