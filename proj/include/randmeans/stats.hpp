#ifndef RANDMEANS_STATS_HPP
#define RANDMEANS_STATS_HPP

#include <cstdint>
#include <functional>
#include <vector>

namespace randmeans {

// Replicated simulation output together with the RNG provenance that
// produced it: values[r] came from stream (seed, stream_begin + r).
class EmpiricalSample {
public:
  EmpiricalSample() = default;
  EmpiricalSample(std::vector<double> values, std::uint64_t seed,
                  std::uint64_t stream_begin);

  const std::vector<double>& values() const noexcept { return values_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_begin() const noexcept { return stream_begin_; }
  std::uint64_t stream_end() const noexcept {
    return stream_begin_ + values_.size();
  }

  std::size_t size() const noexcept { return values_.size(); }
  double mean() const;
  double stddev() const;

  // Ascending copy, built once and cached for CDF queries.
  const std::vector<double>& sorted() const;
  // Empirical CDF: fraction of values <= x.
  double cdf(double x) const;

private:
  std::vector<double> values_;
  std::uint64_t seed_ = 0;
  std::uint64_t stream_begin_ = 0;
  mutable std::vector<double> sorted_;
};

// Two-sample Kolmogorov-Smirnov distance sup_x |F_a(x) - F_b(x)|.
double ks_distance(const EmpiricalSample& a, const EmpiricalSample& b);

// One-sample Kolmogorov-Smirnov distance against a reference CDF.
double ks_against_cdf(const EmpiricalSample& a,
                      const std::function<double(double)>& cdf);

// P(|N(0, sigma^2)| <= x) = erf(x / (sigma sqrt 2)); degenerates to a
// step at 0 when sigma == 0.
double half_normal_cdf(double sigma, double x);

} // namespace randmeans

#endif
