#include "randmeans/stats.hpp"

#include <algorithm>
#include <cmath>

#include "randmeans/errors.hpp"

namespace randmeans {

EmpiricalSample::EmpiricalSample(std::vector<double> values, std::uint64_t seed,
                                 std::uint64_t stream_begin)
    : values_(std::move(values)), seed_(seed), stream_begin_(stream_begin) {
  if (values_.empty()) fail(ErrorCode::invalid, "empirical sample: no values");
  for (double v : values_)
    if (!std::isfinite(v))
      fail(ErrorCode::invalid, "empirical sample: values must be finite");
}

double EmpiricalSample::mean() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s / static_cast<double>(values_.size());
}

double EmpiricalSample::stddev() const {
  if (values_.size() < 2) return 0.0;
  const double m = mean();
  double s = 0.0;
  for (double v : values_) s += (v - m) * (v - m);
  return std::sqrt(s / static_cast<double>(values_.size() - 1));
}

const std::vector<double>& EmpiricalSample::sorted() const {
  if (sorted_.size() != values_.size()) {
    sorted_ = values_;
    std::sort(sorted_.begin(), sorted_.end());
  }
  return sorted_;
}

double EmpiricalSample::cdf(double x) const {
  const std::vector<double>& s = sorted();
  return static_cast<double>(std::upper_bound(s.begin(), s.end(), x) - s.begin()) /
         static_cast<double>(s.size());
}

double ks_distance(const EmpiricalSample& a, const EmpiricalSample& b) {
  const std::vector<double>& sa = a.sorted();
  const std::vector<double>& sb = b.sorted();
  const double na = static_cast<double>(sa.size());
  const double nb = static_cast<double>(sb.size());
  double d = 0.0;
  std::size_t ia = 0, ib = 0;
  // Merge walk: the ECDF difference can only change at sample points.
  while (ia < sa.size() && ib < sb.size()) {
    const double x = std::min(sa[ia], sb[ib]);
    while (ia < sa.size() && sa[ia] <= x) ++ia;
    while (ib < sb.size() && sb[ib] <= x) ++ib;
    d = std::max(d, std::abs(static_cast<double>(ia) / na -
                             static_cast<double>(ib) / nb));
  }
  return d;
}

double ks_against_cdf(const EmpiricalSample& a,
                      const std::function<double(double)>& cdf) {
  const std::vector<double>& s = a.sorted();
  const double n = static_cast<double>(s.size());
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double f = cdf(s[i]);
    d = std::max({d, f - static_cast<double>(i) / n,
                  static_cast<double>(i + 1) / n - f});
  }
  return d;
}

double half_normal_cdf(double sigma, double x) {
  if (x < 0.0) return 0.0;
  if (sigma == 0.0) return 1.0; // degenerate: point mass at zero
  return std::erf(x / (sigma * std::sqrt(2.0)));
}

} // namespace randmeans
