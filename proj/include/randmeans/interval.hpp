#ifndef RANDMEANS_INTERVAL_HPP
#define RANDMEANS_INTERVAL_HPP

#include <cmath>

#include "randmeans/errors.hpp"

namespace randmeans {

// Compact interval [lo, hi] with lo < hi.  All means and grids in this
// library live on powers of such an interval.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  bool positive() const noexcept { return lo > 0.0; }
  bool nonneg() const noexcept { return lo >= 0.0; }
  double diameter() const noexcept { return hi - lo; }
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }

  void validate() const {
    if (!std::isfinite(lo) || !std::isfinite(hi))
      fail(ErrorCode::invalid, "interval endpoints must be finite");
    if (!(lo < hi))
      fail(ErrorCode::invalid, "interval requires lo < hi");
  }
};

inline bool operator==(const Interval& a, const Interval& b) noexcept {
  return a.lo == b.lo && a.hi == b.hi;
}

} // namespace randmeans

#endif
