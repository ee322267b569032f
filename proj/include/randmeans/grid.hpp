#ifndef RANDMEANS_GRID_HPP
#define RANDMEANS_GRID_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "randmeans/errors.hpp"
#include "randmeans/interval.hpp"

namespace randmeans {

// Regular evaluation lattice over interval^p: points_per_axis equally
// spaced coordinates per axis, both endpoints always included.  Suprema
// of continuous functions over interval^p are estimated by exhaustive
// maximization over these nodes.
struct GridSpec {
  Interval interval;
  int p = 2;
  int points_per_axis = 101;

  std::int64_t node_count() const noexcept {
    std::int64_t n = 1;
    for (int i = 0; i < p; ++i) n *= points_per_axis;
    return n;
  }

  void validate() const {
    interval.validate();
    if (p < 1) fail(ErrorCode::invalid, "grid requires p >= 1");
    if (points_per_axis < 2)
      fail(ErrorCode::invalid, "grid requires points_per_axis >= 2");
  }

  // Axis coordinates; the last one is exactly interval.hi so that corner
  // nodes (where many suprema are attained) are hit without rounding.
  std::vector<double> axis() const {
    std::vector<double> c(static_cast<std::size_t>(points_per_axis));
    const double h = (interval.hi - interval.lo) / (points_per_axis - 1);
    for (int i = 0; i < points_per_axis; ++i) c[static_cast<std::size_t>(i)] = interval.lo + i * h;
    c.front() = interval.lo;
    c.back() = interval.hi;
    return c;
  }
};

inline bool operator==(const GridSpec& a, const GridSpec& b) noexcept {
  return a.interval == b.interval && a.p == b.p &&
         a.points_per_axis == b.points_per_axis;
}

// Visits every node in row-major order (last axis fastest), passing the
// node index and its coordinates.  This ordering is the one used by CSV
// exports and tabulated values.
template <typename F>
void for_each_node(const GridSpec& g, F&& f) {
  g.validate();
  const std::vector<double> ax = g.axis();
  const int p = g.p;
  const int m = g.points_per_axis;
  std::vector<int> idx(static_cast<std::size_t>(p), 0);
  std::vector<double> x(static_cast<std::size_t>(p), ax[0]);
  const std::int64_t total = g.node_count();
  for (std::int64_t node = 0; node < total; ++node) {
    f(node, std::span<const double>(x.data(), x.size()));
    for (int a = p - 1; a >= 0; --a) {
      auto ai = static_cast<std::size_t>(a);
      if (++idx[ai] < m) {
        x[ai] = ax[static_cast<std::size_t>(idx[ai])];
        break;
      }
      idx[ai] = 0;
      x[ai] = ax[0];
    }
  }
}

} // namespace randmeans

#endif
