#ifndef RANDMEANS_METRIC_HPP
#define RANDMEANS_METRIC_HPP

#include <span>
#include <vector>

#include "randmeans/grid.hpp"
#include "randmeans/mean.hpp"

namespace randmeans {

// Sup-norm distance sup_x |m1(x) - m2(x)| estimated by exhaustive
// maximization over the grid nodes.  Both endpoints of every axis are in
// the grid, so corner-attained suprema are computed exactly.
double rho(const MeanExpr& m1, const MeanExpr& m2, const GridSpec& g);

// Largest amount by which m leaves [min(x), max(x)] over the grid nodes:
//   max_x max(min(x) - m(x), m(x) - max(x), 0).
// Zero iff m passes the internality check on every node.
double internality_violation(const MeanExpr& m, const GridSpec& g);

// sup_x | sum_i z_i m_i(x) | over the grid nodes.  This is the form taken
// by the distributional limits of normalized sup-distances, with z a
// (Gaussian) coefficient vector and m_i the component means.
double sup_abs_inner(std::span<const double> z,
                     std::span<const MeanExpr> means, const GridSpec& g);

// Grid-sup estimates of rho over a strictly increasing sequence of
// points-per-axis levels.  Each entry is the maximum over all nodes seen
// up to that level, so the sequence is nondecreasing and converges to the
// true sup as the levels refine.
std::vector<double> refine_sup(const MeanExpr& m1, const MeanExpr& m2,
                               const Interval& interval, int p,
                               std::span<const int> levels);

} // namespace randmeans

#endif
