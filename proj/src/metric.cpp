#include "randmeans/metric.hpp"

#include <algorithm>
#include <cmath>

namespace randmeans {

namespace {

void check_pair(const MeanExpr& m1, const MeanExpr& m2, const GridSpec& g) {
  g.validate();
  if (m1.arity() != g.p || m2.arity() != g.p)
    fail(ErrorCode::domain, "mean arity does not match grid dimension");
  m1.validate_on(g.interval);
  m2.validate_on(g.interval);
}

} // namespace

double rho(const MeanExpr& m1, const MeanExpr& m2, const GridSpec& g) {
  check_pair(m1, m2, g);
  double sup = 0.0;
  for_each_node(g, [&](std::int64_t, std::span<const double> x) {
    sup = std::max(sup, std::abs(eval(m1, x) - eval(m2, x)));
  });
  return sup;
}

double internality_violation(const MeanExpr& m, const GridSpec& g) {
  g.validate();
  if (m.arity() != g.p)
    fail(ErrorCode::domain, "mean arity does not match grid dimension");
  m.validate_on(g.interval);
  double worst = 0.0;
  for_each_node(g, [&](std::int64_t, std::span<const double> x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double v = eval(m, x);
    worst = std::max({worst, *lo - v, v - *hi});
  });
  return worst;
}

double sup_abs_inner(std::span<const double> z,
                     std::span<const MeanExpr> means, const GridSpec& g) {
  g.validate();
  if (z.size() != means.size())
    fail(ErrorCode::domain, "coefficient/mean count mismatch");
  if (means.empty()) fail(ErrorCode::domain, "no component means");
  for (const MeanExpr& m : means) {
    if (m.arity() != g.p)
      fail(ErrorCode::domain, "mean arity does not match grid dimension");
    m.validate_on(g.interval);
  }
  double sup = 0.0;
  for_each_node(g, [&](std::int64_t, std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < means.size(); ++i) s += z[i] * eval(means[i], x);
    sup = std::max(sup, std::abs(s));
  });
  return sup;
}

std::vector<double> refine_sup(const MeanExpr& m1, const MeanExpr& m2,
                               const Interval& interval, int p,
                               std::span<const int> levels) {
  if (levels.empty()) fail(ErrorCode::invalid, "refine_sup: no levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 2) fail(ErrorCode::invalid, "refine_sup: level < 2");
    if (i > 0 && levels[i] <= levels[i - 1])
      fail(ErrorCode::invalid, "refine_sup: levels must be strictly increasing");
  }
  std::vector<double> out;
  out.reserve(levels.size());
  double best = 0.0;
  for (int level : levels) {
    const GridSpec g{interval, p, level};
    best = std::max(best, rho(m1, m2, g));
    out.push_back(best);
  }
  return out;
}

} // namespace randmeans
