#include "randmeans/mean.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace randmeans {

namespace {

constexpr double kPowerZeroBranch = 1e-8;  // |alpha| below this: geometric branch
constexpr double kSingularRel = 1e-9;      // relative width of exceptional-set branch
constexpr double kEulerE = 2.71828182845904523536;

bool all_equal(std::span<const double> x) {
  for (std::size_t i = 1; i < x.size(); ++i)
    if (x[i] != x[0]) return false;
  return true;
}

void require_nonneg(std::span<const double> x) {
  for (double v : x)
    if (!(v >= 0.0))
      fail(ErrorCode::domain, "mean requires nonnegative coordinates");
}

// ln(a/b) for a > 0, b > 0, computed through log1p so that nearby a, b do
// not lose the leading digits of the difference.
double log_ratio(double a, double b) { return std::log1p((a - b) / b); }

bool near(double a, double b) {
  return std::abs(a - b) <=
         kSingularRel * std::max({1.0, std::abs(a), std::abs(b)});
}

// --- variant evaluators ----------------------------------------------------

// Every evaluator short-circuits once its domain checks pass and all
// coordinates coincide: means agree with the common coordinate on the
// diagonal, and returning it directly keeps internality exact at diagonal
// grid nodes (a weighted recombination of equal values can round upward).

double eval_arithmetic(const ArithmeticWeighted& m, std::span<const double> x) {
  if (all_equal(x)) return x[0];
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += m.weights[i] * x[i];
  return s;
}

double eval_geometric(const GeometricWeighted& m, std::span<const double> x) {
  require_nonneg(x);
  if (all_equal(x)) return x[0];
  // A unit weight makes the mean a coordinate projection; bypass the log
  // domain so exp(log x) rounding cannot perturb the exact value.
  for (std::size_t i = 0; i < x.size(); ++i)
    if (m.weights[i] == 1.0) return x[i];
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (m.weights[i] == 0.0) continue;
    if (x[i] == 0.0) return 0.0;
    s += m.weights[i] * std::log(x[i]);
  }
  return std::exp(s);
}

double eval_power(const PowerMean& m, std::span<const double> x) {
  const double x1 = x[0], x2 = x[1];
  if (std::abs(m.alpha) <= kPowerZeroBranch) {
    require_nonneg(x);
    if (x1 == x2) return x1;
    if (x1 == 0.0 || x2 == 0.0) return 0.0;
    return std::exp(m.lambda * std::log(x1) + (1.0 - m.lambda) * std::log(x2));
  }
  if (m.alpha > 0.0) {
    require_nonneg(x);
  } else if (!(x1 > 0.0) || !(x2 > 0.0)) {
    fail(ErrorCode::domain, "negative-exponent power mean requires positive coordinates");
  }
  if (x1 == x2) return x1;
  // Factor out the dominant coordinate so that alpha * log stays <= 0 and
  // the sum can be fed through expm1/log1p without overflow:
  //   m = ref * (lambda r1^alpha + (1-lambda) r2^alpha)^{1/alpha},  r_i <= 1.
  const double ref = m.alpha > 0.0 ? std::max(x1, x2) : std::min(x1, x2);
  auto term = [&](double xi) {
    if (xi == ref) return 0.0;
    if (xi == 0.0) return -1.0; // xi^alpha == 0 for alpha > 0
    return std::expm1(m.alpha * log_ratio(xi, ref));
  };
  const double s = m.lambda * term(x1) + (1.0 - m.lambda) * term(x2);
  if (s <= -1.0) return 0.0; // both coordinates vanish
  return ref * std::exp(std::log1p(s) / m.alpha);
}

double eval_logarithmic(std::span<const double> x) {
  const double x1 = x[0], x2 = x[1];
  require_nonneg(x);
  if (x1 == 0.0 || x2 == 0.0) return 0.0;
  if (near(x1, x2)) return 0.5 * (x1 + x2);
  const double t = log_ratio(x1, x2);
  return std::abs(t) <= 1.0 ? x2 * std::expm1(t) / t : (x1 - x2) / t;
}

double eval_cauchy_power(const CauchyPowerMean& m, std::span<const double> x) {
  const double x1 = x[0], x2 = x[1];
  require_nonneg(x);
  const double A = 1.0 / m.alpha0 + 1.0;
  if (x1 == 0.0 || x2 == 0.0) return std::max(x1, x2) / A;
  if (near(x1, x2)) return 0.5 * (x1 + x2);
  const double lr = -std::abs(log_ratio(x1, x2)); // ln(min/max) <= 0
  return std::max(x1, x2) * std::expm1((m.alpha0 + 1.0) * lr) /
         (A * std::expm1(m.alpha0 * lr));
}

// Power series of N(t) = A e^{at} - B e^{bt} + 1 with A = 1/a0 + 1,
// B = A + 1, a = 2 a0 + 1, b = a0 + 1.  N(0) = N'(0) = 0, so the series
// starts at t^2; it is the numerator of the triangular-density power mean
// after substituting x1 = x2 e^t, and summing it directly avoids the
// double cancellation near the diagonal.
double tri_pow_numerator_series(double A, double B, double a, double b,
                                double t) {
  double sum = 0.0;
  double pa = a * t * a * t / 2.0; // (a t)^j / j! starting at j = 2
  double pb = b * t * b * t / 2.0;
  for (int j = 2; j <= 32; ++j) {
    const double term = A * pa - B * pb;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    pa *= a * t / (j + 1);
    pb *= b * t / (j + 1);
  }
  return sum;
}

double eval_tri_power(const TriangularDensityPowerMean& m,
                      std::span<const double> x) {
  const double x1 = x[0], x2 = x[1];
  require_nonneg(x);
  const double a0 = m.alpha0;
  const double A = 1.0 / a0 + 1.0;
  const double B = 1.0 / a0 + 2.0;
  const double C = 2.0 / (A * B);
  if (x1 == 0.0 && x2 == 0.0) return 0.0;
  if (x1 == 0.0) return C * x2;
  if (x2 == 0.0) return 2.0 * x1 / B;
  if (near(x1, x2)) return 0.5 * (x1 + x2);
  const double t = log_ratio(x1, x2);
  const double a = 2.0 * a0 + 1.0;
  const double b = a0 + 1.0;
  const double den = std::expm1(a0 * t);
  if (std::abs(a * t) <= 0.5)
    return x2 * C * tri_pow_numerator_series(A, B, a, b, t) / (den * den);
  if (t > 0.0) {
    // Rescale by e^{at} so every exponential argument is negative.
    const double em = -std::expm1(-a0 * t);
    const double ema = -std::expm1(-a * t);
    return x1 * C * (B * em - ema) / (em * em);
  }
  const double num = std::exp(b * t) * (A * std::expm1(a0 * t) - 1.0) + 1.0;
  return x2 * C * num / (den * den);
}

double eval_tri_log(std::span<const double> x) {
  const double x1 = x[0], x2 = x[1];
  require_nonneg(x);
  if (x1 == 0.0 || x2 == 0.0) return 0.0;
  if (near(x1, x2)) return 0.5 * (x1 + x2);
  const double t = log_ratio(x1, x2);
  if (std::abs(t) <= 0.5) {
    // 2 (t e^t - e^t + 1) / t^2 = 2 sum_{j>=2} (j-1) t^{j-2} / j!
    double sum = 0.0, tp = 1.0, fact = 2.0;
    for (int j = 2; j <= 32; ++j) {
      const double term = (j - 1) * tp / fact;
      sum += term;
      if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
      tp *= t;
      fact *= j + 1;
    }
    return 2.0 * x2 * sum;
  }
  return 2.0 * (x1 * t - (x1 - x2)) / (t * t);
}

double eval_scaled_log(std::span<const double> x) {
  const double x1 = x[0], x2 = x[1];
  require_nonneg(x);
  if (x1 == x2) return x1;
  if (x1 == 0.0 || x2 == 0.0) return 0.0;
  const double ex2 = kEulerE * x2;
  if (near(x1, ex2)) return 0.5 * (x1 + ex2) / (kEulerE - 1.0);
  const double s = log_ratio(x1, ex2);
  return std::abs(s) <= 1.0 ? ex2 * std::expm1(s) / ((kEulerE - 1.0) * s)
                            : (x1 - ex2) / ((kEulerE - 1.0) * s);
}

double eval_sine(std::span<const double> x) {
  const double x1 = x[0], x2 = x[1];
  require_nonneg(x);
  if (x1 == 0.0 || x2 == 0.0) return 0.0;
  if (near(x1, x2)) return 0.5 * (x1 + x2);
  const double t = log_ratio(x1, x2);
  const double c1 = std::cos(1.0), s1 = std::sin(1.0);
  return (x2 - c1 * x1 + s1 * x1 * t) / ((1.0 - c1) * (1.0 + t * t));
}

double eval_grid(const GridMean& m, std::span<const double> x) {
  const GridSpec& g = m.grid;
  const int p = g.p;
  const int n = g.points_per_axis;
  const double h = (g.interval.hi - g.interval.lo) / (n - 1);
  std::vector<int> cell(static_cast<std::size_t>(p));
  std::vector<double> frac(static_cast<std::size_t>(p));
  for (int a = 0; a < p; ++a) {
    const double xa = x[static_cast<std::size_t>(a)];
    if (xa < g.interval.lo - 1e-12 * std::max(1.0, std::abs(g.interval.lo)) ||
        xa > g.interval.hi + 1e-12 * std::max(1.0, std::abs(g.interval.hi)))
      fail(ErrorCode::domain, "grid mean evaluated outside its interval");
    double u = (xa - g.interval.lo) / h;
    u = std::clamp(u, 0.0, static_cast<double>(n - 1));
    int i = std::min(static_cast<int>(u), n - 2);
    double f = u - i;
    // Snap to lattice points so node evaluations reproduce table entries.
    if (f < 1e-12) f = 0.0;
    if (f > 1.0 - 1e-12) f = 1.0;
    cell[static_cast<std::size_t>(a)] = i;
    frac[static_cast<std::size_t>(a)] = f;
  }
  // Multilinear blend over the 2^p cell corners.
  double out = 0.0;
  for (int corner = 0; corner < (1 << p); ++corner) {
    double w = 1.0;
    std::int64_t node = 0;
    for (int a = 0; a < p; ++a) {
      const int bit = (corner >> (p - 1 - a)) & 1;
      const auto ai = static_cast<std::size_t>(a);
      w *= bit ? frac[ai] : 1.0 - frac[ai];
      node = node * n + (cell[ai] + bit);
    }
    if (w != 0.0) out += w * m.values[static_cast<std::size_t>(node)];
  }
  return out;
}

void validate_simplex(const std::vector<double>& w, const char* what) {
  if (w.empty()) fail(ErrorCode::invalid, std::string(what) + ": empty weight vector");
  double sum = 0.0;
  for (double v : w) {
    if (!std::isfinite(v) || v < 0.0)
      fail(ErrorCode::invalid, std::string(what) + ": weights must be nonnegative");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12)
    fail(ErrorCode::invalid, std::string(what) + ": weights must sum to 1");
}

} // namespace

MeanExpr::MeanExpr(Node node) : node_(std::move(node)) {
  std::visit(
      [this](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ArithmeticWeighted>) {
          validate_simplex(m.weights, "arithmetic mean");
        } else if constexpr (std::is_same_v<T, GeometricWeighted>) {
          validate_simplex(m.weights, "geometric mean");
        } else if constexpr (std::is_same_v<T, PowerMean>) {
          if (!std::isfinite(m.alpha))
            fail(ErrorCode::invalid, "power mean: alpha must be finite");
          if (!(m.lambda > 0.0 && m.lambda < 1.0))
            fail(ErrorCode::invalid, "power mean: lambda must lie in (0, 1)");
        } else if constexpr (std::is_same_v<T, CauchyPowerMean> ||
                             std::is_same_v<T, TriangularDensityPowerMean>) {
          if (!(m.alpha0 > 0.0) || !std::isfinite(m.alpha0))
            fail(ErrorCode::invalid, "power-family expectation mean: alpha0 must be > 0");
        } else if constexpr (std::is_same_v<T, Mixture>) {
          if (m.components.empty())
            fail(ErrorCode::invalid, "mixture: no components");
          if (m.components.size() != m.coeffs.size())
            fail(ErrorCode::invalid, "mixture: coefficient/component count mismatch");
          validate_simplex(m.coeffs, "mixture");
          const int p = m.components.front().arity();
          for (const MeanExpr& c : m.components)
            if (c.arity() != p)
              fail(ErrorCode::invalid, "mixture: components disagree on arity");
        } else if constexpr (std::is_same_v<T, GridMean>) {
          m.grid.validate();
          if (static_cast<std::int64_t>(m.values.size()) != m.grid.node_count())
            fail(ErrorCode::invalid, "grid mean: value table size mismatch");
          for (double v : m.values)
            if (!std::isfinite(v))
              fail(ErrorCode::invalid, "grid mean: values must be finite");
        }
      },
      node_);
}

int MeanExpr::arity() const {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ArithmeticWeighted> ||
                      std::is_same_v<T, GeometricWeighted>)
          return static_cast<int>(m.weights.size());
        else if constexpr (std::is_same_v<T, Mixture>)
          return m.components.front().arity();
        else if constexpr (std::is_same_v<T, GridMean>)
          return m.grid.p;
        else
          return 2;
      },
      node_);
}

void MeanExpr::validate_on(const Interval& interval) const {
  interval.validate();
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, PowerMean>) {
          if (m.alpha < -kPowerZeroBranch) {
            if (!interval.positive())
              fail(ErrorCode::invalid,
                   "negative-exponent power mean needs a positive interval");
          } else if (!interval.nonneg()) {
            fail(ErrorCode::invalid, "power mean needs a nonnegative interval");
          }
        } else if constexpr (std::is_same_v<T, GeometricWeighted> ||
                             std::is_same_v<T, LogarithmicMean> ||
                             std::is_same_v<T, CauchyPowerMean> ||
                             std::is_same_v<T, TriangularDensityPowerMean> ||
                             std::is_same_v<T, TriangularDensityLogMean> ||
                             std::is_same_v<T, ScaledLogMean> ||
                             std::is_same_v<T, SineDensityMean>) {
          if (!interval.nonneg())
            fail(ErrorCode::invalid,
                 "log/power-family mean needs a nonnegative interval");
        } else if constexpr (std::is_same_v<T, Mixture>) {
          for (const MeanExpr& c : m.components) c.validate_on(interval);
        } else if constexpr (std::is_same_v<T, GridMean>) {
          if (interval.lo < m.grid.interval.lo || interval.hi > m.grid.interval.hi)
            fail(ErrorCode::invalid,
                 "grid mean tabulated on a smaller interval than requested");
        }
      },
      node_);
}

bool MeanExpr::operator==(const MeanExpr& other) const {
  if (node_.index() != other.node_.index()) return false;
  return std::visit(
      [&](const auto& a) -> bool {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(other.node_);
        if constexpr (std::is_same_v<T, ArithmeticWeighted> ||
                      std::is_same_v<T, GeometricWeighted>)
          return a.weights == b.weights;
        else if constexpr (std::is_same_v<T, PowerMean>)
          return a.alpha == b.alpha && a.lambda == b.lambda;
        else if constexpr (std::is_same_v<T, CauchyPowerMean> ||
                           std::is_same_v<T, TriangularDensityPowerMean>)
          return a.alpha0 == b.alpha0;
        else if constexpr (std::is_same_v<T, Mixture>)
          return a.coeffs == b.coeffs && a.components == b.components;
        else if constexpr (std::is_same_v<T, GridMean>)
          return a.grid == b.grid && a.values == b.values;
        else
          return true;
      },
      node_);
}

double eval(const MeanExpr& m, std::span<const double> x) {
  if (static_cast<int>(x.size()) != m.arity())
    fail(ErrorCode::domain, "mean evaluated with wrong number of coordinates");
  for (double v : x)
    if (!std::isfinite(v)) fail(ErrorCode::domain, "mean evaluated at non-finite point");
  return std::visit(
      [&](const auto& node) -> double {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, ArithmeticWeighted>)
          return eval_arithmetic(node, x);
        else if constexpr (std::is_same_v<T, GeometricWeighted>)
          return eval_geometric(node, x);
        else if constexpr (std::is_same_v<T, PowerMean>)
          return eval_power(node, x);
        else if constexpr (std::is_same_v<T, LogarithmicMean>)
          return eval_logarithmic(x);
        else if constexpr (std::is_same_v<T, CauchyPowerMean>)
          return eval_cauchy_power(node, x);
        else if constexpr (std::is_same_v<T, TriangularDensityPowerMean>)
          return eval_tri_power(node, x);
        else if constexpr (std::is_same_v<T, TriangularDensityLogMean>)
          return eval_tri_log(x);
        else if constexpr (std::is_same_v<T, ScaledLogMean>)
          return eval_scaled_log(x);
        else if constexpr (std::is_same_v<T, SineDensityMean>)
          return eval_sine(x);
        else if constexpr (std::is_same_v<T, Mixture>) {
          if (all_equal(x)) return eval(node.components.front(), x);
          double s = 0.0;
          for (std::size_t i = 0; i < node.components.size(); ++i)
            s += node.coeffs[i] * eval(node.components[i], x);
          return s;
        } else {
          return eval_grid(node, x);
        }
      },
      m.node());
}

std::vector<double> tabulate(const MeanExpr& m, const GridSpec& g) {
  g.validate();
  if (g.p != m.arity())
    fail(ErrorCode::domain, "tabulation grid dimension does not match mean arity");
  std::vector<double> values(static_cast<std::size_t>(g.node_count()));
  for_each_node(g, [&](std::int64_t node, std::span<const double> x) {
    values[static_cast<std::size_t>(node)] = eval(m, x);
  });
  return values;
}

} // namespace randmeans
