#include "randmeans/json_io.hpp"

#include <string>
#include <utility>

#include "randmeans/errors.hpp"
#include "json_internal.hpp"

namespace randmeans::jsonio {

namespace {

[[noreturn]] void parse_fail(const std::string& msg) {
  fail(ErrorCode::parse, msg);
}

std::string kind_of(const json& j, const char* what) {
  return require_string(j, "kind", what);
}

} // namespace

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) parse_fail("malformed JSON");
  return j;
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* what) {
  if (!j.is_object())
    parse_fail(std::string(what) + ": expected a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known)
      parse_fail(std::string(what) + ": unknown key '" + item.key() + "'");
  }
}

const json& require(const json& j, const char* key, const char* what) {
  if (!j.is_object())
    parse_fail(std::string(what) + ": expected a JSON object");
  const auto it = j.find(key);
  if (it == j.end())
    parse_fail(std::string(what) + ": missing key '" + key + "'");
  return *it;
}

std::string require_string(const json& j, const char* key, const char* what) {
  const json& v = require(j, key, what);
  if (!v.is_string())
    parse_fail(std::string(what) + ": key '" + key + "' must be a string");
  return v.get<std::string>();
}

double require_double(const json& j, const char* key, const char* what) {
  const json& v = require(j, key, what);
  if (!v.is_number())
    parse_fail(std::string(what) + ": key '" + key + "' must be a number");
  return v.get<double>();
}

double get_double(const json& j, const char* key, double fallback,
                  const char* what) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return require_double(j, key, what);
}

long long require_int(const json& j, const char* key, const char* what) {
  const json& v = require(j, key, what);
  if (!v.is_number_integer())
    parse_fail(std::string(what) + ": key '" + key + "' must be an integer");
  return v.get<long long>();
}

long long get_int(const json& j, const char* key, long long fallback,
                  const char* what) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  return require_int(j, key, what);
}

std::uint64_t get_uint64(const json& j, const char* key, std::uint64_t fallback,
                         const char* what) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!(v.is_number_integer() && (v.is_number_unsigned() || v.get<long long>() >= 0)))
    parse_fail(std::string(what) + ": key '" + key +
               "' must be a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::vector<double> double_array(const json& v, const char* what) {
  if (!v.is_array())
    parse_fail(std::string(what) + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const json& e : v) {
    if (!e.is_number())
      parse_fail(std::string(what) + ": expected an array of numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

json to(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

json to(const GridSpec& g) {
  return json{{"interval", to(g.interval)},
              {"p", g.p},
              {"points_per_axis", g.points_per_axis}};
}

Interval interval_from(const json& v, const char* what) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    parse_fail(std::string(what) + ": interval must be a [lo, hi] number pair");
  Interval iv{v[0].get<double>(), v[1].get<double>()};
  iv.validate();
  return iv;
}

GridSpec grid_from(const json& j, const GridDefaults& defaults) {
  check_keys(j, {"interval", "p", "points_per_axis"}, "grid");
  GridSpec g;
  if (j.contains("interval")) {
    g.interval = interval_from(j.at("interval"), "grid");
  } else if (defaults.interval) {
    g.interval = *defaults.interval;
  } else {
    parse_fail("grid: missing key 'interval'");
  }
  const int default_p = defaults.p.value_or(2);
  g.p = static_cast<int>(get_int(j, "p", default_p, "grid"));
  g.points_per_axis = static_cast<int>(
      get_int(j, "points_per_axis", g.p == 2 ? 101 : 31, "grid"));
  g.validate();
  return g;
}

json to(const MeanExpr& m) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ArithmeticWeighted>) {
          return json{{"kind", "arithmetic_weighted"}, {"weights", n.weights}};
        } else if constexpr (std::is_same_v<T, GeometricWeighted>) {
          return json{{"kind", "geometric_weighted"}, {"weights", n.weights}};
        } else if constexpr (std::is_same_v<T, PowerMean>) {
          return json{{"kind", "power"}, {"alpha", n.alpha}, {"lambda", n.lambda}};
        } else if constexpr (std::is_same_v<T, LogarithmicMean>) {
          return json{{"kind", "logarithmic"}};
        } else if constexpr (std::is_same_v<T, CauchyPowerMean>) {
          return json{{"kind", "cauchy_power"}, {"alpha0", n.alpha0}};
        } else if constexpr (std::is_same_v<T, TriangularDensityPowerMean>) {
          return json{{"kind", "triangular_density_power"}, {"alpha0", n.alpha0}};
        } else if constexpr (std::is_same_v<T, TriangularDensityLogMean>) {
          return json{{"kind", "triangular_density_log"}};
        } else if constexpr (std::is_same_v<T, ScaledLogMean>) {
          return json{{"kind", "scaled_log"}};
        } else if constexpr (std::is_same_v<T, SineDensityMean>) {
          return json{{"kind", "sine_density"}};
        } else if constexpr (std::is_same_v<T, Mixture>) {
          json components = json::array();
          for (const MeanExpr& c : n.components) components.push_back(to(c));
          return json{{"kind", "mixture"},
                      {"coeffs", n.coeffs},
                      {"components", std::move(components)}};
        } else {
          static_assert(std::is_same_v<T, GridMean>);
          return json{{"kind", "grid"}, {"grid", to(n.grid)}, {"values", n.values}};
        }
      },
      m.node());
}

MeanExpr mean_from(const json& j) {
  const std::string kind = kind_of(j, "mean");
  if (kind == "arithmetic_weighted") {
    check_keys(j, {"kind", "weights"}, "mean");
    return MeanExpr{ArithmeticWeighted{
        double_array(require(j, "weights", "mean"), "mean.weights")}};
  }
  if (kind == "geometric_weighted") {
    check_keys(j, {"kind", "weights"}, "mean");
    return MeanExpr{GeometricWeighted{
        double_array(require(j, "weights", "mean"), "mean.weights")}};
  }
  if (kind == "power") {
    check_keys(j, {"kind", "alpha", "lambda"}, "mean");
    return MeanExpr{PowerMean{require_double(j, "alpha", "mean"),
                              require_double(j, "lambda", "mean")}};
  }
  if (kind == "logarithmic") {
    check_keys(j, {"kind"}, "mean");
    return MeanExpr{LogarithmicMean{}};
  }
  if (kind == "cauchy_power") {
    check_keys(j, {"kind", "alpha0"}, "mean");
    return MeanExpr{CauchyPowerMean{require_double(j, "alpha0", "mean")}};
  }
  if (kind == "triangular_density_power") {
    check_keys(j, {"kind", "alpha0"}, "mean");
    return MeanExpr{TriangularDensityPowerMean{require_double(j, "alpha0", "mean")}};
  }
  if (kind == "triangular_density_log") {
    check_keys(j, {"kind"}, "mean");
    return MeanExpr{TriangularDensityLogMean{}};
  }
  if (kind == "scaled_log") {
    check_keys(j, {"kind"}, "mean");
    return MeanExpr{ScaledLogMean{}};
  }
  if (kind == "sine_density") {
    check_keys(j, {"kind"}, "mean");
    return MeanExpr{SineDensityMean{}};
  }
  if (kind == "mixture") {
    check_keys(j, {"kind", "coeffs", "components"}, "mean");
    Mixture mix;
    mix.coeffs = double_array(require(j, "coeffs", "mean"), "mean.coeffs");
    const json& comps = require(j, "components", "mean");
    if (!comps.is_array()) parse_fail("mean.components: expected an array");
    for (const json& c : comps) mix.components.push_back(mean_from(c));
    return MeanExpr{std::move(mix)};
  }
  if (kind == "grid") {
    check_keys(j, {"kind", "grid", "values"}, "mean");
    GridMean gm;
    gm.grid = grid_from(require(j, "grid", "mean"), {});
    gm.values = double_array(require(j, "values", "mean"), "mean.values");
    return MeanExpr{std::move(gm)};
  }
  parse_fail("mean: unknown kind '" + kind + "'");
}

json to(const ScalarDist& d) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Bernoulli>) {
          return json{{"kind", "bernoulli"}, {"q", n.q}};
        } else if constexpr (std::is_same_v<T, FiniteDiscrete>) {
          return json{{"kind", "finite_discrete"},
                      {"atoms", n.atoms},
                      {"probs", n.probs}};
        } else if constexpr (std::is_same_v<T, Uniform01>) {
          return json{{"kind", "uniform01"}};
        } else if constexpr (std::is_same_v<T, TriangularDensity>) {
          return json{{"kind", "triangular_density"}};
        } else if constexpr (std::is_same_v<T, TruncatedExponential>) {
          return json{{"kind", "truncated_exponential"}};
        } else if constexpr (std::is_same_v<T, SineDensity>) {
          return json{{"kind", "sine_density"}};
        } else {
          static_assert(std::is_same_v<T, Dirac>);
          return json{{"kind", "dirac"}, {"a", n.a}};
        }
      },
      d.node());
}

ScalarDist scalar_dist_from(const json& j) {
  const std::string kind = kind_of(j, "scalar distribution");
  if (kind == "bernoulli") {
    check_keys(j, {"kind", "q"}, "scalar distribution");
    return ScalarDist{Bernoulli{require_double(j, "q", "scalar distribution")}};
  }
  if (kind == "finite_discrete") {
    check_keys(j, {"kind", "atoms", "probs"}, "scalar distribution");
    return ScalarDist{FiniteDiscrete{
        double_array(require(j, "atoms", "scalar distribution"), "atoms"),
        double_array(require(j, "probs", "scalar distribution"), "probs")}};
  }
  if (kind == "uniform01") {
    check_keys(j, {"kind"}, "scalar distribution");
    return ScalarDist{Uniform01{}};
  }
  if (kind == "triangular_density") {
    check_keys(j, {"kind"}, "scalar distribution");
    return ScalarDist{TriangularDensity{}};
  }
  if (kind == "truncated_exponential") {
    check_keys(j, {"kind"}, "scalar distribution");
    return ScalarDist{TruncatedExponential{}};
  }
  if (kind == "sine_density") {
    check_keys(j, {"kind"}, "scalar distribution");
    return ScalarDist{SineDensity{}};
  }
  if (kind == "dirac") {
    check_keys(j, {"kind", "a"}, "scalar distribution");
    return ScalarDist{Dirac{require_double(j, "a", "scalar distribution")}};
  }
  parse_fail("scalar distribution: unknown kind '" + kind + "'");
}

json to(const VectorDist& d) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ProductOfScalars>) {
          json components = json::array();
          for (const ScalarDist& c : n.components) components.push_back(to(c));
          return json{{"kind", "product"}, {"components", std::move(components)}};
        } else if constexpr (std::is_same_v<T, SimplexUniform>) {
          return json{{"kind", "simplex_uniform"}, {"dim", n.dim}};
        } else {
          static_assert(std::is_same_v<T, FiniteDiscreteVector>);
          return json{{"kind", "finite_discrete_vector"},
                      {"atoms", n.atoms},
                      {"probs", n.probs}};
        }
      },
      d.node());
}

VectorDist vector_dist_from(const json& j) {
  const std::string kind = kind_of(j, "vector distribution");
  if (kind == "product") {
    check_keys(j, {"kind", "components"}, "vector distribution");
    ProductOfScalars prod;
    const json& comps = require(j, "components", "vector distribution");
    if (!comps.is_array())
      parse_fail("vector distribution.components: expected an array");
    for (const json& c : comps) prod.components.push_back(scalar_dist_from(c));
    return VectorDist{std::move(prod)};
  }
  if (kind == "simplex_uniform") {
    check_keys(j, {"kind", "dim"}, "vector distribution");
    return VectorDist{SimplexUniform{
        static_cast<int>(require_int(j, "dim", "vector distribution"))}};
  }
  if (kind == "finite_discrete_vector") {
    check_keys(j, {"kind", "atoms", "probs"}, "vector distribution");
    FiniteDiscreteVector fdv;
    const json& atoms = require(j, "atoms", "vector distribution");
    if (!atoms.is_array())
      parse_fail("vector distribution.atoms: expected an array of arrays");
    for (const json& a : atoms)
      fdv.atoms.push_back(double_array(a, "vector distribution.atoms"));
    fdv.probs = double_array(require(j, "probs", "vector distribution"),
                             "vector distribution.probs");
    return VectorDist{std::move(fdv)};
  }
  parse_fail("vector distribution: unknown kind '" + kind + "'");
}

json to(const RandomMeanSpec& s) {
  return std::visit(
      [](const auto& n) -> json {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, DiscreteMixtureSpec>) {
          json dist = std::holds_alternative<FiniteDiscrete>(n.dist)
                          ? to(ScalarDist{std::get<FiniteDiscrete>(n.dist)})
                          : to(VectorDist{std::get<FiniteDiscreteVector>(n.dist)});
          json means = json::array();
          for (const MeanExpr& m : n.means) means.push_back(to(m));
          return json{{"kind", "discrete_mixture"},
                      {"dist", std::move(dist)},
                      {"means", std::move(means)},
                      {"interval", to(n.interval)},
                      {"p", n.p}};
        } else if constexpr (std::is_same_v<T, RandomHolderSpec>) {
          return json{{"kind", "random_holder"},
                      {"alpha0", n.alpha0},
                      {"lambda_dist", to(n.lambda_dist)},
                      {"interval", to(n.interval)}};
        } else if constexpr (std::is_same_v<T, WeightedArithmeticSpec>) {
          return json{{"kind", "weighted_arithmetic"},
                      {"weight_dist", to(n.weight_dist)},
                      {"interval", to(n.interval)},
                      {"p", n.p}};
        } else {
          static_assert(std::is_same_v<T, WeightedPowerSpec>);
          return json{{"kind", "weighted_power"},
                      {"exponent_dist", to(n.exponent_dist)},
                      {"interval", to(n.interval)}};
        }
      },
      s.node());
}

RandomMeanSpec spec_from(const json& j) {
  const std::string kind = kind_of(j, "spec");
  if (kind == "discrete_mixture") {
    check_keys(j, {"kind", "dist", "means", "interval", "p"}, "spec");
    DiscreteMixtureSpec dm;
    const json& dist = require(j, "dist", "spec");
    const std::string dist_kind = kind_of(dist, "spec.dist");
    if (dist_kind == "finite_discrete") {
      dm.dist = std::get<FiniteDiscrete>(scalar_dist_from(dist).node());
    } else if (dist_kind == "finite_discrete_vector") {
      dm.dist = std::get<FiniteDiscreteVector>(vector_dist_from(dist).node());
    } else {
      parse_fail("spec.dist: a discrete mixture needs a finite_discrete or "
                 "finite_discrete_vector driving law, got '" + dist_kind + "'");
    }
    const json& means = require(j, "means", "spec");
    if (!means.is_array()) parse_fail("spec.means: expected an array");
    for (const json& m : means) dm.means.push_back(mean_from(m));
    dm.interval = interval_from(require(j, "interval", "spec"), "spec");
    dm.p = static_cast<int>(get_int(j, "p", 2, "spec"));
    return RandomMeanSpec{std::move(dm)};
  }
  if (kind == "random_holder") {
    check_keys(j, {"kind", "alpha0", "lambda_dist", "interval"}, "spec");
    return RandomMeanSpec{RandomHolderSpec{
        require_double(j, "alpha0", "spec"),
        scalar_dist_from(require(j, "lambda_dist", "spec")),
        interval_from(require(j, "interval", "spec"), "spec")}};
  }
  if (kind == "weighted_arithmetic") {
    check_keys(j, {"kind", "weight_dist", "interval", "p"}, "spec");
    VectorDist dist = vector_dist_from(require(j, "weight_dist", "spec"));
    const int default_p = dist.dim() + 1;
    WeightedArithmeticSpec wa{std::move(dist),
                              interval_from(require(j, "interval", "spec"), "spec"),
                              static_cast<int>(get_int(j, "p", default_p, "spec"))};
    return RandomMeanSpec{std::move(wa)};
  }
  if (kind == "weighted_power") {
    check_keys(j, {"kind", "exponent_dist", "interval"}, "spec");
    return RandomMeanSpec{WeightedPowerSpec{
        scalar_dist_from(require(j, "exponent_dist", "spec")),
        interval_from(require(j, "interval", "spec"), "spec")}};
  }
  parse_fail("spec: unknown kind '" + kind + "'");
}

} // namespace randmeans::jsonio

namespace randmeans {

namespace {

std::string dump(const jsonio::json& j, int indent) {
  std::string out = j.dump(indent);
  out.push_back('\n');
  return out;
}

} // namespace

MeanExpr mean_from_json(const std::string& text) {
  return jsonio::mean_from(jsonio::parse_text(text));
}

std::string mean_to_json(const MeanExpr& m, int indent) {
  return dump(jsonio::to(m), indent);
}

ScalarDist scalar_dist_from_json(const std::string& text) {
  return jsonio::scalar_dist_from(jsonio::parse_text(text));
}

std::string scalar_dist_to_json(const ScalarDist& d, int indent) {
  return dump(jsonio::to(d), indent);
}

VectorDist vector_dist_from_json(const std::string& text) {
  return jsonio::vector_dist_from(jsonio::parse_text(text));
}

std::string vector_dist_to_json(const VectorDist& d, int indent) {
  return dump(jsonio::to(d), indent);
}

RandomMeanSpec spec_from_json(const std::string& text) {
  return jsonio::spec_from(jsonio::parse_text(text));
}

std::string spec_to_json(const RandomMeanSpec& s, int indent) {
  return dump(jsonio::to(s), indent);
}

GridSpec grid_from_json(const std::string& text) {
  return jsonio::grid_from(jsonio::parse_text(text), {});
}

std::string grid_to_json(const GridSpec& g, int indent) {
  return dump(jsonio::to(g), indent);
}

} // namespace randmeans
