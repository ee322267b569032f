#ifndef RANDMEANS_JSON_INTERNAL_HPP
#define RANDMEANS_JSON_INTERNAL_HPP

// Object-level JSON conversions shared by the text-level public API and
// the experiment driver.  Not installed; vendor/json.hpp stays out of the
// public headers.

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>

#include "json.hpp"
#include "randmeans/grid.hpp"
#include "randmeans/interval.hpp"
#include "randmeans/mean.hpp"
#include "randmeans/random_mean.hpp"

namespace randmeans::jsonio {

using nlohmann::json;

// json::parse with exceptions mapped to ErrorCode::parse.
json parse_text(const std::string& text);

// Rejects keys outside `allowed` (typo safety for configs).
void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* what);

const json& require(const json& j, const char* key, const char* what);
std::string require_string(const json& j, const char* key, const char* what);
double require_double(const json& j, const char* key, const char* what);
double get_double(const json& j, const char* key, double fallback,
                  const char* what);
long long require_int(const json& j, const char* key, const char* what);
long long get_int(const json& j, const char* key, long long fallback,
                  const char* what);
std::uint64_t get_uint64(const json& j, const char* key, std::uint64_t fallback,
                         const char* what);
std::vector<double> double_array(const json& v, const char* what);

json to(const Interval& iv);
json to(const GridSpec& g);
json to(const MeanExpr& m);
json to(const ScalarDist& d);
json to(const VectorDist& d);
json to(const RandomMeanSpec& s);

Interval interval_from(const json& v, const char* what);

// Grid fields absent from the object fall back to `defaults`; a missing
// interval with no default is a parse error.  points_per_axis defaults to
// 101 for p == 2 and 31 for higher arities.
struct GridDefaults {
  std::optional<Interval> interval;
  std::optional<int> p;
};
GridSpec grid_from(const json& j, const GridDefaults& defaults);

MeanExpr mean_from(const json& j);
ScalarDist scalar_dist_from(const json& j);
VectorDist vector_dist_from(const json& j);
RandomMeanSpec spec_from(const json& j);

} // namespace randmeans::jsonio

#endif
