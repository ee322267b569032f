#ifndef RANDMEANS_JSON_IO_HPP
#define RANDMEANS_JSON_IO_HPP

#include <string>

#include "randmeans/grid.hpp"
#include "randmeans/mean.hpp"
#include "randmeans/random_mean.hpp"

namespace randmeans {

// JSON text round-trips for the core objects.  Every object carries a
// snake_case "kind" discriminator; parsing rejects unknown kinds and
// unknown keys with ErrorCode::parse, while value-level admissibility is
// enforced by the validating constructors (ErrorCode::invalid).
// Serialization is deterministic: keys are emitted sorted and numbers in
// shortest round-trip form.

MeanExpr mean_from_json(const std::string& text);
std::string mean_to_json(const MeanExpr& m, int indent = -1);

ScalarDist scalar_dist_from_json(const std::string& text);
std::string scalar_dist_to_json(const ScalarDist& d, int indent = -1);

VectorDist vector_dist_from_json(const std::string& text);
std::string vector_dist_to_json(const VectorDist& d, int indent = -1);

RandomMeanSpec spec_from_json(const std::string& text);
std::string spec_to_json(const RandomMeanSpec& s, int indent = -1);

GridSpec grid_from_json(const std::string& text);
std::string grid_to_json(const GridSpec& g, int indent = -1);

} // namespace randmeans

#endif
