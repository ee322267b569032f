#include "randmeans.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <utility>

#include "randmeans/errors.hpp"
#include "randmeans/experiment.hpp"
#include "randmeans/json_io.hpp"
#include "randmeans/mean.hpp"
#include "randmeans/metric.hpp"
#include "randmeans/random_mean.hpp"
#include "randmeans/rng.hpp"

struct rmn_mean {
  randmeans::MeanExpr value;
};

struct rmn_spec {
  randmeans::RandomMeanSpec value;
};

namespace {

thread_local std::string t_last_error;

rmn_status status_of(randmeans::ErrorCode code) {
  switch (code) {
    case randmeans::ErrorCode::stat: return RMN_ERROR_STATISTICAL;
    case randmeans::ErrorCode::io: return RMN_ERROR_IO;
    default: return RMN_ERROR_VALIDATION;
  }
}

template <class F>
rmn_status guarded(F&& body) noexcept {
  try {
    rmn_status s = body();
    if (s == RMN_OK) t_last_error.clear();
    return s;
  } catch (const randmeans::Error& e) {
    t_last_error = e.what();
    return status_of(e.code());
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return RMN_ERROR_INTERNAL;
  } catch (...) {
    t_last_error = "unknown error";
    return RMN_ERROR_INTERNAL;
  }
}

rmn_status require_arg(bool ok, const char* msg) {
  if (!ok) randmeans::fail(randmeans::ErrorCode::invalid, msg);
  return RMN_OK;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

randmeans::RunOverrides overrides_from(const rmn_run_options* opts) {
  randmeans::RunOverrides ov;
  if (!opts) return ov;
  if (opts->has_seed) ov.seed = opts->seed;
  if (opts->has_grid_points) ov.grid_points = opts->grid_points;
  if (opts->has_n) ov.n = opts->n;
  if (opts->has_replicates) ov.replicates = opts->replicates;
  if (opts->output_dir) ov.output_dir = opts->output_dir;
  return ov;
}

rmn_status run_status(int exit_code) {
  if (exit_code == 0) return RMN_OK;
  t_last_error = "a statistical check failed; see summary.json in the output "
                 "directory";
  return RMN_ERROR_STATISTICAL;
}

} // namespace

extern "C" {

const char* rmn_last_error(void) { return t_last_error.c_str(); }

const char* rmn_version(void) { return "1.0.0"; }

void rmn_string_free(char* s) { std::free(s); }

rmn_status rmn_mean_parse(const char* json_text, rmn_mean** out) {
  return guarded([&] {
    require_arg(json_text && out, "rmn_mean_parse: null argument");
    *out = new rmn_mean{randmeans::mean_from_json(json_text)};
    return RMN_OK;
  });
}

void rmn_mean_free(rmn_mean* m) { delete m; }

rmn_status rmn_mean_to_json(const rmn_mean* m, char** out) {
  return guarded([&] {
    require_arg(m && out, "rmn_mean_to_json: null argument");
    *out = copy_string(randmeans::mean_to_json(m->value));
    return RMN_OK;
  });
}

rmn_status rmn_mean_arity(const rmn_mean* m, int* out) {
  return guarded([&] {
    require_arg(m && out, "rmn_mean_arity: null argument");
    *out = m->value.arity();
    return RMN_OK;
  });
}

rmn_status rmn_mean_eval(const rmn_mean* m, const double* x, size_t len,
                         double* out) {
  return guarded([&] {
    require_arg(m && x && out, "rmn_mean_eval: null argument");
    *out = randmeans::eval(m->value, std::span<const double>(x, len));
    return RMN_OK;
  });
}

rmn_status rmn_rho(const rmn_mean* a, const rmn_mean* b, double lo, double hi,
                   int points_per_axis, double* out) {
  return guarded([&] {
    require_arg(a && b && out, "rmn_rho: null argument");
    randmeans::GridSpec g{randmeans::Interval{lo, hi}, a->value.arity(),
                          points_per_axis};
    g.validate();
    *out = randmeans::rho(a->value, b->value, g);
    return RMN_OK;
  });
}

rmn_status rmn_internality_violation(const rmn_mean* m, double lo, double hi,
                                     int points_per_axis, double* out) {
  return guarded([&] {
    require_arg(m && out, "rmn_internality_violation: null argument");
    randmeans::GridSpec g{randmeans::Interval{lo, hi}, m->value.arity(),
                          points_per_axis};
    g.validate();
    *out = randmeans::internality_violation(m->value, g);
    return RMN_OK;
  });
}

rmn_status rmn_spec_parse(const char* json_text, rmn_spec** out) {
  return guarded([&] {
    require_arg(json_text && out, "rmn_spec_parse: null argument");
    *out = new rmn_spec{randmeans::spec_from_json(json_text)};
    return RMN_OK;
  });
}

void rmn_spec_free(rmn_spec* s) { delete s; }

rmn_status rmn_spec_to_json(const rmn_spec* s, char** out) {
  return guarded([&] {
    require_arg(s && out, "rmn_spec_to_json: null argument");
    *out = copy_string(randmeans::spec_to_json(s->value));
    return RMN_OK;
  });
}

rmn_status rmn_spec_arity(const rmn_spec* s, int* out) {
  return guarded([&] {
    require_arg(s && out, "rmn_spec_arity: null argument");
    *out = s->value.arity();
    return RMN_OK;
  });
}

rmn_status rmn_spec_expectation(const rmn_spec* s, rmn_mean** out) {
  return guarded([&] {
    require_arg(s && out, "rmn_spec_expectation: null argument");
    auto closed = randmeans::closed_form_expectation(s->value);
    if (!closed)
      randmeans::fail(randmeans::ErrorCode::unsupported,
                      "no closed-form expectation is known for this spec");
    *out = new rmn_mean{std::move(closed->mean)};
    return RMN_OK;
  });
}

rmn_status rmn_spec_draw(const rmn_spec* s, uint64_t seed, uint64_t stream_id,
                         rmn_mean** out) {
  return guarded([&] {
    require_arg(s && out, "rmn_spec_draw: null argument");
    randmeans::RngStream rng(seed, stream_id);
    *out = new rmn_mean{randmeans::draw(s->value, rng)};
    return RMN_OK;
  });
}

rmn_status rmn_run_experiment_file(const char* config_path,
                                   const rmn_run_options* opts) {
  return guarded([&] {
    require_arg(config_path != nullptr, "rmn_run_experiment_file: null path");
    return run_status(
        randmeans::run_experiment_file(config_path, overrides_from(opts)));
  });
}

rmn_status rmn_run_experiment_json(const char* config_text,
                                   const rmn_run_options* opts) {
  return guarded([&] {
    require_arg(config_text != nullptr, "rmn_run_experiment_json: null config");
    return run_status(
        randmeans::run_experiment_json(config_text, overrides_from(opts)));
  });
}

} // extern "C"
