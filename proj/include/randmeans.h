/* C API for the random-means library.
 *
 * All functions are thread-compatible: distinct handles may be used from
 * distinct threads concurrently; a single handle must not be shared
 * without external synchronization.  Every fallible function returns an
 * rmn_status; on failure the thread-local message from rmn_last_error()
 * explains what went wrong and all output parameters are left untouched.
 */
#ifndef RANDMEANS_H
#define RANDMEANS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rmn_status {
  RMN_OK = 0,
  RMN_ERROR_VALIDATION = 2, /* parse errors, invalid parameters, bad domains */
  RMN_ERROR_STATISTICAL = 3, /* experiment ran; a statistical check failed */
  RMN_ERROR_IO = 4,          /* filesystem problems */
  RMN_ERROR_INTERNAL = 5     /* unexpected failure (should not happen) */
} rmn_status;

/* A p-variable continuous mean (weighted arithmetic/geometric, Holder,
 * the closed-form expectation means, mixtures, grid tabulations). */
typedef struct rmn_mean rmn_mean;

/* A random-mean specification: a family plus its driving distribution. */
typedef struct rmn_spec rmn_spec;

/* Message for the most recent failure on the calling thread ("" after a
 * success).  The pointer stays valid until the next library call on the
 * same thread. */
const char* rmn_last_error(void);

/* Library version, e.g. "1.0.0". */
const char* rmn_version(void);

/* Frees strings returned through char** out parameters. */
void rmn_string_free(char* s);

/* ---------------- means ---------------- */

/* Parses a mean from its JSON form, e.g.
 * {"kind":"arithmetic_weighted","weights":[0.5,0.5]}. */
rmn_status rmn_mean_parse(const char* json_text, rmn_mean** out);
void rmn_mean_free(rmn_mean* m);
rmn_status rmn_mean_to_json(const rmn_mean* m, char** out);
rmn_status rmn_mean_arity(const rmn_mean* m, int* out);

/* Evaluates m at the point x of length len (len must equal the arity). */
rmn_status rmn_mean_eval(const rmn_mean* m, const double* x, size_t len,
                         double* out);

/* Supremum-metric distance between two means of equal arity, computed on
 * the regular grid over [lo, hi] with points_per_axis nodes per axis. */
rmn_status rmn_rho(const rmn_mean* a, const rmn_mean* b, double lo, double hi,
                   int points_per_axis, double* out);

/* Largest internality violation max(0, lo - value, value - hi) of m over
 * the same grid; 0 certifies the mean property on the grid. */
rmn_status rmn_internality_violation(const rmn_mean* m, double lo, double hi,
                                     int points_per_axis, double* out);

/* ---------------- random-mean specifications ---------------- */

/* Parses a spec from its JSON form, e.g.
 * {"kind":"weighted_power","exponent_dist":{"kind":"bernoulli","q":0.5},
 *  "interval":[1,2]}. */
rmn_status rmn_spec_parse(const char* json_text, rmn_spec** out);
void rmn_spec_free(rmn_spec* s);
rmn_status rmn_spec_to_json(const rmn_spec* s, char** out);
rmn_status rmn_spec_arity(const rmn_spec* s, int* out);

/* Closed-form expectation mean of the spec; RMN_ERROR_VALIDATION when no
 * closed form is known for the family/distribution combination. */
rmn_status rmn_spec_expectation(const rmn_spec* s, rmn_mean** out);

/* Draws one realization of the random mean using the reproducible stream
 * (seed, stream_id). */
rmn_status rmn_spec_draw(const rmn_spec* s, uint64_t seed, uint64_t stream_id,
                         rmn_mean** out);

/* ---------------- experiments ---------------- */

/* Optional overrides applied on top of a parsed experiment config; the
 * has_* flags select which fields apply.  output_dir == NULL keeps the
 * config value. */
typedef struct rmn_run_options {
  int has_seed;
  uint64_t seed;
  int has_grid_points;
  int grid_points;
  int has_n;
  long long n;
  int has_replicates;
  int replicates;
  const char* output_dir;
} rmn_run_options;

/* Runs the experiment described by a JSON config (file path / literal
 * text).  Writes summary.json plus result tables into the output
 * directory.  RMN_OK when all statistical checks pass,
 * RMN_ERROR_STATISTICAL when the run completed but a check failed.
 * opts may be NULL. */
rmn_status rmn_run_experiment_file(const char* config_path,
                                   const rmn_run_options* opts);
rmn_status rmn_run_experiment_json(const char* config_text,
                                   const rmn_run_options* opts);

#ifdef __cplusplus
}
#endif

#endif
