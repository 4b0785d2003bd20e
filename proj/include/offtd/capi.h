/* offtd C API: a flat, extern "C" surface over the off-policy prediction
 * library.  Two layers:
 *
 *   - otd_command(): runs a full harness command ("run", "sweep", "report",
 *     "oracle", "plotdata") from a JSON config and returns a JSON summary.
 *   - otd_learner_*: an opaque incremental learner handle for callers that
 *     stream their own transitions.
 *
 * Conventions: functions that can fail return otd_status; on failure the
 * thread-local message from otd_last_error() describes the problem.  Strings
 * returned through char** are heap-allocated and must be released with
 * otd_string_free().  Handles from otd_learner_new()/_deserialize() are
 * released with otd_learner_free().  NULL pointer arguments are rejected,
 * never dereferenced.
 */
#ifndef OFFTD_CAPI_H
#define OFFTD_CAPI_H

#include <stdint.h>

#if defined(_WIN32)
#define OTD_API __declspec(dllexport)
#else
#define OTD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum otd_status {
  OTD_OK = 0,
  OTD_ERR_INVALID_ARGUMENT = 1,
  OTD_ERR_RUNTIME = 2
} otd_status;

/* Library version string, e.g. "0.1.0".  Static storage; do not free. */
OTD_API const char* otd_version(void);

/* Message from the most recent failing call on this thread ("" if none).
 * Static thread-local storage; do not free. */
OTD_API const char* otd_last_error(void);

/* Frees a string returned through a char** out-parameter. NULL is a no-op. */
OTD_API void otd_string_free(char* s);

/* Runs one harness command.  config_json is a JSON object whose keys match
 * the CLI flags (see docs/formats.md); values may be strings, numbers,
 * booleans or arrays.  On OTD_OK, *out_json (if non-NULL) receives the
 * command's JSON summary. */
OTD_API otd_status otd_command(const char* command, const char* config_json,
                               char** out_json);

/* One transition for otd_learner_step.  Feature vectors are sparse: x_n
 * ascending indices in x_idx, with values x_val (NULL means all active
 * entries are 1).  x_dim is the common dimensionality and must equal the
 * learner's dim. */
typedef struct otd_transition {
  int32_t state;
  int32_t action;
  int32_t next_state;
  double reward; /* cumulant */
  double gamma_next;
  double pi_prob;
  double b_prob;
  double interest;
  int32_t x_dim;
  const int32_t* x_idx;
  const double* x_val;
  int32_t x_n;
  const int32_t* xn_idx;
  const double* xn_val;
  int32_t xn_n;
} otd_transition;

typedef struct otd_learner otd_learner;

/* Creates a learner.  config_json must name the algorithm and may override
 * any learner parameter, e.g. {"algorithm":"gtd","alpha":0.01,"lambda":0.9}.
 * Returns NULL on error (see otd_last_error). */
OTD_API otd_learner* otd_learner_new(const char* config_json, int32_t dim);
OTD_API void otd_learner_free(otd_learner* lrn);

OTD_API otd_status otd_learner_step(otd_learner* lrn, const otd_transition* t);

/* Writes the prediction for a sparse feature vector into *out. */
OTD_API otd_status otd_learner_predict(const otd_learner* lrn,
                                       const int32_t* x_idx,
                                       const double* x_val, int32_t x_n,
                                       double* out);

/* Copies the primary weight vector into out (capacity n >= dim). */
OTD_API otd_status otd_learner_weights(const otd_learner* lrn, double* out,
                                       int32_t n);

OTD_API int32_t otd_learner_dim(const otd_learner* lrn);
OTD_API int64_t otd_learner_steps(const otd_learner* lrn);
/* 1 once the learner has hit a non-finite update and frozen, else 0. */
OTD_API int32_t otd_learner_diverged(const otd_learner* lrn);

/* Snapshot round-trip: serialize to JSON / restore an identical learner. */
OTD_API otd_status otd_learner_serialize(const otd_learner* lrn,
                                         char** out_json);
OTD_API otd_learner* otd_learner_deserialize(const char* snapshot_json);

#ifdef __cplusplus
}
#endif

#endif /* OFFTD_CAPI_H */
