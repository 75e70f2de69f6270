#ifndef OCSCA_H
#define OCSCA_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum OcscaStatus {
  OCSCA_STATUS_OK = 0,
  OCSCA_STATUS_NULL_POINTER = 1,
  OCSCA_STATUS_INVALID_ARGUMENT = 2,
  OCSCA_STATUS_DIMENSION_MISMATCH = 3,
  OCSCA_STATUS_ZERO_VECTOR = 4,
  OCSCA_STATUS_NUMERIC_ERROR = 5,
  OCSCA_STATUS_IO_ERROR = 6,
  OCSCA_STATUS_PARSE_ERROR = 7,
  OCSCA_STATUS_PANIC = 8,
} OcscaStatus;

typedef enum OcscaStepCase {
  OCSCA_STEP_CASE_PASSIVE = 0,
  OCSCA_STEP_CASE_INTERIOR = 1,
  OCSCA_STEP_CASE_CLAMPED = 2,
  OCSCA_STEP_CASE_SKIPPED_ZERO_VECTOR = 3,
} OcscaStepCase;

/**
 * Opaque learner handle.
 */
typedef struct OcscaLearner OcscaLearner;

/**
 * Record of one update, mirroring the Rust `StepOutcome`.
 */
typedef struct OcscaStepOutcome {
  double margin_term;
  double raw_tau;
  double tau;
  enum OcscaStepCase step_case;
  double loss_before;
  double loss_after;
  double cost;
} OcscaStepOutcome;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a learner over a zero base scorer (`f0 = 0`).
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum OcscaStatus ocsca_learner_new(size_t dimension,
                                   double cost_positive,
                                   double cost_negative,
                                   double alpha,
                                   bool augment_bias,
                                   struct OcscaLearner **out);

/**
 * Creates a learner over a linear base scorer `f0(x) = base_weights·x (+ intercept)`.
 *
 * # Safety
 * `base_weights` must point to `dimension` doubles; `out` as for
 * [`ocsca_learner_new`].
 */
enum OcscaStatus ocsca_learner_new_linear(const double *base_weights,
                                          size_t dimension,
                                          bool has_intercept,
                                          double intercept,
                                          double cost_positive,
                                          double cost_negative,
                                          double alpha,
                                          bool augment_bias,
                                          struct OcscaLearner **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `learner` must come from this library and not be used afterwards.
 */
void ocsca_learner_free(struct OcscaLearner *learner);

/**
 * Feature dimension, or 0 for a null handle.
 *
 * # Safety
 * `learner` must be null or a live handle.
 */
size_t ocsca_learner_dimension(const struct OcscaLearner *learner);

/**
 * Processes one dense sample. `out` may be null.
 *
 * # Safety
 * `x` must point to `len` doubles.
 */
enum OcscaStatus ocsca_learner_process_dense(struct OcscaLearner *learner,
                                             const double *x,
                                             size_t len,
                                             int label,
                                             struct OcscaStepOutcome *out);

/**
 * Processes one sparse sample with 0-based, strictly increasing indices.
 *
 * # Safety
 * `indices` and `values` must each point to `nnz` elements.
 */
enum OcscaStatus ocsca_learner_process_sparse(struct OcscaLearner *learner,
                                              const size_t *indices,
                                              const double *values,
                                              size_t nnz,
                                              int label,
                                              struct OcscaStepOutcome *out);

/**
 * Writes `f(x)` to `out`.
 *
 * # Safety
 * `x` must point to `len` doubles; `out` must be writable.
 */
enum OcscaStatus ocsca_learner_score_dense(const struct OcscaLearner *learner,
                                           const double *x,
                                           size_t len,
                                           double *out);

/**
 * Writes the predicted label (`+1` / `-1`) to `out`.
 *
 * # Safety
 * As for [`ocsca_learner_score_dense`].
 */
enum OcscaStatus ocsca_learner_predict_dense(const struct OcscaLearner *learner,
                                             const double *x,
                                             size_t len,
                                             int *out);

/**
 * Copies the adaptation weights (plus the bias weight, last, if enabled)
 * into `buffer`. The required length is always written to `required`;
 * pass a null `buffer` to query it. A short buffer gives
 * `OCSCA_STATUS_INVALID_ARGUMENT`.
 *
 * # Safety
 * `buffer` must have room for `capacity` doubles; `required` must be
 * writable.
 */
enum OcscaStatus ocsca_learner_weights(const struct OcscaLearner *learner,
                                       double *buffer,
                                       size_t capacity,
                                       size_t *required);

/**
 * Saves the learner to a model file (written atomically).
 *
 * # Safety
 * `path` must be a NUL-terminated string.
 */
enum OcscaStatus ocsca_learner_save(const struct OcscaLearner *learner, const char *path);

/**
 * Loads a model file into a new handle.
 *
 * # Safety
 * `path` must be a NUL-terminated string; `out` writable.
 */
enum OcscaStatus ocsca_learner_load(const char *path, struct OcscaLearner **out);

/**
 * Message for the most recent failure on this thread, or null. Valid
 * until the next failing call on the same thread.
 */
const char *ocsca_last_error_message(void);

/**
 * Static name of a status code.
 */
const char *ocsca_status_name(enum OcscaStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OCSCA_H */
