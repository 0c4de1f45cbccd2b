#ifndef RIGIDITY_H
#define RIGIDITY_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RigidityStatus {
  RIGIDITY_STATUS_OK = 0,
  RIGIDITY_STATUS_NULL_POINTER = 1,
  RIGIDITY_STATUS_INVALID_ARGUMENT = 2,
  RIGIDITY_STATUS_PARSE = 3,
  RIGIDITY_STATUS_CONSTRUCTION = 4,
  RIGIDITY_STATUS_COUNTEREXAMPLE = 5,
  RIGIDITY_STATUS_BUFFER_TOO_SMALL = 6,
  RIGIDITY_STATUS_PANIC = 7,
} RigidityStatus;

typedef enum RigidityVariant {
  RIGIDITY_VARIANT_CIRCLE = 0,
  RIGIDITY_VARIANT_INTERVAL = 1,
} RigidityVariant;

/**
 * A disjointness certificate.
 */
typedef struct RigidityCertificate RigidityCertificate;

/**
 * A built action model.
 */
typedef struct RigidityModel RigidityModel;

/**
 * Tuned rigidity parameters.
 */
typedef struct RigidityParams RigidityParams;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the last failure on this thread.
 *
 * # Safety
 * `buf` must hold `cap` bytes; `needed` may be null.
 */
enum RigidityStatus rigidity_last_error(char *buf, size_t cap, size_t *needed);

/**
 * Builds a model with the default schedule, base point and flow times.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum RigidityStatus rigidity_model_build(enum RigidityVariant variant,
                                         uint32_t depth,
                                         struct RigidityModel **out);

/**
 * # Safety
 * `model` must come from `rigidity_model_build` or be null.
 */
void rigidity_model_free(struct RigidityModel *model);

/**
 * # Safety
 * `model` and `out` must be valid.
 */
enum RigidityStatus rigidity_model_gap_count(const struct RigidityModel *model, size_t *out);

/**
 * Image of `x` under a group element written like `h1^2 a B h2^-1`.
 *
 * # Safety
 * `model`, `element` and `out` must be valid; `element` NUL-terminated.
 */
enum RigidityStatus rigidity_model_evaluate(const struct RigidityModel *model,
                                            const char *element,
                                            double x,
                                            double *out);

/**
 * Tunes parameters for `f0` (a word over `a, b, A, B`) and `(r, s)`
 * written as exact quadratic values such as `1` and `√2` (or `sqrt2`).
 *
 * # Safety
 * All pointers must be valid and the strings NUL-terminated.
 */
enum RigidityStatus rigidity_params_tune(const char *f0_word,
                                         const char *r,
                                         const char *s,
                                         struct RigidityParams **out);

/**
 * # Safety
 * `params` must come from `rigidity_params_tune` or be null.
 */
void rigidity_params_free(struct RigidityParams *params);

/**
 * The tuned parameters as text.
 *
 * # Safety
 * `params` must be valid, `buf` must hold `cap` bytes, `needed` may be null.
 */
enum RigidityStatus rigidity_params_describe(const struct RigidityParams *params,
                                             char *buf,
                                             size_t cap,
                                             size_t *needed);

/**
 * `λ`, `t` and `μ(J)` as doubles.
 *
 * # Safety
 * All pointers must be valid.
 */
enum RigidityStatus rigidity_params_values(const struct RigidityParams *params,
                                           double *lambda,
                                           double *t,
                                           double *mu_j);

/**
 * Certifies that the `2^k` images of `J` are disjoint. On overlap the
 * status is `Counterexample` and the message names the pair.
 *
 * # Safety
 * `params` and `out` must be valid.
 */
enum RigidityStatus rigidity_certify(const struct RigidityParams *params,
                                     uint32_t k,
                                     struct RigidityCertificate **out);

/**
 * # Safety
 * `cert` must come from `rigidity_certify` or be null.
 */
void rigidity_certificate_free(struct RigidityCertificate *cert);

/**
 * # Safety
 * `cert` and `out` must be valid.
 */
enum RigidityStatus rigidity_certificate_len(const struct RigidityCertificate *cert, size_t *out);

/**
 * The certificate file contents.
 *
 * # Safety
 * `cert` must be valid, `buf` must hold `cap` bytes, `needed` may be null.
 */
enum RigidityStatus rigidity_certificate_text(const struct RigidityCertificate *cert,
                                              char *buf,
                                              size_t cap,
                                              size_t *needed);

/**
 * Re-checks certificate text independently; `intervals` receives the count.
 *
 * # Safety
 * `text` must be NUL-terminated and `intervals` valid.
 */
enum RigidityStatus rigidity_certificate_check(const char *contents, size_t *intervals);

/**
 * Least `k ≥ N` with `2^k A^{3N} (3/4)^{k−N} |J| > |[a,b]|`, from exact
 * rationals given as numerator and denominator.
 *
 * # Safety
 * `out` must be valid.
 */
enum RigidityStatus rigidity_growth_threshold(int64_t a_num,
                                              int64_t a_den,
                                              uint32_t n,
                                              int64_t j_num,
                                              int64_t j_den,
                                              int64_t ab_num,
                                              int64_t ab_den,
                                              uint32_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RIGIDITY_H */
