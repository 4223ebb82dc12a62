#ifndef QKZLAB_H
#define QKZLAB_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Path counting method for `qkz_tsscpp_gen_poly`.
 */
typedef enum QkzMethod {
  QKZ_METHOD_DIRECT = 0,
  QKZ_METHOD_LGV = 1,
  QKZ_METHOD_EXTRACT = 2,
} QkzMethod;

/**
 * Result codes.
 */
typedef enum QkzStatus {
  QKZ_STATUS_OK = 0,
  QKZ_STATUS_NULL_POINTER = 1,
  QKZ_STATUS_INVALID_UTF8 = 2,
  QKZ_STATUS_PARSE_ERROR = 3,
  QKZ_STATUS_INVALID_ARGUMENT = 4,
  QKZ_STATUS_RESOURCE_BOUND = 5,
  /**
   * The computation failed an internal check; the message has details.
   */
  QKZ_STATUS_INTERNAL = 6,
} QkzStatus;

/**
 * Opaque polynomial handle.
 */
typedef struct QkzPoly QkzPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a polynomial such as `1 + 3*tau + 2*tau^2`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum QkzStatus qkz_poly_parse(const char *text, struct QkzPoly **out);

/**
 * Canonical text of a polynomial. Free the result with `qkz_string_free`.
 *
 * # Safety
 * `p` must be a live handle and `out` a valid pointer.
 */
enum QkzStatus qkz_poly_render(const struct QkzPoly *p, char **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `p` must be null or a handle not freed before.
 */
void qkz_poly_free(struct QkzPoly *p);

/**
 * `*out = a + b`.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
enum QkzStatus qkz_poly_add(const struct QkzPoly *a, const struct QkzPoly *b, struct QkzPoly **out);

/**
 * `*out = a * b`.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
enum QkzStatus qkz_poly_mul(const struct QkzPoly *a, const struct QkzPoly *b, struct QkzPoly **out);

/**
 * `*out = (a == b)`.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` a valid pointer.
 */
enum QkzStatus qkz_poly_eq(const struct QkzPoly *a, const struct QkzPoly *b, bool *out);

/**
 * Weighted TSSCPP polynomial. `weights[k]` is the weight of slice `k` (slice 0 is only used when
 * `modified`); `weights_len` must be at least `n`. With `weights == NULL` the symbolic weights
 * `t0, t1, ...` are used.
 *
 * # Safety
 * `weights` must be null or point to `weights_len` live handles; `out` must be valid.
 */
enum QkzStatus qkz_tsscpp_gen_poly(uintptr_t n,
                                   bool modified,
                                   const struct QkzPoly *const *weights,
                                   uintptr_t weights_len,
                                   enum QkzMethod method,
                                   struct QkzPoly **out);

/**
 * Homogeneous component `Psi_a / Psi_{pi_0}` as a polynomial in `tau`, for the non-decreasing
 * sequence `a[0..len]` with `len == n`.
 *
 * # Safety
 * `a` must point to `len` integers; `out` must be valid.
 */
enum QkzStatus qkz_psi_seq_homogeneous(const uintptr_t *a,
                                       uintptr_t len,
                                       uintptr_t n,
                                       struct QkzPoly **out);

/**
 * Sum of the homogeneous components and its refinement in `t`.
 *
 * # Safety
 * `out_sum` and `out_refined` must be valid pointers.
 */
enum QkzStatus qkz_sum_rules(uintptr_t n, struct QkzPoly **out_sum, struct QkzPoly **out_refined);

/**
 * `N'(t, tau)` minus the refined component sum; zero when the two agree.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum QkzStatus qkz_conjecture_residual(uintptr_t n, struct QkzPoly **out);

/**
 * Runs a verification suite (`tsscpp`, `qkz`, `identities`, `conjectures` or `all`) with default
 * bounds and writes the JSON report (without timings) to `out_json`. `*out_passed` tells whether
 * every check passed.
 *
 * # Safety
 * `suite` must be a NUL-terminated string; the output pointers must be valid.
 */
enum QkzStatus qkz_verify(const char *suite, uintptr_t max_n, char **out_json, bool *out_passed);

/**
 * Message for the last failed call on this thread, or null. Free it with `qkz_string_free`.
 */
char *qkz_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string from this library not freed before.
 */
void qkz_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QKZLAB_H */
