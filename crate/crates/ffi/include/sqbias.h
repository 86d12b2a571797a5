#ifndef SQBIAS_H
#define SQBIAS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SqbStatus {
  SQB_STATUS_OK = 0,
  SQB_STATUS_NULL_POINTER = 1,
  SQB_STATUS_INVALID_UTF8 = 2,
  SQB_STATUS_INVALID_JSON = 3,
  SQB_STATUS_INVALID_DISTRIBUTION = 4,
  // An operation's precondition failed (wrong mean, wrong domain, ...).
  SQB_STATUS_PRECONDITION = 5,
  SQB_STATUS_UNSUPPORTED = 6,
  // A verified inequality or identity failed.
  SQB_STATUS_VIOLATION = 7,
  SQB_STATUS_PANIC = 8,
} SqbStatus;

typedef enum SqbTransform {
  SQB_TRANSFORM_SIZE = 0,
  SQB_TRANSFORM_ZERO = 1,
  SQB_TRANSFORM_SQUARE = 2,
  SQB_TRANSFORM_DOUBLE_SIZE = 3,
  SQB_TRANSFORM_UNIFORM_PRODUCT = 4,
} SqbTransform;

// Opaque distribution handle.
typedef struct SqbDist SqbDist;

typedef struct SqbMoments {
  double mean;
  double second;
  double third;
  double abs_third;
} SqbMoments;

// `f(t)`, `f'(t)`, `f''(t)` as real and imaginary parts.
typedef struct SqbCharFn {
  double f_re;
  double f_im;
  double fprime_re;
  double fprime_im;
  double fsecond_re;
  double fsecond_im;
} SqbCharFn;

typedef struct SqbTwoPointStats {
  double third;
  double abs_third;
  double l1_square;
  double ratio;
} SqbTwoPointStats;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// The pointer stays valid until the next call into the library on this thread.
const char *sqb_last_error(void);

// Parses a JSON distribution into a new handle.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum SqbStatus sqb_dist_from_json(const char *json, struct SqbDist **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `d` must come from this library and not have been freed already.
void sqb_dist_free(struct SqbDist *d);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed already.
void sqb_string_free(char *s);

// Serializes a handle to JSON; free the result with [`sqb_string_free`].
//
// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum SqbStatus sqb_dist_to_json(const struct SqbDist *d, char **out);

// Applies a transformation, producing a new handle.
//
// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum SqbStatus sqb_transform(const struct SqbDist *d, enum SqbTransform kind, struct SqbDist **out);

// Affine map to mean 0 and variance 1, producing a new handle.
//
// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum SqbStatus sqb_standardize(const struct SqbDist *d, struct SqbDist **out);

// `P(X < u)`.
//
// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum SqbStatus sqb_cdf(const struct SqbDist *d, double u, double *out);

// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum SqbStatus sqb_moments(const struct SqbDist *d, struct SqbMoments *out);

// # Safety
// `d` must be a live handle and `out` a valid pointer.
enum SqbStatus sqb_cf_eval(const struct SqbDist *d, double t, struct SqbCharFn *out);

// # Safety
// `a`, `b` must be live handles and `out` a valid pointer.
enum SqbStatus sqb_l1_distance(const struct SqbDist *a, const struct SqbDist *b, double *out);

// # Safety
// `out` must be a valid pointer.
enum SqbStatus sqb_corollary1_bound(double beta3, double t, double *out);

// # Safety
// `out` must be a valid pointer.
enum SqbStatus sqb_eq9_bound(double beta3, double t, double *out);

// # Safety
// `out` must be a valid pointer.
enum SqbStatus sqb_corollary2_bound(double beta3, double t, double *out);

// Bound curve of a standardized law as CSV; free `csv` with [`sqb_string_free`].
// Returns `Violation` (with the CSV still written) when a slack drops below `-1e-9`.
//
// # Safety
// `d` must be a live handle; `csv` and `min_slack` valid pointers.
enum SqbStatus sqb_bound_curve_csv(const struct SqbDist *d,
                                   double t_max,
                                   size_t steps,
                                   char **csv,
                                   double *min_slack);

// # Safety
// `out` must be a valid pointer.
enum SqbStatus sqb_two_point_stats(double p, struct SqbTwoPointStats *out);

// `g(x, y, z, sigma2)` for an admissible three-point configuration.
//
// # Safety
// `out` must be a valid pointer.
enum SqbStatus sqb_three_point_g(double x, double y, double z, double sigma2, double *out);

// Runs a verification suite by name; `count = 0` uses the suite default.
// `report` receives the JSON report, or the counterexample when the status is `Violation`.
//
// # Safety
// `suite` must be a NUL-terminated string and `report` a valid pointer.
enum SqbStatus sqb_verify(const char *suite, uint64_t seed, size_t count, char **report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SQBIAS_H */
