#ifndef PRETZEL_LO_H
#define PRETZEL_LO_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum PlStatus {
  PL_STATUS_OK = 0,
  PL_STATUS_NULL_POINTER = 1,
  PL_STATUS_INVALID_KNOT = 2,
  PL_STATUS_UNSUPPORTED = 3,
  PL_STATUS_INVALID_INPUT = 4,
  PL_STATUS_OUT_OF_RANGE = 5,
  PL_STATUS_BELOW_THRESHOLD = 6,
  PL_STATUS_NO_CONVERGENCE = 7,
  PL_STATUS_NO_BRACKET = 8,
  PL_STATUS_NUMERICAL_FAILURE = 9,
  PL_STATUS_PANIC = 10,
} PlStatus;

// Opaque certificate handle.
typedef struct PlCertificate PlCertificate;

// Opaque knot handle.
typedef struct PlKnot PlKnot;

// Solver tolerances. Pass `NULL` wherever a config is accepted to use
// the defaults from `pl_config_default`.
typedef struct PlConfig {
  double root_tol;
  double residual_tol;
  uint32_t max_iter;
  double march_step;
  double boundary_eps;
} PlConfig;

// One point of the trace locus.
typedef struct PlLocus {
  double r1;
  double r2;
  double r3;
  double gamma;
  double delta;
  // Square of the meridian trace.
  double t_squared;
} PlLocus;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Default tolerances.
struct PlConfig pl_config_default(void);

// Message for the last error on this thread, or `NULL` if none. The
// pointer stays valid until the next failing call on the same thread.
const char *pl_last_error(void);

// Creates a knot from three odd twist counts in any order.
//
// # Safety
// `out` must be valid for writes.
enum PlStatus pl_knot_new(uint32_t a1, uint32_t a2, uint32_t a3, struct PlKnot **out);

// # Safety
// `knot` must be `NULL` or a handle from `pl_knot_new` not yet freed.
void pl_knot_free(struct PlKnot *knot);

// Writes the sorted twist counts into `out[0..3]`.
//
// # Safety
// `knot` must be a live handle and `out` valid for three writes.
enum PlStatus pl_knot_twists(const struct PlKnot *knot, uint32_t *out);

// Limit of the squared meridian trace as `r1 -> 2`.
//
// # Safety
// `knot` must be a live handle and `out` valid for writes.
enum PlStatus pl_limit_t(const struct PlKnot *knot, double *out);

// # Safety
// `knot` must be a live handle and `out` valid for writes.
enum PlStatus pl_theta0(const struct PlKnot *knot, double *out);

// Smallest cover order that is certified.
//
// # Safety
// `knot` must be a live handle and `out` valid for writes.
enum PlStatus pl_cover_threshold(const struct PlKnot *knot, uint32_t *out);

// Right end of the elliptic stretch, where the squared trace reaches 4.
//
// # Safety
// `knot` must be a live handle, `cfg` `NULL` or valid, `out` valid for writes.
enum PlStatus pl_r1_star(const struct PlKnot *knot, const struct PlConfig *cfg, double *out);

// # Safety
// `knot` must be a live handle, `cfg` `NULL` or valid, `out` valid for writes.
enum PlStatus pl_solve_locus(const struct PlKnot *knot,
                             double r1,
                             const struct PlConfig *cfg,
                             struct PlLocus *out);

// Certifies the surgery slope `m/l`.
//
// # Safety
// `knot` must be a live handle, `cfg` `NULL` or valid, `out` valid for writes.
enum PlStatus pl_realize_slope(const struct PlKnot *knot,
                               int64_t m,
                               int64_t l,
                               const struct PlConfig *cfg,
                               struct PlCertificate **out);

// Certifies the `n`-fold cyclic branched cover.
//
// # Safety
// `knot` must be a live handle, `cfg` `NULL` or valid, `out` valid for writes.
enum PlStatus pl_realize_cover(const struct PlKnot *knot,
                               uint32_t n,
                               const struct PlConfig *cfg,
                               struct PlCertificate **out);

// # Safety
// `cert` must be `NULL` or a handle not yet freed.
void pl_certificate_free(struct PlCertificate *cert);

// Whether every residual on the certificate is within tolerance.
// Returns false for `NULL`.
//
// # Safety
// `cert` must be `NULL` or a live handle.
bool pl_certificate_passed(const struct PlCertificate *cert);

// `r1` of the certified point, NaN for `NULL`.
//
// # Safety
// `cert` must be `NULL` or a live handle.
double pl_certificate_r1(const struct PlCertificate *cert);

// Boundary slope `-phi / theta_eff` at the certified point, NaN for `NULL`.
//
// # Safety
// `cert` must be `NULL` or a live handle.
double pl_certificate_slope(const struct PlCertificate *cert);

// Largest residual recorded on the certificate, NaN for `NULL`.
//
// # Safety
// `cert` must be `NULL` or a live handle.
double pl_certificate_worst_residual(const struct PlCertificate *cert);

// Serializes the certificate; release the string with `pl_string_free`.
//
// # Safety
// `cert` must be a live handle and `out` valid for writes.
enum PlStatus pl_certificate_to_json(const struct PlCertificate *cert, char **out);

// Full analysis report as JSON; release with `pl_string_free`.
//
// # Safety
// `knot` must be a live handle, `cfg` `NULL` or valid, `out` valid for writes.
enum PlStatus pl_analyze_json(const struct PlKnot *knot, const struct PlConfig *cfg, char **out);

// # Safety
// `s` must be `NULL` or a string returned by this library, not yet freed.
void pl_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PRETZEL_LO_H */
