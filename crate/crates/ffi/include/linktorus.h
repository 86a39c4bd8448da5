#ifndef LINKTORUS_H
#define LINKTORUS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. `LT_STATUS_OK` is zero; everything else is a failure.
 */
typedef enum LtStatus {
  LT_STATUS_OK = 0,
  LT_STATUS_NULL_POINTER = 1,
  LT_STATUS_INVALID_UTF8 = 2,
  LT_STATUS_PARSE = 3,
  LT_STATUS_IO = 4,
  LT_STATUS_BAD_PARAMETER = 5,
  LT_STATUS_GEOMETRY = 6,
  LT_STATUS_NO_CONVERGENCE = 7,
  LT_STATUS_NUMERICAL = 8,
  LT_STATUS_PANIC = 99,
} LtStatus;

/**
 * Opaque link handle.
 */
typedef struct LtLink LtLink;

typedef struct LtCrossRatio {
  double re;
  double abs;
  double theta;
  double imag_abs;
} LtCrossRatio;

typedef struct LtFunctionals {
  double signed_area;
  double area;
  double energy;
  uint32_t grid;
  double est_error;
} LtFunctionals;

typedef struct LtSymplectic {
  double max_err;
  int32_t sign;
  bool sign_determined;
  double integral;
} LtSymplectic;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or NULL. Valid until the next failing call.
 */
const char *lt_last_error_message(void);

/**
 * Parse a link from `lk-1` JSON text.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a writable pointer.
 */
enum LtStatus lt_link_from_json(const char *json, struct LtLink **out);

/**
 * Read a link file from disk.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a writable pointer.
 */
enum LtStatus lt_link_read(const char *path, struct LtLink **out);

/**
 * Build a catalogue link such as `hopf`, `separated:1.5`, `parallel:0.8,0.3` or `perturbed:0.1,7`.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a writable pointer.
 */
enum LtStatus lt_link_standard(const char *name, struct LtLink **out);

/**
 * Image of `link` under a seeded random Möbius transformation.
 *
 * # Safety
 * `link` must be a live handle and `out` a writable pointer.
 */
enum LtStatus lt_link_transformed(const struct LtLink *link,
                                  uint64_t seed,
                                  double rapidity_max,
                                  struct LtLink **out);

/**
 * Release a handle. NULL is ignored.
 *
 * # Safety
 * `link` must be NULL or a handle not yet freed.
 */
void lt_link_free(struct LtLink *link);

/**
 * Serialize a link as `lk-1` JSON. Free the result with [`lt_string_free`].
 *
 * # Safety
 * `link` must be a live handle and `out` a writable pointer.
 */
enum LtStatus lt_link_to_json(const struct LtLink *link, char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void lt_string_free(char *s);

/**
 * Metric coefficient g(s, t) of the torus of spheres.
 *
 * # Safety
 * `link` must be a live handle and `out` a writable pointer.
 */
enum LtStatus lt_metric_coefficient(const struct LtLink *link, double s, double t, double *out);

/**
 * Infinitesimal cross ratio density at (s, t).
 *
 * # Safety
 * `link` must be a live handle and `out` a writable pointer.
 */
enum LtStatus lt_inf_cross_ratio(const struct LtLink *link,
                                 double s,
                                 double t,
                                 struct LtCrossRatio *out);

/**
 * Signed area, area and cross energy, refined from 32x32 up to `max_grid` until all change by at most `tol`.
 *
 * # Safety
 * `link` must be a live handle and `out` a writable pointer.
 */
enum LtStatus lt_functionals(const struct LtLink *link,
                             double tol,
                             uint32_t max_grid,
                             struct LtFunctionals *out);

/**
 * Compare the real cross ratio with the pulled-back exterior derivative on an `n` x `n` grid.
 *
 * # Safety
 * `link` must be a live handle and `out` a writable pointer.
 */
enum LtStatus lt_symplectic_check(const struct LtLink *link, uint32_t n, struct LtSymplectic *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LINKTORUS_H */
