#ifndef HODGELAB_H
#define HODGELAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HlOperator {
  HL_OPERATOR_DBAR = 0,
  HL_OPERATOR_DEL = 1,
  HL_OPERATOR_DBAR_STAR = 2,
  HL_OPERATOR_DEL_STAR = 3,
  HL_OPERATOR_LAPLACIAN = 4,
  HL_OPERATOR_GREEN = 5,
  HL_OPERATOR_HARMONIC = 6,
} HlOperator;

typedef enum HlStatus {
  HL_STATUS_OK = 0,
  HL_STATUS_INVALID_ARGUMENT = 1,
  HL_STATUS_NULL_POINTER = 2,
  HL_STATUS_CONTRACT = 3,
  HL_STATUS_IO = 4,
  HL_STATUS_PANIC = 5,
} HlStatus;

/**
 * A differential form on the flat torus.
 */
typedef struct HlForm HlForm;

/**
 * Exact majorant coefficients `x_1..x_N`.
 */
typedef struct HlMajorant HlMajorant;

typedef struct HlNorms {
  double l2;
  double c0;
  double c1;
} HlNorms;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next call into this library on the same thread.
 */
const char *hl_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hl_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed only once.
 */
void hl_string_free(char *s);

/**
 * Parses a form from its JSON layout.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum HlStatus hl_form_from_json(const char *json, struct HlForm **out);

/**
 * # Safety
 * `form` must be a live handle; `out` must be writable.
 */
enum HlStatus hl_form_to_json(const struct HlForm *form, char **out);

/**
 * # Safety
 * `form` must be null or a handle not yet freed.
 */
void hl_form_free(struct HlForm *form);

/**
 * Applies an operator, returning a new handle.
 *
 * # Safety
 * `form` must be a live handle; `out` must be writable.
 */
enum HlStatus hl_form_apply(const struct HlForm *form, enum HlOperator op, struct HlForm **out);

/**
 * L², C⁰ and C¹ norms; `oversample` is the grid factor (at least 2 is used).
 *
 * # Safety
 * `form` must be a live handle; `out` must be writable.
 */
enum HlStatus hl_form_norms(const struct HlForm *form, size_t oversample, struct HlNorms *out);

/**
 * Builds `x_1..x_order` for `c` and `x1` given as `p/q`, integers or decimals.
 *
 * # Safety
 * `c` and `x1` must be NUL-terminated strings; `out` must be writable.
 */
enum HlStatus hl_majorant_new(const char *c, const char *x1, size_t order, struct HlMajorant **out);

/**
 * # Safety
 * `m` must be null or a handle not yet freed.
 */
void hl_majorant_free(struct HlMajorant *m);

/**
 * Number of coefficients, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live handle.
 */
size_t hl_majorant_order(const struct HlMajorant *m);

/**
 * `x_k` rounded to double.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum HlStatus hl_majorant_coeff(const struct HlMajorant *m, size_t k, double *out);

/**
 * `x_k` exactly, as `p/q` or an integer.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum HlStatus hl_majorant_coeff_exact(const struct HlMajorant *m, size_t k, char **out);

/**
 * Radius of convergence; `INFINITY` when `x1 = 0`.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum HlStatus hl_majorant_radius(const struct HlMajorant *m, double *out);

/**
 * Runs an experiment from its JSON config. Writes the report JSON to
 * `report_out` and whether every check passed to `pass_out`. When `out_dir`
 * is non-null the CSV tables and `report.json` are also written there.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string, `out_dir` null or one, and
 * both out-pointers writable.
 */
enum HlStatus hl_run_experiment(const char *config_json,
                                const char *out_dir,
                                char **report_out,
                                bool *pass_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HODGELAB_H */
