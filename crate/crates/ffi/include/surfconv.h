#ifndef SURFCONV_H
#define SURFCONV_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SurfconvStatus {
  SURFCONV_STATUS_OK = 0,
  SURFCONV_STATUS_NULL_POINTER = 1,
  SURFCONV_STATUS_INVALID_ARGUMENT = 2,
  SURFCONV_STATUS_INVALID_DIMENSION = 3,
  SURFCONV_STATUS_SINGULAR_SUBMATRIX = 4,
  SURFCONV_STATUS_PRECONDITION = 5,
  SURFCONV_STATUS_OVERFLOW = 6,
  SURFCONV_STATUS_INTERNAL = 7,
  SURFCONV_STATUS_PANIC = 8,
} SurfconvStatus;

typedef struct SurfconvMatrix SurfconvMatrix;

typedef struct SurfconvTypeSet SurfconvTypeSet;

/*
 Result of the minor check. `min_abs_det` is `min_num / min_den` in lowest terms.
 */
typedef struct SurfconvStarReport {
  bool holds;
  int64_t min_num;
  int64_t min_den;
  /*
   Number of leading entries of the witness buffer that were written (0 or l).
   */
  size_t witness_len;
} SurfconvStarReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or null. Valid until the
 next failing call on the same thread.
 */
const char *surfconv_last_error_message(void);

/*
 NUL-terminated crate version; static storage.
 */
const char *surfconv_version(void);

/*
 Builds a `k x l` matrix from row-major numerators and denominators.

 # Safety
 `num` and `den` must point to `k * l` readable values; `out` must be writable.
 */
enum SurfconvStatus surfconv_matrix_new(size_t k,
                                        size_t l,
                                        const int64_t *num,
                                        const int64_t *den,
                                        struct SurfconvMatrix **out);

/*
 Parses the `{"k", "l", "entries": [[num, den], ...]}` matrix format.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SurfconvStatus surfconv_matrix_from_json(const char *json, struct SurfconvMatrix **out);

/*
 # Safety
 `m` must be null or a handle from this library that has not been freed.
 */
void surfconv_matrix_free(struct SurfconvMatrix *m);

/*
 # Safety
 `m` must be a live handle; `k` and `l` must be writable.
 */
enum SurfconvStatus surfconv_matrix_dims(const struct SurfconvMatrix *m, size_t *k, size_t *l);

/*
 Exact check that every `l x l` row-submatrix is nonsingular.

 When it fails and `witness` is non-null, the lexicographically first
 singular row set (0-based, `l` entries) is written there.

 # Safety
 `m` must be a live handle, `out` writable, and `witness` null or room for `l` values.
 */
enum SurfconvStatus surfconv_check_star(const struct SurfconvMatrix *m,
                                        struct SurfconvStarReport *out,
                                        size_t *witness);

/*
 The constant `M` with `|zeta| <= M |(C zeta)_i|` on at least `k - l` rows.

 # Safety
 `m` must be a live handle; `out` must be writable.
 */
enum SurfconvStatus surfconv_constant_m(const struct SurfconvMatrix *m, double *out);

/*
 `Phi(y)`: `y` has `k` entries, `out` has `l`.

 # Safety
 Buffers must hold the stated number of doubles.
 */
enum SurfconvStatus surfconv_phi(const struct SurfconvMatrix *m,
                                 const double *y,
                                 size_t y_len,
                                 double *out,
                                 size_t out_len);

/*
 `(L_1(x, y), ..., L_l(x, y))`.

 # Safety
 `x` and `y` hold `k` doubles, `out` holds `l`.
 */
enum SurfconvStatus surfconv_bilinear(const struct SurfconvMatrix *m,
                                      const double *x,
                                      const double *y,
                                      size_t k,
                                      double *out,
                                      size_t out_len);

/*
 `y * (C zeta)` entrywise.

 # Safety
 `y` holds `k` doubles, `zeta` holds `l`, `out` holds `k`.
 */
enum SurfconvStatus surfconv_adjoint(const struct SurfconvMatrix *m,
                                     const double *y,
                                     size_t y_len,
                                     const double *zeta,
                                     size_t zeta_len,
                                     double *out,
                                     size_t out_len);

/*
 # Safety
 `out` must be writable.
 */
enum SurfconvStatus surfconv_typeset_new(uint32_t k, uint32_t d, struct SurfconvTypeSet **out);

/*
 # Safety
 `ts` must be null or a live handle from this library.
 */
void surfconv_typeset_free(struct SurfconvTypeSet *ts);

/*
 Vertex `index` (0, 1 or 2) as `1/p = p_num/p_den`, `1/q = q_num/q_den`.

 # Safety
 `ts` must be a live handle; `out` must have room for 4 values
 (`p_num, p_den, q_num, q_den`).
 */
enum SurfconvStatus surfconv_typeset_vertex(const struct SurfconvTypeSet *ts,
                                            size_t index,
                                            int64_t *out);

/*
 Band width `1/p - 1/q` bound; `present` is false when there is no band.

 # Safety
 `ts` must be a live handle; `present` and `out` (2 values) must be writable.
 */
enum SurfconvStatus surfconv_typeset_ricci_gap(const struct SurfconvTypeSet *ts,
                                               bool *present,
                                               int64_t *out);

/*
 Exact membership of `(p_num/p_den, q_num/q_den)`; `interior` demands
 strict inequalities.

 # Safety
 `ts` must be a live handle; `out` must be writable.
 */
enum SurfconvStatus surfconv_typeset_contains(const struct SurfconvTypeSet *ts,
                                              int64_t p_num,
                                              int64_t p_den,
                                              int64_t q_num,
                                              int64_t q_den,
                                              bool interior,
                                              bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SURFCONV_H */
