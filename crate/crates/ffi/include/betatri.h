#ifndef BETATRI_H
#define BETATRI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum BtStatus {
  BT_STATUS_OK = 0,
  BT_STATUS_NULL_POINTER = 1,
  BT_STATUS_DOMAIN = 2,
  BT_STATUS_PARAMETER = 3,
  BT_STATUS_INPUT = 4,
  BT_STATUS_DIMENSION = 5,
  BT_STATUS_GUARD = 6,
  BT_STATUS_DIVERGENCE = 7,
  BT_STATUS_FIT = 8,
  BT_STATUS_CALIBRATION = 9,
  BT_STATUS_PRECISION = 10,
  BT_STATUS_PANIC = 11,
} BtStatus;

typedef enum BtEnsemble {
  BT_ENSEMBLE_HERMITE = 0,
  BT_ENSEMBLE_LAGUERRE = 1,
} BtEnsemble;

typedef enum BtSide {
  BT_SIDE_UPPER = 0,
  BT_SIDE_LOWER = 1,
} BtSide;

typedef enum BtExtremal {
  BT_EXTREMAL_MAX = 0,
  BT_EXTREMAL_MIN = 1,
} BtExtremal;

/**
 * Opaque beta-Hermite draw.
 */
typedef struct BtHermiteSample BtHermiteSample;

/**
 * Opaque beta-Laguerre draw.
 */
typedef struct BtLaguerreSample BtLaguerreSample;

/**
 * Tail probability query; `kappa` is ignored for the Hermite ensemble.
 */
typedef struct BtTailQuery {
  enum BtEnsemble ensemble;
  enum BtSide side;
  enum BtExtremal extremal;
  size_t n;
  double beta;
  double kappa;
  double eps;
  uint64_t samples;
  uint64_t seed;
} BtTailQuery;

/**
 * Hit count with its Clopper-Pearson 95% interval.
 */
typedef struct BtTailEstimate {
  uint64_t hits;
  uint64_t samples;
  double p_hat;
  double ci_low;
  double ci_high;
} BtTailEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *bt_version(void);

/**
 * Message of the last failed call on this thread, or null if none.
 * The pointer stays valid until the next failing call on the same thread.
 */
const char *bt_last_error_message(void);

/**
 * `ln Gamma(x)` for `x > 0`.
 *
 * # Safety
 * `out` must be a valid pointer to a double.
 */
enum BtStatus bt_log_gamma(double x, double *out);

/**
 * Mean of a chi variable with `r > 0` degrees of freedom.
 *
 * # Safety
 * `out` must be a valid pointer to a double.
 */
enum BtStatus bt_mean_chi(double r, double *out);

/**
 * Draws a beta-Hermite matrix from stream `stream` under `seed`.
 *
 * # Safety
 * `out` must be a valid pointer; release the handle with `bt_hermite_sample_free`.
 */
enum BtStatus bt_hermite_sample_new(size_t n,
                                    double beta,
                                    uint64_t seed,
                                    uint64_t stream,
                                    struct BtHermiteSample **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `h` must come from `bt_hermite_sample_new` and not be used afterwards.
 */
void bt_hermite_sample_free(struct BtHermiteSample *h);

/**
 * Matrix size of a handle, 0 for null.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t bt_hermite_sample_n(const struct BtHermiteSample *h);

/**
 * Largest eigenvalue to within `tol` (`tol <= 0` selects a default).
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum BtStatus bt_hermite_sample_lambda_max(const struct BtHermiteSample *h,
                                           double tol,
                                           double *out);

/**
 * Smallest eigenvalue to within `tol` (`tol <= 0` selects a default).
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum BtStatus bt_hermite_sample_lambda_min(const struct BtHermiteSample *h,
                                           double tol,
                                           double *out);

/**
 * Centred quadratic form `v^T (H - 2 sqrt(n) I) v` of a length-`n` vector `v`.
 *
 * # Safety
 * `h` must be a live handle, `v` must point to `len` doubles and `out` be valid.
 */
enum BtStatus bt_hermite_sample_form(const struct BtHermiteSample *h,
                                     const double *v,
                                     size_t len,
                                     double *out);

/**
 * Draws a beta-Laguerre matrix from stream `stream` under `seed`.
 *
 * # Safety
 * `out` must be a valid pointer; release the handle with `bt_laguerre_sample_free`.
 */
enum BtStatus bt_laguerre_sample_new(size_t n,
                                     double kappa,
                                     double beta,
                                     uint64_t seed,
                                     uint64_t stream,
                                     struct BtLaguerreSample **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `h` must come from `bt_laguerre_sample_new` and not be used afterwards.
 */
void bt_laguerre_sample_free(struct BtLaguerreSample *h);

/**
 * Matrix size of a handle, 0 for null.
 *
 * # Safety
 * `h` must be null or a live handle.
 */
size_t bt_laguerre_sample_n(const struct BtLaguerreSample *h);

/**
 * Largest eigenvalue to within `tol` (`tol <= 0` selects a default).
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum BtStatus bt_laguerre_sample_lambda_max(const struct BtLaguerreSample *h,
                                            double tol,
                                            double *out);

/**
 * Smallest eigenvalue to within `tol` (`tol <= 0` selects a default).
 *
 * # Safety
 * `h` must be a live handle and `out` a valid pointer.
 */
enum BtStatus bt_laguerre_sample_lambda_min(const struct BtLaguerreSample *h,
                                            double tol,
                                            double *out);

/**
 * Centred form `kappa^{-1/2} v^T (L - (sqrt(kappa) + sqrt(n))^2 I) v`.
 *
 * # Safety
 * `h` must be a live handle, `v` must point to `len` doubles and `out` be valid.
 */
enum BtStatus bt_laguerre_sample_form(const struct BtLaguerreSample *h,
                                      const double *v,
                                      size_t len,
                                      double *out);

/**
 * Monte Carlo tail estimate; `workers == 0` uses every core. Results do not
 * depend on `workers`.
 *
 * # Safety
 * `q` must point to a valid query and `out` to writable storage.
 */
enum BtStatus bt_estimate_tail(const struct BtTailQuery *q,
                               size_t workers,
                               struct BtTailEstimate *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BETATRI_H */
