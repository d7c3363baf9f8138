#ifndef QUASILAB_H
#define QUASILAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QlabStatus {
  QLAB_STATUS_OK = 0,
  QLAB_STATUS_INVALID_INPUT = 1,
  QLAB_STATUS_LE_NOT_CONVERGED = 2,
  QLAB_STATUS_QUANTIZATION_VIOLATED = 3,
  QLAB_STATUS_ZERO_ON_CONTOUR = 4,
  QLAB_STATUS_ROOT_FINDER_FAILED = 5,
  QLAB_STATUS_NULL_POINTER = 6,
  QLAB_STATUS_BUFFER_TOO_SMALL = 7,
  QLAB_STATUS_PANIC = 8,
} QlabStatus;

/**
 * Opaque potential handle.
 */
typedef struct QlabPotential QlabPotential;

typedef struct QlabComplex {
  double re;
  double im;
} QlabComplex;

typedef struct QlabLeResult {
  double value;
  double est_error;
  uint64_t n_used;
  uint64_t grid_used;
} QlabLeResult;

typedef struct QlabWinding {
  int64_t total_winding;
  double nu_n;
  uint64_t grid_used;
  double min_log_abs;
} QlabWinding;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Almost-Mathieu potential `2λ cos θ`.
 */
enum QlabStatus qlab_potential_amo(double lambda, struct QlabPotential **out);

/**
 * Potential `Σ v̂_k e^{ikθ}` from parallel arrays of frequencies and
 * coefficient parts.
 */
enum QlabStatus qlab_potential_from_coeffs(const int32_t *ks,
                                           const double *re,
                                           const double *im,
                                           size_t len,
                                           struct QlabPotential **out);

/**
 * Releases a handle; null is ignored.
 */
void qlab_potential_free(struct QlabPotential *p);

enum QlabStatus qlab_potential_eval(const struct QlabPotential *p,
                                    struct QlabComplex theta,
                                    struct QlabComplex *out);

/**
 * Lyapunov exponent at `E`, imaginary phase `y`, doubling until successive
 * estimates differ by less than `tol`.
 */
enum QlabStatus qlab_converged_le(const struct QlabPotential *p,
                                  double alpha,
                                  struct QlabComplex energy,
                                  double y,
                                  double tol,
                                  struct QlabLeResult *out);

/**
 * Winding of `x ↦ f_n(E, x + iy)` starting from a grid of `grid` phases.
 */
enum QlabStatus qlab_winding_n(const struct QlabPotential *p,
                               double alpha,
                               struct QlabComplex energy,
                               double y,
                               size_t n,
                               size_t grid,
                               struct QlabWinding *out);

/**
 * Eigenvalues of the `n × n` truncation at phase `x + iy`.
 */
enum QlabStatus qlab_truncated_spectrum(const struct QlabPotential *p,
                                        double alpha,
                                        double x,
                                        double y,
                                        size_t n,
                                        struct QlabComplex *out,
                                        size_t capacity,
                                        size_t *written);

/**
 * Zeros of `z ↦ f_n(E, z)`, `z = e^{i(x+iy)}`.
 */
enum QlabStatus qlab_fn_zeros(const struct QlabPotential *p,
                              double alpha,
                              struct QlabComplex energy,
                              size_t n,
                              struct QlabComplex *out,
                              size_t capacity,
                              size_t *written);

/**
 * Message for the most recent failure on this thread, or null. Valid until
 * the next failing call on the same thread.
 */
const char *qlab_last_error(void);

/**
 * Static description of a status code.
 */
const char *qlab_status_string(enum QlabStatus status);

const char *qlab_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUASILAB_H */
