/* C interface to the zeno-ring simulator. */

#ifndef ZENO_RING_H
#define ZENO_RING_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Rate methods selectable through [`zr_rate`].
 */
typedef enum ZrRateMethod {
  ZrRateMethod_DerivedSinc = 0,
  ZrRateMethod_TimeIntegral = 1,
  ZrRateMethod_PaperSinc = 2,
  ZrRateMethod_GoldenRuleBroadened = 3,
  ZrRateMethod_GoldenRuleContinuum = 4,
  ZrRateMethod_WignerWeisskopf = 5,
} ZrRateMethod;

/**
 * Status codes returned by every entry point.
 */
typedef enum ZrStatus {
  ZrStatus_Ok = 0,
  ZrStatus_NullPointer = 1,
  ZrStatus_InvalidArgument = 2,
  ZrStatus_OutOfBand = 3,
  ZrStatus_NumericalFailure = 4,
  ZrStatus_Panic = 5,
} ZrStatus;

/**
 * Opaque handle over the validated system parameters.
 */
typedef struct ZrSystem ZrSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Allocates a system handle. `statistics` is 0 for fermions, 1 for bosons.
 * On success writes the handle through `out` and returns `Ok`; the handle
 * must be released with [`zr_system_free`].
 *
 * # Safety
 * `out`, when non-null, must point to writable memory for one pointer.
 */
enum ZrStatus zr_system_new(size_t half_count,
                            double hopping,
                            double coupling,
                            double onsite,
                            double flux,
                            int statistics,
                            struct ZrSystem **out);

/**
 * Releases a handle from [`zr_system_new`]. A null pointer is a no-op.
 *
 * # Safety
 * `system` must be a pointer previously returned by [`zr_system_new`] and
 * not yet freed.
 */
void zr_system_free(struct ZrSystem *system);

/**
 * Band energy of ring mode `k`, written through `out`.
 *
 * # Safety
 * `system` must be a live handle from [`zr_system_new`]; `out` must point to
 * writable memory for one `double`.
 */
enum ZrStatus zr_dispersion(const struct ZrSystem *system, size_t mode, double *out);

/**
 * Decay rate by the selected method at measurement interval `tau`
 * (ignored by the interval-independent methods).
 *
 * # Safety
 * `system` must be a live handle; `out` must point to one writable `double`.
 */
enum ZrStatus zr_rate(const struct ZrSystem *system,
                      enum ZrRateMethod method,
                      double tau,
                      double *out);

/**
 * Survival series for a single particle on the dot under `repetitions`
 * measurements spaced `tau` apart. `probabilities` may be null or point to
 * `repetitions + 1` doubles (index 0 is the initial unit probability).
 *
 * # Safety
 * `system` must be a live handle; `probabilities`, when non-null, must have
 * room for `probabilities_len` doubles with
 * `probabilities_len == repetitions + 1`.
 */
enum ZrStatus zr_measured_survival(const struct ZrSystem *system,
                                   double tau,
                                   size_t repetitions,
                                   double *probabilities,
                                   size_t probabilities_len,
                                   double *effective_rate);

/**
 * Survival series for an n-boson Fock stack on the dot.
 *
 * # Safety
 * Same contract as [`zr_measured_survival`].
 */
enum ZrStatus zr_fock_survival(const struct ZrSystem *system,
                               size_t occupation,
                               double tau,
                               size_t repetitions,
                               double *probabilities,
                               size_t probabilities_len,
                               double *effective_rate);

/**
 * Exact survival series for a coherent state of amplitude
 * `alpha_re + i alpha_im` on the dot.
 *
 * # Safety
 * Same contract as [`zr_measured_survival`].
 */
enum ZrStatus zr_coherent_survival(const struct ZrSystem *system,
                                   double alpha_re,
                                   double alpha_im,
                                   double tau,
                                   size_t repetitions,
                                   double *probabilities,
                                   size_t probabilities_len,
                                   double *effective_rate);

/**
 * Published coherent-state rate; `four_cos` selects the 4-cos coefficient
 * variant. Writes the literal rate and the exact oracle rate.
 *
 * # Safety
 * `system` must be a live handle; out-pointers, when non-null, must each
 * point to one writable `double`.
 */
enum ZrStatus zr_coherent_rate_paper(const struct ZrSystem *system,
                                     double alpha_re,
                                     double alpha_im,
                                     double tau,
                                     bool four_cos,
                                     double *out_paper,
                                     double *out_oracle);

/**
 * n-boson Fock rate on the flux-free ring; `paper_base` selects the literal
 * sinc-sum prefactor instead of the derived one.
 *
 * # Safety
 * `system` must be a live handle; `out` must point to one writable `double`.
 */
enum ZrStatus zr_fock_rate(const struct ZrSystem *system,
                           size_t occupation,
                           double tau,
                           bool paper_base,
                           double *out);

/**
 * Static, NUL-terminated description of a status code.
 */
const char *zr_status_message(enum ZrStatus status);

/**
 * Static, NUL-terminated crate version string.
 */
const char *zr_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ZENO_RING_H */
