#ifndef GTI_ASYM_H
#define GTI_ASYM_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GtiFamily {
  GTI_FAMILY_CI = 0,
  GTI_FAMILY_SI = 1,
  GTI_FAMILY_TI = 2,
  GTI_FAMILY_LOWER_CI = 3,
  GTI_FAMILY_LOWER_SI = 4,
  GTI_FAMILY_LOWER_TI = 5,
} GtiFamily;

typedef enum GtiStatus {
  GTI_STATUS_OK = 0,
  GTI_STATUS_NULL_POINTER = 1,
  /**
   * Argument outside the domain of the operation.
   */
  GTI_STATUS_DOMAIN = 2,
  /**
   * Quadrature, iteration or series failure.
   */
  GTI_STATUS_NUMERICAL = 3,
  GTI_STATUS_PANIC = 4,
} GtiStatus;

/**
 * Coefficient table handle.
 */
typedef struct GtiCoefficients GtiCoefficients;

/**
 * Quadrature oracle bound to one value of `a`, reusing panels across calls.
 */
typedef struct GtiOracle GtiOracle;

/**
 * `(re + i im) * exp(log_scale)`. `eta_bound` is NaN when no bound was
 * requested or none applies.
 */
typedef struct GtiValue {
  double re;
  double im;
  double log_scale;
  double eta_bound;
  bool cancellation_warning;
} GtiValue;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *gti_version(void);

/**
 * Copy the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t gti_last_error_message(char *buf, size_t len);

/**
 * Liouville-Green value of a family at `a theta`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum GtiStatus gti_eval(enum GtiFamily family,
                        double a,
                        double theta,
                        double alpha,
                        size_t order,
                        bool extended,
                        bool bound,
                        struct GtiValue *out);

/**
 * Lower (`upper == false`) or upper incomplete gamma function at `a z`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum GtiStatus gti_eval_gamma(bool upper,
                              double a,
                              double z_re,
                              double z_im,
                              size_t order,
                              bool extended,
                              bool bound,
                              struct GtiValue *out);

/**
 * The `m`-th positive zero in the scaled variable `theta`, assembled from
 * `k` terms of its uniform expansion.
 *
 * # Safety
 * `theta` must be null or valid for writes.
 */
enum GtiStatus gti_zero(enum GtiFamily family,
                        double a,
                        uint32_t m,
                        size_t k,
                        double alpha,
                        double *theta);

/**
 * Build the coefficient table through `order`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum GtiStatus gti_coefficients_new(size_t order, struct GtiCoefficients **out);

/**
 * # Safety
 * `table` must be null or come from [`gti_coefficients_new`], freed once.
 */
void gti_coefficients_free(struct GtiCoefficients *table);

/**
 * Real part `R_s(theta)` of the coefficient on the imaginary axis.
 *
 * # Safety
 * `table` must be null or live; `out` null or valid for writes.
 */
enum GtiStatus gti_coefficients_r(const struct GtiCoefficients *table,
                                  size_t s,
                                  double theta,
                                  double *out);

/**
 * Imaginary part `L_s(theta)` of the coefficient on the imaginary axis.
 *
 * # Safety
 * `table` must be null or live; `out` null or valid for writes.
 */
enum GtiStatus gti_coefficients_l(const struct GtiCoefficients *table,
                                  size_t s,
                                  double theta,
                                  double *out);

/**
 * `E_s(x)` for real `x` off the singular point.
 *
 * # Safety
 * `table` must be null or live; `out` null or valid for writes.
 */
enum GtiStatus gti_coefficients_e(const struct GtiCoefficients *table,
                                  size_t s,
                                  double x,
                                  double *out);

/**
 * Quadrature oracle for parameter `a`, sized for arguments up to `x_hint`.
 *
 * # Safety
 * `out` must be null or valid for writes.
 */
enum GtiStatus gti_oracle_new(double a, double x_hint, bool extended, struct GtiOracle **out);

/**
 * # Safety
 * `oracle` must be null or come from [`gti_oracle_new`], freed once.
 */
void gti_oracle_free(struct GtiOracle *oracle);

/**
 * Reference value of a family at `x` (unscaled argument).
 *
 * # Safety
 * `oracle` must be null or live and not used concurrently; `out` null or
 * valid for writes.
 */
enum GtiStatus gti_oracle_value(struct GtiOracle *oracle,
                                enum GtiFamily family,
                                double alpha,
                                double x,
                                double *out);

/**
 * Zero of a family in `theta` located by the oracle, starting from `theta0`.
 *
 * # Safety
 * As for [`gti_oracle_value`].
 */
enum GtiStatus gti_oracle_refine_zero(struct GtiOracle *oracle,
                                      enum GtiFamily family,
                                      double alpha,
                                      double theta0,
                                      double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GTI_ASYM_H */
