#ifndef Q2FOURIER_H
#define Q2FOURIER_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum QfStatus {
  QF_STATUS_OK = 0,
  QF_STATUS_NULL_POINTER = 1,
  // Parameter outside the supported domain.
  QF_STATUS_DOMAIN = 2,
  QF_STATUS_NOT_CONVERGED = 3,
  // Required working precision exceeds the configured ceiling.
  QF_STATUS_CANCELLATION = 4,
  QF_STATUS_POLE = 5,
  // Buffer lengths or windows do not match, or q fails the strict
  // grid condition.
  QF_STATUS_GRID = 6,
  QF_STATUS_INVALID_ARGUMENT = 7,
  QF_STATUS_PANIC = 8,
} QfStatus;

// Opaque transform plan.
typedef struct QfPlan QfPlan;

typedef struct QfComplex {
  double re;
  double im;
} QfComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// `cos_α(x; q²)`.
//
// # Safety
// `out` must be null or valid for writes.
enum QfStatus qf_cos_alpha(double q, double alpha, struct QfComplex x, struct QfComplex *out);

// `sin_α(x; q²)`.
//
// # Safety
// `out` must be null or valid for writes.
enum QfStatus qf_sin_alpha(double q, double alpha, struct QfComplex x, struct QfComplex *out);

// `e_α(x; q²)`.
//
// # Safety
// `out` must be null or valid for writes.
enum QfStatus qf_exp_alpha(double q, double alpha, struct QfComplex x, struct QfComplex *out);

// The q-gamma function for real `z > 0`.
//
// # Safety
// `out` must be null or valid for writes.
enum QfStatus qf_q_gamma(double z, double q, double *out);

// The `q` in (0, 1) with `1 - q = q^(2m)`.
//
// # Safety
// `out` must be null or valid for writes.
enum QfStatus qf_solve_q(uint32_t m, double *out);

// Builds a transform plan for inputs on exponents `in_min..=in_max` and
// outputs on `out_min..=out_max`. Release it with [`qf_plan_free`].
//
// # Safety
// `out` must be null or valid for writes.
enum QfStatus qf_plan_new(double q,
                          double alpha,
                          int32_t in_min,
                          int32_t in_max,
                          int32_t out_min,
                          int32_t out_max,
                          bool strict_grid,
                          struct QfPlan **out);

// Releases a plan. Null is ignored.
//
// # Safety
// `plan` must be null or a pointer from [`qf_plan_new`] not yet freed.
void qf_plan_free(struct QfPlan *plan);

// The normalization constant of the plan's transform.
//
// # Safety
// `plan` must be null or live; `out` must be null or valid for writes.
enum QfStatus qf_plan_norm_constant(const struct QfPlan *plan, double *out);

// Forward transform. `pos[i]`, `neg[i]` are the samples at `±q^(in_min+i)`;
// results are written likewise for the output window.
//
// # Safety
// Input buffers must hold `len` readable values, output buffers `out_len`
// writable values; `plan` must be live.
enum QfStatus qf_plan_forward(const struct QfPlan *plan,
                              const struct QfComplex *pos,
                              const struct QfComplex *neg,
                              size_t len,
                              struct QfComplex *out_pos,
                              struct QfComplex *out_neg,
                              size_t out_len);

// Inverse transform from the output window back onto the input window.
//
// # Safety
// As for [`qf_plan_forward`], with the windows' roles swapped.
enum QfStatus qf_plan_inverse(const struct QfPlan *plan,
                              const struct QfComplex *pos,
                              const struct QfComplex *neg,
                              size_t len,
                              struct QfComplex *out_pos,
                              struct QfComplex *out_neg,
                              size_t out_len);

// Message for the last failed call on this thread; empty after success.
// Valid until the next call on the same thread.
const char *qf_last_error_message(void);

// Library version as a static string.
const char *qf_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* Q2FOURIER_H */
