#ifndef LORENTZ_APPROX_H
#define LORENTZ_APPROX_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum LaStatus {
  LA_STATUS_OK = 0,
  LA_STATUS_NULL_POINTER = 1,
  LA_STATUS_DOMAIN = 2,
  LA_STATUS_INVALID = 3,
  LA_STATUS_PRECONDITION = 4,
  LA_STATUS_PARSE = 5,
  LA_STATUS_IO = 6,
  LA_STATUS_PANIC = 7,
} LaStatus;

/**
 * Nonincreasing rearrangement: constant pieces plus an optional power tail.
 */
typedef struct LaProfile LaProfile;

/**
 * Finitely many disjoint atoms `value` on `[a, b)`.
 */
typedef struct LaStepFunction LaStepFunction;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copy of the last error message on this thread, or NULL. Free with
 * [`la_string_free`].
 */
char *la_last_error_message(void);

/**
 * Releases a string returned by this library. NULL is ignored.
 */
void la_string_free(char *s);

/**
 * Builds a profile from `n` pieces `[t0[i], t1[i]) -> v[i]`. The tail
 * `c·t^{-gamma}` on `[tail_t, ∞)` is used when `has_tail` is nonzero.
 */
enum LaStatus la_profile_new(const double *t0,
                             const double *t1,
                             const double *v,
                             size_t n,
                             int32_t has_tail,
                             double tail_t,
                             double tail_c,
                             double tail_gamma,
                             struct LaProfile **out);

/**
 * Parses `{"pieces":[{"t0":..,"t1":..,"v":..}],"tail":{"T":..,"c":..,"gamma":..}}`.
 */
enum LaStatus la_profile_from_json(const char *json, struct LaProfile **out);

/**
 * JSON form of the profile. Free with [`la_string_free`]; NULL on a null handle.
 */
char *la_profile_to_json(const struct LaProfile *profile);

void la_profile_free(struct LaProfile *profile);

/**
 * Builds a step function from `n` atoms `[a[i], b[i]) -> v[i]`.
 */
enum LaStatus la_step_new(const double *a,
                          const double *b,
                          const double *v,
                          size_t n,
                          struct LaStepFunction **out);

/**
 * Parses `{"atoms":[{"a":..,"b":..,"v":..}]}`.
 */
enum LaStatus la_step_from_json(const char *json, struct LaStepFunction **out);

/**
 * JSON form of the step function. Free with [`la_string_free`].
 */
char *la_step_to_json(const struct LaStepFunction *step);

void la_step_free(struct LaStepFunction *step);

/**
 * Number of atoms, 0 for a null handle.
 */
size_t la_step_len(const struct LaStepFunction *step);

/**
 * Decreasing rearrangement of a step function, as a new profile handle.
 */
enum LaStatus la_step_rearrange(const struct LaStepFunction *step, struct LaProfile **out);

/**
 * Best approximant from functions of support measure at most `sigma`, and
 * its `L_p` error.
 */
enum LaStatus la_best_approx(const struct LaStepFunction *step,
                             double sigma,
                             double p,
                             struct LaStepFunction **out_approximant,
                             double *out_error);

/**
 * `E_sigma(f)_p`.
 */
enum LaStatus la_approx_error(const struct LaProfile *profile, double sigma, double p, double *out);

enum LaStatus la_lp_norm(const struct LaProfile *profile, double p, double *out);

enum LaStatus la_weak_lorentz_norm(const struct LaProfile *profile, double p, double *out);

/**
 * `q = INFINITY` gives the weak norm.
 */
enum LaStatus la_lorentz_norm(const struct LaProfile *profile, double p, double q, double *out);

/**
 * `A^alpha_{p,q}` quasinorm with the default quadrature tolerance.
 */
enum LaStatus la_approx_space_norm(const struct LaProfile *profile,
                                   double p,
                                   double q,
                                   double alpha,
                                   double *out);

/**
 * Bracket `[lower, upper]` for `K(f, t; L_p, L_{p1,∞})`, `1/p1 = alpha + 1/p`.
 */
enum LaStatus la_k_bounds(const struct LaProfile *profile,
                          double t,
                          double p,
                          double alpha,
                          double *out_lower,
                          double *out_upper);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LORENTZ_APPROX_H */
