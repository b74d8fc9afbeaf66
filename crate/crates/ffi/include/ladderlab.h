#ifndef LADDERLAB_H
#define LADDERLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Values accepted by the `method` argument of the reverse-step functions.
 */
typedef enum LlReverseMethod {
  LL_REVERSE_METHOD_INCREMENT_SOLVE = 0,
  LL_REVERSE_METHOD_MAINTERM_INVERT = 1,
} LlReverseMethod;

/**
 * Outcome of a call.
 */
typedef enum LlStatus {
  LL_STATUS_OK = 0,
  LL_STATUS_NULL_POINTER = 1,
  LL_STATUS_INVALID_ARGUMENT = 2,
  LL_STATUS_DOMAIN = 3,
  LL_STATUS_BRANCH_LOSS = 4,
  LL_STATUS_BUDGET = 5,
  LL_STATUS_COVERAGE = 6,
  LL_STATUS_BRACKET = 7,
  LL_STATUS_ITERATION_DEPTH = 8,
  LL_STATUS_INDEX = 9,
  LL_STATUS_ADMISSIBILITY = 10,
  LL_STATUS_RANGE_CAP = 11,
  LL_STATUS_CONSISTENCY = 12,
  LL_STATUS_CONFIG = 13,
  LL_STATUS_CACHE = 14,
  LL_STATUS_IO = 15,
  LL_STATUS_PANIC = 16,
} LlStatus;

/**
 * Opaque ladder handle.
 */
typedef struct LlLadder LlLadder;

/**
 * Opaque phase-track handle.
 */
typedef struct LlPhaseTrack LlPhaseTrack;

/**
 * Plain-data mirror of the ladder configuration.
 */
typedef struct LlLadderConfig {
  double t0;
  double c0;
  size_t k_max;
  double tol;
  double quad_tol;
  double t_cap;
} LlLadderConfig;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *ll_version(void);

/**
 * Message for the most recent failure on this thread, or null if none.
 *
 * The pointer stays valid until the next failing call on the same thread or
 * until [`ll_clear_error`].
 */
const char *ll_last_error_message(void);

/**
 * Forget the stored error message of this thread.
 */
void ll_clear_error(void);

/**
 * θ(t).
 */
enum LlStatus ll_theta(double t, double *out);

/**
 * Hardy's Z(t).
 */
enum LlStatus ll_hardy_z(double t, double *out);

/**
 * |ζ(1/2 + it)|².
 */
enum LlStatus ll_zeta_mod_sq(double t, double *out);

/**
 * ∫ₐᵇ Z²(t) dt with relative tolerance `tol`. `err_out` may be null.
 */
enum LlStatus ll_hl_integral(double a, double b, double tol, double *value_out, double *err_out);

/**
 * (xⁿ + yⁿ)/zⁿ for positive integers, computed exactly before rounding.
 */
enum LlStatus ll_fermat_rational(uint64_t x, uint64_t y, uint64_t z, uint32_t n, double *out);

/**
 * F₁(x; τ) on the default ladder.
 */
enum LlStatus ll_f1_estimate(double x, double tau, double *out);

/**
 * Default ladder configuration.
 */
struct LlLadderConfig ll_ladder_config_default(void);

/**
 * Create a ladder. `config` may be null for the defaults.
 */
enum LlStatus ll_ladder_new(const struct LlLadderConfig *config, struct LlLadder **out);

/**
 * Release a ladder; null is ignored.
 */
void ll_ladder_free(struct LlLadder *ladder);

/**
 * J(t) as seen by the ladder's engine.
 */
enum LlStatus ll_ladder_j(const struct LlLadder *ladder, double t, double *out);

/**
 * φ₁(t).
 */
enum LlStatus ll_ladder_phi1(const struct LlLadder *ladder, double t, double *out);

/**
 * φ₁ applied `k` times.
 */
enum LlStatus ll_ladder_phi1_iter(const struct LlLadder *ladder, double t, size_t k, double *out);

/**
 * Z̃²(t).
 */
enum LlStatus ll_ladder_tilde_z_sq(const struct LlLadder *ladder, double t, double *out);

/**
 * One reverse step from `t`; `method` is an [`LlReverseMethod`] value.
 */
enum LlStatus ll_ladder_reverse_step(const struct LlLadder *ladder,
                                     double t,
                                     uint32_t method,
                                     double *out);

/**
 * The reverse points T¹..Tᵏ of `t`, written to `points[0..k]`.
 *
 * `points` must hold at least `capacity` values and `capacity >= k`.
 */
enum LlStatus ll_ladder_chain(const struct LlLadder *ladder,
                              double t,
                              size_t k,
                              uint32_t method,
                              double *points,
                              size_t capacity);

/**
 * Track S and S₁ over [t_start, t_end].
 */
enum LlStatus ll_phase_track_new(double t_start,
                                 double t_end,
                                 double tol,
                                 struct LlPhaseTrack **out);

/**
 * Release a phase track; null is ignored.
 */
void ll_phase_track_free(struct LlPhaseTrack *track);

/**
 * The interval covered by a track.
 */
enum LlStatus ll_phase_track_range(const struct LlPhaseTrack *track,
                                   double *lo_out,
                                   double *hi_out);

/**
 * S(t).
 */
enum LlStatus ll_phase_track_s(const struct LlPhaseTrack *track, double t, double *out);

/**
 * S₁(t).
 */
enum LlStatus ll_phase_track_s1(const struct LlPhaseTrack *track, double t, double *out);

/**
 * Number of zeros with ordinate in (0, t].
 */
enum LlStatus ll_phase_track_zero_count(const struct LlPhaseTrack *track, double t, uint64_t *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LADDERLAB_H */
