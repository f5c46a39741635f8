#ifndef IRRSUM_H
#define IRRSUM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stdint.h>
#include <stddef.h>

/**
 * Result of every fallible call.
 */
typedef enum IrrsumStatus {
  IRRSUM_STATUS_OK = 0,
  IRRSUM_STATUS_NULL_POINTER = 1,
  IRRSUM_STATUS_INVALID_ARGUMENT = 2,
  IRRSUM_STATUS_UNSUPPORTED_EXPONENT = 3,
  IRRSUM_STATUS_DIVISION_BY_ZERO = 4,
  IRRSUM_STATUS_RECONSTRUCTION_FAILED = 5,
  IRRSUM_STATUS_INTERNAL = 6,
  IRRSUM_STATUS_INSUFFICIENT_PRECISION = 7,
} IrrsumStatus;

/**
 * A finite field `F_q`.
 */
typedef struct IrrsumField IrrsumField;

/**
 * A reduced element of `F_q(T)`.
 */
typedef struct IrrsumRatFun IrrsumRatFun;

/**
 * A truncated Laurent series in `u = 1/T`.
 */
typedef struct IrrsumSeries IrrsumSeries;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the last failure on this thread; empty after a
 * success. Valid until the next `irrsum_*` call on the same thread.
 */
const char *irrsum_last_error_message(void);

/**
 * Creates `F_q` for a prime power `q`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage.
 */
enum IrrsumStatus irrsum_field_new(uint64_t q, struct IrrsumField **out);

/**
 * # Safety
 * `field` must be null or a handle from `irrsum_field_new` not yet freed.
 */
void irrsum_field_free(struct IrrsumField *field);

/**
 * Field order `q`, or 0 for a null handle.
 *
 * # Safety
 * `field` must be null or a live field handle.
 */
uint64_t irrsum_field_order(const struct IrrsumField *field);

/**
 * Exact sum of `G_p(1/P^k)` over monic irreducible `P`; requires `(q-1) | k`.
 *
 * # Safety
 * `field` must be a live field handle and `out` valid for writing.
 */
enum IrrsumStatus irrsum_exact_prime_sum(const struct IrrsumField *field,
                                         uint64_t k,
                                         struct IrrsumRatFun **out);

/**
 * Exact sum of `G_p(1/P^k)` over all irreducible `P`, monic or not.
 *
 * # Safety
 * `field` must be a live field handle and `out` valid for writing.
 */
enum IrrsumStatus irrsum_exact_all_prime_sum(const struct IrrsumField *field,
                                             uint64_t k,
                                             struct IrrsumRatFun **out);

/**
 * Closed form for small `k/(q-1)`. When no closed form applies, `*out` is
 * set to null and the call still succeeds.
 *
 * # Safety
 * `field` must be a live field handle and `out` valid for writing.
 */
enum IrrsumStatus irrsum_closed_form(const struct IrrsumField *field,
                                     uint64_t k,
                                     struct IrrsumRatFun **out);

/**
 * Truncated sum over irreducibles of degree at most `max_degree`, exact
 * through `u^(k(max_degree+1) - 1)`.
 *
 * # Safety
 * `field` must be a live field handle and `out` valid for writing.
 */
enum IrrsumStatus irrsum_numeric_prime_sum(const struct IrrsumField *field,
                                           uint64_t k,
                                           uint32_t max_degree,
                                           bool monic_only,
                                           struct IrrsumSeries **out);

/**
 * Truncated `sum 1/A^k` over monic `A` of degree at most `max_degree`.
 *
 * # Safety
 * `field` must be a live field handle and `out` valid for writing.
 */
enum IrrsumStatus irrsum_numeric_zeta(const struct IrrsumField *field,
                                      uint64_t k,
                                      uint32_t max_degree,
                                      struct IrrsumSeries **out);

/**
 * Rational function with numerator and denominator degrees bounded by
 * `num_deg` and `den_deg` whose expansion matches `series`.
 *
 * # Safety
 * `series` must be a live series handle and `out` valid for writing.
 */
enum IrrsumStatus irrsum_pade_reconstruct(const struct IrrsumSeries *series,
                                          size_t num_deg,
                                          size_t den_deg,
                                          struct IrrsumRatFun **out);

/**
 * Verification report as JSON. `*matches` receives whether the exact value
 * agrees with the truncated sum; it may be null.
 *
 * # Safety
 * `field` must be a live field handle, `out` valid for writing and
 * `matches` null or valid for writing.
 */
enum IrrsumStatus irrsum_verify_json(const struct IrrsumField *field,
                                     uint64_t k,
                                     uint32_t max_degree,
                                     bool *matches,
                                     char **out);

/**
 * Number of `p`-tuples of nonnegative integers with sum `r` and minimum 0.
 *
 * # Safety
 * `out` must be valid for writing.
 */
enum IrrsumStatus irrsum_psi_count(uint32_t p, uint32_t r, uint64_t *out);

/**
 * Text form, e.g. `(1)/(T^4+T^2)`.
 *
 * # Safety
 * `r` must be a live handle and `out` valid for writing.
 */
enum IrrsumStatus irrsum_ratfun_to_string(const struct IrrsumRatFun *r, char **out);

/**
 * JSON form `{num, den}`.
 *
 * # Safety
 * `r` must be a live handle and `out` valid for writing.
 */
enum IrrsumStatus irrsum_ratfun_to_json(const struct IrrsumRatFun *r, char **out);

/**
 * Parses the JSON form produced by `irrsum_ratfun_to_json`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` valid for writing.
 */
enum IrrsumStatus irrsum_ratfun_from_json(const char *json, struct IrrsumRatFun **out);

/**
 * Whether `r` is zero; false for a null handle.
 *
 * # Safety
 * `r` must be null or a live handle.
 */
bool irrsum_ratfun_is_zero(const struct IrrsumRatFun *r);

/**
 * # Safety
 * `r` must be null or a handle not yet freed.
 */
void irrsum_ratfun_free(struct IrrsumRatFun *r);

/**
 * Text form, e.g. `u^4 + u^6 + O(u^8)`.
 *
 * # Safety
 * `s` must be a live handle and `out` valid for writing.
 */
enum IrrsumStatus irrsum_series_to_string(const struct IrrsumSeries *s, char **out);

/**
 * JSON form `{field, v, N, coeffs}`.
 *
 * # Safety
 * `s` must be a live handle and `out` valid for writing.
 */
enum IrrsumStatus irrsum_series_to_json(const struct IrrsumSeries *s, char **out);

/**
 * Absolute precision `N`: coefficients below `u^N` are exact. Returns -1
 * for a null handle.
 *
 * # Safety
 * `s` must be null or a live handle.
 */
int64_t irrsum_series_precision(const struct IrrsumSeries *s);

/**
 * # Safety
 * `s` must be null or a handle not yet freed.
 */
void irrsum_series_free(struct IrrsumSeries *s);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void irrsum_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* IRRSUM_H */
