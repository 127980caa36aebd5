#ifndef POLYNUM_H
#define POLYNUM_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes shared by every call.
 */
typedef enum PolynumStatus {
  POLYNUM_STATUS_OK = 0,
  POLYNUM_STATUS_NULL_POINTER = 1,
  POLYNUM_STATUS_INVALID_INPUT = 2,
  /**
   * The requested operation failed for mathematical reasons (cycle,
   * step cap, non-convergent roots, ...).
   */
  POLYNUM_STATUS_DOMAIN_ERROR = 3,
  POLYNUM_STATUS_BUFFER_TOO_SMALL = 4,
  /**
   * A value does not fit in 64 bits.
   */
  POLYNUM_STATUS_OVERFLOW = 5,
  /**
   * Work estimate exceeded the configured budget.
   */
  POLYNUM_STATUS_BUDGET = 6,
  POLYNUM_STATUS_PANIC = 7,
} PolynumStatus;

typedef enum PolynumVerdict {
  POLYNUM_VERDICT_YES = 0,
  POLYNUM_VERDICT_NO = 1,
  POLYNUM_VERDICT_INCONCLUSIVE = 2,
} PolynumVerdict;

/**
 * Opaque number system handle.
 */
typedef struct PolynumSystem PolynumSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a number system from ascending modulus coefficients (monic,
 * `poly_len = degree + 1`) and a digit set.
 *
 * # Safety
 * `poly` and `digits` must point to `poly_len` and `digits_len` readable
 * values; `out` must be a valid pointer.
 */
enum PolynumStatus polynum_system_new(const int64_t *poly,
                                      uintptr_t poly_len,
                                      const int64_t *digits,
                                      uintptr_t digits_len,
                                      struct PolynumSystem **out);

/**
 * Releases a handle; null is ignored.
 *
 * # Safety
 * `system` must come from [`polynum_system_new`] and not be used afterwards.
 */
void polynum_system_free(struct PolynumSystem *system);

/**
 * Degree `n` of the modulus, or 0 for a null handle.
 *
 * # Safety
 * `system` must be null or a live handle.
 */
uintptr_t polynum_system_degree(const struct PolynumSystem *system);

/**
 * Decides whether the handle's pair is a number system.
 *
 * # Safety
 * `system` must be a live handle and `verdict` a valid pointer.
 */
enum PolynumStatus polynum_verify(const struct PolynumSystem *system, enum PolynumVerdict *verdict);

/**
 * Digit expansion of the element with ascending coefficients `element`.
 * Writes up to `capacity` digits and always stores the full length in
 * `out_len`; returns `BufferTooSmall` if `capacity` is insufficient.
 *
 * # Safety
 * Pointers must be valid for the stated lengths; `out_digits` may be null
 * only when `capacity` is 0.
 */
enum PolynumStatus polynum_expand(const struct PolynumSystem *system,
                                  const int64_t *element,
                                  uintptr_t element_len,
                                  int64_t *out_digits,
                                  uintptr_t capacity,
                                  uintptr_t *out_len);

/**
 * Evaluates a digit string; writes the `n` canonical coefficients.
 *
 * # Safety
 * `digits` must hold `digits_len` values and `out_coeffs` room for
 * `polynum_system_degree(system)` values.
 */
enum PolynumStatus polynum_evaluate(const struct PolynumSystem *system,
                                    const int64_t *digits,
                                    uintptr_t digits_len,
                                    int64_t *out_coeffs);

/**
 * `#R(T)` and `#R(T)/T^n`.
 *
 * # Safety
 * `system` must be a live handle; output pointers must be valid.
 */
enum PolynumStatus polynum_count_region(const struct PolynumSystem *system,
                                        double t,
                                        uint64_t *out_count,
                                        double *out_normalized);

/**
 * Message for the most recent failure on this thread (empty after a
 * success). Valid until the next call on the same thread.
 */
const char *polynum_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *polynum_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYNUM_H */
