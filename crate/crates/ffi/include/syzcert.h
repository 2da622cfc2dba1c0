#ifndef SYZCERT_H
#define SYZCERT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  SYZ_STATUS_OK = 0,
  SYZ_STATUS_INVALID_ARGUMENT = 1,
  SYZ_STATUS_NULL_POINTER = 2,
  SYZ_STATUS_CASE_NOT_APPLICABLE = 3,
  SYZ_STATUS_ENUMERATION_OVERFLOW = 4,
  SYZ_STATUS_SCAN_LIMIT = 5,
  SYZ_STATUS_INTERNAL = 6,
} SyzStatus;

/**
 * Matched case; `None` means no case hypotheses hold.
 */
typedef enum {
  SYZ_CASE_NONE = 0,
  SYZ_CASE_P2 = 1,
  SYZ_CASE_TWO_DIGIT = 2,
  SYZ_CASE_LOW_DEGREE = 3,
  SYZ_CASE_SMALL_P = 4,
  SYZ_CASE_LARGE_P = 5,
  SYZ_CASE_REMARK_CASE = 6,
} SyzCase;

/**
 * Opaque certificate handle.
 */
typedef struct SyzCertificate SyzCertificate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Classifies `(n, p, d)` by case hypotheses alone.
 *
 * # Safety
 * `out_case` must be null or valid for writes.
 */
SyzStatus syz_classify(uint64_t n, uint64_t p, uint64_t d, SyzCase *out_case);

/**
 * Builds the certificate for `(n, p, d)`.
 *
 * # Safety
 * `out` must be null or valid for writes. The handle written there must be
 * released with `syz_certificate_free`.
 */
SyzStatus syz_certify(uint64_t n, uint64_t p, uint64_t d, SyzCertificate **out);

/**
 * Writes whether the verdict is stable.
 *
 * # Safety
 * `cert` must come from `syz_certify` and not be freed; `out_stable` must be
 * valid for writes.
 */
SyzStatus syz_certificate_verdict(const SyzCertificate *cert, bool *out_stable);

/**
 * Writes the matched case (`SYZ_CASE_NONE` when no hypotheses hold).
 *
 * # Safety
 * As for `syz_certificate_verdict`.
 */
SyzStatus syz_certificate_case(const SyzCertificate *cert, SyzCase *out_case);

/**
 * Writes whether every obligation holds.
 *
 * # Safety
 * As for `syz_certificate_verdict`.
 */
SyzStatus syz_certificate_all_hold(const SyzCertificate *cert, bool *out_all_hold);

/**
 * # Safety
 * As for `syz_certificate_verdict`.
 */
SyzStatus syz_certificate_obligation_count(const SyzCertificate *cert, size_t *out_count);

/**
 * Serializes the certificate to JSON.
 *
 * # Safety
 * As for `syz_certificate_verdict`; the string written to `out_json` must be
 * released with `syz_string_free`.
 */
SyzStatus syz_certificate_to_json(const SyzCertificate *cert, char **out_json);

/**
 * # Safety
 * `cert` must be null or a handle from `syz_certify` not yet freed.
 */
void syz_certificate_free(SyzCertificate *cert);

/**
 * # Safety
 * `s` must be null or a string returned by this library not yet freed.
 */
void syz_string_free(char *s);

/**
 * Writes `{"lower": "a/b", "upper": "c/d"}` for the dual's `mu_max`.
 *
 * # Safety
 * `out_json` must be valid for writes; release the result with `syz_string_free`.
 */
SyzStatus syz_mu_max_bounds(uint64_t n, uint64_t d, char **out_json);

/**
 * Restriction-degree threshold scan. `disc` is a rational such as `"2"` or `"7/2"`.
 *
 * # Safety
 * `disc` must be a valid nul-terminated string; the out-pointers must be
 * valid for writes.
 */
SyzStatus syz_threshold(uint64_t n,
                        uint64_t r,
                        uint64_t hn,
                        const char *disc,
                        uint64_t horizon,
                        uint64_t *out_first_pass,
                        uint64_t *out_stable_from);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next call into this library on the same thread.
 */
const char *syz_last_error_message(void);

/**
 * Library version as a static string.
 */
const char *syz_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SYZCERT_H */
