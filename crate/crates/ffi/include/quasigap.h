#ifndef QUASIGAP_H
#define QUASIGAP_H

/* Generated by cbindgen; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum QgStatus {
  QG_STATUS_OK = 0,
  QG_STATUS_NULL_ARGUMENT = 1,
  QG_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed configuration, literal or parameter.
   */
  QG_STATUS_CONFIG = 3,
  /**
   * A lattice point on the window boundary or an undecidable comparison.
   */
  QG_STATUS_SINGULAR = 4,
  /**
   * Any other library error.
   */
  QG_STATUS_FAILED = 5,
  QG_STATUS_PANIC = 6,
} QgStatus;

/**
 * Opaque handle to a built scheme.
 */
typedef struct QgScheme QgScheme;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread, or null. Valid until the next
 * failing call on the same thread.
 */
const char *qg_last_error(void);

/**
 * Builds a scheme from its JSON configuration.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum QgStatus qg_scheme_from_json(const char *json, struct QgScheme **out);

/**
 * # Safety
 * `s` must come from [`qg_scheme_from_json`] and not be freed twice. Null is ignored.
 */
void qg_scheme_free(struct QgScheme *s);

/**
 * Number of lattice lifts per physical lattice point (`|det B|`).
 *
 * # Safety
 * `s` must be a live handle and `out` a valid pointer.
 */
enum QgStatus qg_scheme_index(const struct QgScheme *s, uint64_t *out);

/**
 * Whether the lattice point `n` (length `k`) is accepted by the window.
 *
 * # Safety
 * `n` must point to `len` integers and `out` be a valid pointer.
 */
enum QgStatus qg_scheme_accept(const struct QgScheme *s, const int64_t *n, size_t len, bool *out);

/**
 * Analytic spectrum at radius `r` for the closed unit cube, as a CSV table
 * (header plus one row). Release the result with [`qg_string_free`].
 *
 * # Safety
 * `r` must be a nul-terminated literal and `out` a valid pointer.
 */
enum QgStatus qg_spectrum_csv(const struct QgScheme *s,
                              const char *r,
                              uint8_t patch_type,
                              char **out);

/**
 * # Safety
 * `s` must come from this library. Null is ignored.
 */
void qg_string_free(char *s);

/**
 * Number of distinct gap lengths left by `{n alpha mod 1 : 1 <= n <= N}`.
 *
 * # Safety
 * `alpha` must be a nul-terminated literal and `out` a valid pointer.
 */
enum QgStatus qg_steinhaus_gap_count(const char *alpha, uint64_t n, uint32_t *out);

/**
 * Library version, static storage.
 */
const char *qg_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUASIGAP_H */
