#ifndef STOPLAT_H
#define STOPLAT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every call.
 */
typedef enum StoplatStatus {
  STOPLAT_STATUS_OK = 0,
  STOPLAT_STATUS_ERROR = 1,
  STOPLAT_STATUS_INVALID_INPUT = 2,
  STOPLAT_STATUS_NOT_FOUND_ON_GRID = 3,
  STOPLAT_STATUS_PRECONDITION_FAILED = 4,
  STOPLAT_STATUS_PANIC = 5,
} StoplatStatus;

/**
 * A parsed instance.
 */
typedef struct StoplatInstance StoplatInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses instance text. On success `*out` owns a new handle.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum StoplatStatus stoplat_instance_parse(const char *text, struct StoplatInstance **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `handle` must come from [`stoplat_instance_parse`] and not be freed twice.
 */
void stoplat_instance_free(struct StoplatInstance *handle);

/**
 * Canonical text of the instance.
 *
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
enum StoplatStatus stoplat_instance_emit(const struct StoplatInstance *handle, char **out);

/**
 * Number of outcomes, or 0 for a null handle.
 *
 * # Safety
 * `handle` must be null or a live handle.
 */
size_t stoplat_instance_outcomes(const struct StoplatInstance *handle);

/**
 * Whether the named time is a stopping (or, with `optional`, optional) time.
 *
 * # Safety
 * `handle` must be a live handle, `name` a valid string and `out` a valid
 * pointer.
 */
enum StoplatStatus stoplat_check_time(const struct StoplatInstance *handle,
                                      const char *name,
                                      bool optional,
                                      bool *out);

/**
 * Largest admitted minorant of the named time, as space-separated values.
 *
 * # Safety
 * As for [`stoplat_check_time`], with `out` receiving an owned string.
 */
enum StoplatStatus stoplat_minorant(const struct StoplatInstance *handle,
                                    const char *name,
                                    bool optional,
                                    char **out);

/**
 * Decomposes the `S` role over the `T1, T2, …` roles on the grid with the
 * given denominator. On success `*out` holds one line per part; on
 * `NOT_FOUND_ON_GRID` it holds the explored-state count and digest.
 *
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
enum StoplatStatus stoplat_decompose(const struct StoplatInstance *handle,
                                     int64_t grid_denominator,
                                     bool optional,
                                     char **out);

/**
 * Interpolates between the sets `A` and `B`: the pointwise join of `A`, or
 * with `cone` the least cone-order interpolant on the grid.
 *
 * # Safety
 * `handle` must be a live handle and `out` a valid pointer.
 */
enum StoplatStatus stoplat_interpolate(const struct StoplatInstance *handle,
                                       bool cone,
                                       int64_t grid_denominator,
                                       bool optional,
                                       char **out);

/**
 * Runs the hunter with default settings and writes the machine report.
 * `threads = 0` uses one thread per core; the report does not depend on it.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum StoplatStatus stoplat_hunt(uint64_t seed,
                                uint64_t instances,
                                uint32_t threads,
                                bool optional,
                                char **out);

/**
 * Releases a string returned by the library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void stoplat_string_free(char *s);

/**
 * Message for the last failed call on this thread; empty after a success.
 * Valid until the next call on the same thread.
 */
const char *stoplat_last_error(void);

/**
 * Library version, a static string.
 */
const char *stoplat_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* STOPLAT_H */
