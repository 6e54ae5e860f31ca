#ifndef HOTSPOT_H
#define HOTSPOT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum HsStatus {
  HS_STATUS_OK = 0,
  HS_STATUS_NULL_POINTER = 1,
  HS_STATUS_INVALID_TRAJECTORY = 2,
  HS_STATUS_INVALID_SIDE = 3,
  HS_STATUS_INVALID_WINDOW = 4,
  HS_STATUS_INVALID_RANGE = 5,
  HS_STATUS_PARSE = 6,
  HS_STATUS_IO = 7,
  HS_STATUS_INTERNAL = 8,
} HsStatus;

/**
 * Opaque index handle.
 */
typedef struct HsIndex HsIndex;

/**
 * A square `[square_x, square_x + side] × [square_y, square_y + side]`
 * containing the trajectory over `[start, end]`; `score = end - start`.
 */
typedef struct HsWitness {
  double square_x;
  double square_y;
  double side;
  double start;
  double end;
  double score;
} HsWitness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds an index from `n` vertices given as three parallel arrays.
 *
 * # Safety
 * `ts`, `xs` and `ys` must each point to `n` readable doubles, and `out`
 * must be a valid pointer to an `HsIndex*`.
 */
enum HsStatus hs_index_build(const double *ts,
                             const double *xs,
                             const double *ys,
                             size_t n,
                             double side,
                             struct HsIndex **out);

/**
 * Builds an index from a `t,x,y` CSV file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` a valid pointer to an
 * `HsIndex*`.
 */
enum HsStatus hs_index_from_csv(const char *path, double side, struct HsIndex **out);

/**
 * Releases an index. Null is ignored.
 *
 * # Safety
 * `index` must come from `hs_index_build` or `hs_index_from_csv` and must
 * not be used afterwards.
 */
void hs_index_free(struct HsIndex *index);

/**
 * Number of trajectory vertices, or 0 for a null handle.
 *
 * # Safety
 * `index` must be null or a live handle.
 */
size_t hs_index_len(const struct HsIndex *index);

/**
 * Approximate hotspot of the window `[x, y]` (clamped to the trajectory).
 *
 * # Safety
 * `index` must be a live handle and `out` a valid `HsWitness` pointer.
 */
enum HsStatus hs_query(const struct HsIndex *index, double x, double y, struct HsWitness *out);

/**
 * Approximate hotspot between vertices `i` and `j` (inclusive).
 *
 * # Safety
 * `index` must be a live handle and `out` a valid `HsWitness` pointer.
 */
enum HsStatus hs_query_vertex_aligned(const struct HsIndex *index,
                                      size_t i,
                                      size_t j,
                                      struct HsWitness *out);

/**
 * Approximate hotspot of the whole trajectory.
 *
 * # Safety
 * `index` must be a live handle and `out` a valid `HsWitness` pointer.
 */
enum HsStatus hs_whole_trajectory(const struct HsIndex *index, struct HsWitness *out);

/**
 * Re-checks a witness against the window `[x, y]`: writes 1 to `valid` if
 * the interval lies in the window and the trajectory over it stays in the
 * square, 0 otherwise.
 *
 * # Safety
 * `index` must be a live handle; `witness` and `valid` must be valid pointers.
 */
enum HsStatus hs_verify_witness(const struct HsIndex *index,
                                double x,
                                double y,
                                const struct HsWitness *witness,
                                int32_t *valid);

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *hs_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *hs_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HOTSPOT_H */
