#ifndef COVERTOWER_H
#define COVERTOWER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CtStatus {
  CT_STATUS_OK = 0,
  CT_STATUS_NULL_ARGUMENT = 1,
  CT_STATUS_INVALID_UTF8 = 2,
  CT_STATUS_CONFIG = 3,
  CT_STATUS_OUT_OF_RANGE = 4,
  CT_STATUS_LIMIT_EXCEEDED = 5,
  CT_STATUS_HORIZON_EXHAUSTED = 6,
  /**
   * The searched-for time does not exist within the horizon.
   */
  CT_STATUS_NOT_FOUND = 7,
  CT_STATUS_PARSE = 8,
  CT_STATUS_INVALID = 9,
  CT_STATUS_PANIC = 10,
} CtStatus;

/**
 * Opaque tower handle.
 */
typedef struct CtTower CtTower;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Owned by the
 * library; valid until the next call on this thread.
 */
const char *ct_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void ct_string_free(char *s);

/**
 * Default tower of the given depth.
 *
 * # Safety
 * `out` must be valid for writes.
 */
enum CtStatus ct_tower_new(size_t depth, struct CtTower **out);

/**
 * Tower from TOML config text.
 *
 * # Safety
 * `config` must be a nul-terminated string; `out` must be valid for writes.
 */
enum CtStatus ct_tower_from_config(const char *config, struct CtTower **out);

/**
 * Releases a tower. Null is ignored.
 *
 * # Safety
 * `t` must come from `ct_tower_new` or `ct_tower_from_config` and not have
 * been freed.
 */
void ct_tower_free(struct CtTower *t);

/**
 * Caps explicit expansions (materialized levels, orbit windows).
 *
 * # Safety
 * `t` must be a live tower handle.
 */
enum CtStatus ct_tower_set_limit(struct CtTower *t, uint64_t limit);

/**
 * # Safety
 * `t` must be a live tower handle; `out` must be valid for writes.
 */
enum CtStatus ct_tower_depth(const struct CtTower *t, size_t *out);

/**
 * `l(n,i)` in decimal.
 *
 * # Safety
 * `t` must be a live tower handle; `out` must be valid for writes.
 */
enum CtStatus ct_circuit_length(const struct CtTower *t, size_t n, size_t i, char **out);

/**
 * Number of vertices at level `n`, in decimal.
 *
 * # Safety
 * `t` must be a live tower handle; `out` must be valid for writes.
 */
enum CtStatus ct_vertex_count(const struct CtTower *t, size_t n, char **out);

/**
 * Image at level `m` of the anchor vertex `"D:i:j"`, as `"m:i:j"`, or
 * `"m:0:0"` for the base vertex.
 *
 * # Safety
 * `t` must be a live tower handle; `anchor` a nul-terminated string; `out`
 * valid for writes.
 */
enum CtStatus ct_project_vertex(const struct CtTower *t, const char *anchor, size_t m, char **out);

/**
 * Steps from the anchor vertex to the base.
 *
 * # Safety
 * `t` must be a live tower handle; `anchor` a nul-terminated string; `out`
 * valid for writes.
 */
enum CtStatus ct_remn(const struct CtTower *t, const char *anchor, char **out);

/**
 * Level-`n` orbit trace as CSV. `steps` is decimal; null means the whole
 * horizon of the anchor.
 *
 * # Safety
 * `t` must be a live tower handle; `anchor` a nul-terminated string;
 * `steps` null or nul-terminated; `out` valid for writes.
 */
enum CtStatus ct_orbit_csv(const struct CtTower *t,
                           const char *anchor,
                           size_t n,
                           const char *steps,
                           char **out);

/**
 * First time the orbit's level-`n` coordinate is the base vertex.
 *
 * # Safety
 * `t` must be a live tower handle; `anchor` a nul-terminated string; `out`
 * valid for writes.
 */
enum CtStatus ct_first_meet_base(const struct CtTower *t, const char *anchor, size_t n, char **out);

/**
 * First time both level-`n` coordinates are the base vertex.
 * `CT_STATUS_NOT_FOUND` when there is none within the common horizon.
 *
 * # Safety
 * `t` must be a live tower handle; `x`, `y` nul-terminated strings; `out`
 * valid for writes.
 */
enum CtStatus ct_joint_meet(const struct CtTower *t,
                            const char *x,
                            const char *y,
                            size_t n,
                            char **out);

/**
 * One-line pair report over the common horizon.
 *
 * # Safety
 * `t` must be a live tower handle; `x`, `y` nul-terminated strings; `out`
 * valid for writes.
 */
enum CtStatus ct_pair_report(const struct CtTower *t,
                             const char *x,
                             const char *y,
                             size_t n,
                             char **out);

/**
 * DOT rendering of level `n`.
 *
 * # Safety
 * `t` must be a live tower handle; `out` valid for writes.
 */
enum CtStatus ct_level_dot(const struct CtTower *t, size_t n, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* COVERTOWER_H */
