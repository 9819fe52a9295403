#ifndef LOCALITY_FORGE_H
#define LOCALITY_FORGE_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Undefined product marker.
 */
#define LF_NONE UINT32_MAX

typedef enum LfStatus {
  LF_STATUS_OK = 0,
  LF_STATUS_NULL = 1,
  LF_STATUS_PARSE = 2,
  LF_STATUS_DOMAIN = 3,
  LF_STATUS_RESOURCE = 4,
  LF_STATUS_INTERNAL = 5,
  LF_STATUS_PANIC = 6,
} LfStatus;

/**
 * A finite permutation group.
 */
typedef struct LfGroup LfGroup;

/**
 * A locality (L, Δ, S).
 */
typedef struct LfLocality LfLocality;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *lf_last_error(void);

/**
 * Parses a perm-group.v1 record.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LfStatus lf_group_from_json(const char *json, struct LfGroup **out);

/**
 * # Safety
 * `g` must be null or a handle from `lf_group_from_json`, not yet freed.
 */
void lf_group_free(struct LfGroup *g);

/**
 * # Safety
 * `g` must be a live group handle and `out` a valid pointer.
 */
enum LfStatus lf_group_order(const struct LfGroup *g, size_t *out);

/**
 * The classification.v1 report of the group at `p`. Free the string with
 * `lf_string_free`.
 *
 * # Safety
 * `g` must be a live group handle and `out` a valid pointer.
 */
enum LfStatus lf_classify_json(const struct LfGroup *g, uint32_t p, uint64_t seed, char **out);

/**
 * The transporter locality of the group on an object set given by a delta
 * spec (`cr-closure`, `centric`, `quasicentric`, `subcentric`, `all` or an
 * explicit JSON list).
 *
 * # Safety
 * `g` must be a live group handle, `delta` a NUL-terminated string and `out`
 * a valid pointer.
 */
enum LfStatus lf_transporter(const struct LfGroup *g,
                             uint32_t p,
                             const char *delta,
                             struct LfLocality **out);

/**
 * Expands the transporter locality on the closure of F^cr to the subcentric
 * subgroups. Fails with `Domain` if that locality is not proper.
 *
 * # Safety
 * `g` must be a live group handle and `out` a valid pointer.
 */
enum LfStatus lf_subcentric_closure(const struct LfGroup *g, uint32_t p, struct LfLocality **out);

/**
 * Parses a locality.v1 record.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum LfStatus lf_locality_from_json(const char *json, struct LfLocality **out);

/**
 * Serializes to locality.v1. Free the string with `lf_string_free`.
 *
 * # Safety
 * `l` must be a live locality handle and `out` a valid pointer.
 */
enum LfStatus lf_locality_to_json(const struct LfLocality *l, char **out);

/**
 * # Safety
 * `l` must be null or a locality handle not yet freed.
 */
void lf_locality_free(struct LfLocality *l);

/**
 * # Safety
 * `l` must be a live locality handle and `out` a valid pointer.
 */
enum LfStatus lf_locality_size(const struct LfLocality *l, size_t *out);

/**
 * The product of `a` and `b`, or `LF_NONE` when the pair is outside the domain.
 *
 * # Safety
 * `l` must be a live locality handle and `out` a valid pointer.
 */
enum LfStatus lf_locality_product(const struct LfLocality *l,
                                  uint32_t a,
                                  uint32_t b,
                                  uint32_t *out);

/**
 * Checks the locality axioms. `ok` is set to 1 when they hold and 0 otherwise;
 * the first violated axiom is then available from `lf_last_error`.
 *
 * # Safety
 * `l` must be a live locality handle and `ok` a valid pointer.
 */
enum LfStatus lf_locality_verify(const struct LfLocality *l, uint64_t seed, int32_t *ok);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void lf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LOCALITY_FORGE_H */
