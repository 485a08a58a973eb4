#ifndef ATDCENSUS_H
#define ATDCENSUS_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status of an FFI call.
 */
typedef enum AtdStatus {
  ATD_STATUS_OK = 0,
  ATD_STATUS_NULL_ARGUMENT = 1,
  ATD_STATUS_INVALID_ARGUMENT = 2,
  ATD_STATUS_BUDGET_EXCEEDED = 3,
  ATD_STATUS_UTF8 = 4,
} AtdStatus;

/**
 * Opaque digraph handle.
 */
typedef struct AtdDigraph AtdDigraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * The message of the most recent error on this thread, or null. The
 * pointer stays valid until the next failing call on the same thread.
 */
const char *atd_last_error(void);

/**
 * Builds a digraph on `n` vertices from `arc_count` pairs laid out flat as
 * `tail0, head0, tail1, head1, ...`.
 *
 * # Safety
 * `arcs` must point to `2 * arc_count` readable u32 values; `out` must be
 * a valid location to store the handle.
 */
enum AtdStatus atd_digraph_from_arcs(uint32_t n,
                                     const uint32_t *arcs,
                                     uintptr_t arc_count,
                                     struct AtdDigraph **out);

/**
 * Parses a digraph document (see the `ATD-DIGRAPH v1` format).
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` a valid location.
 */
enum AtdStatus atd_digraph_parse(const char *text, struct AtdDigraph **out);

/**
 * The wreath digraph on `2n` vertices.
 *
 * # Safety
 * `out` must be a valid location to store the handle.
 */
enum AtdStatus atd_wreath(uint32_t n, struct AtdDigraph **out);

/**
 * The generalised wreath digraph on `n * 2^r` vertices.
 *
 * # Safety
 * `out` must be a valid location to store the handle.
 */
enum AtdStatus atd_generalised_wreath(uint32_t n, uint32_t r, struct AtdDigraph **out);

/**
 * Releases a digraph handle. A null pointer is ignored.
 *
 * # Safety
 * `d` must be a pointer previously returned by this library and not yet
 * freed.
 */
void atd_digraph_free(struct AtdDigraph *d);

/**
 * # Safety
 * `d` must be a live handle.
 */
uint32_t atd_digraph_order(const struct AtdDigraph *d);

/**
 * # Safety
 * `d` must be a live handle.
 */
uintptr_t atd_digraph_arc_count(const struct AtdDigraph *d);

/**
 * The digraph with all arcs reversed.
 *
 * # Safety
 * `d` must be a live handle; `out` a valid location.
 */
enum AtdStatus atd_opposite(const struct AtdDigraph *d, struct AtdDigraph **out);

/**
 * The underlying graph (symmetrised arc relation).
 *
 * # Safety
 * `d` must be a live handle; `out` a valid location.
 */
enum AtdStatus atd_underlying_graph(const struct AtdDigraph *d, struct AtdDigraph **out);

/**
 * Label-invariant certificate bytes; two digraphs are isomorphic iff their
 * certificates agree. The buffer is allocated by the library and must be
 * released with `atd_bytes_free`.
 *
 * # Safety
 * `d` must be a live handle; `out_bytes` and `out_len` valid locations.
 */
enum AtdStatus atd_canonical_certificate(const struct AtdDigraph *d,
                                         uint8_t **out_bytes,
                                         uintptr_t *out_len);

/**
 * Releases a byte buffer returned by this library.
 *
 * # Safety
 * `bytes` and `len` must come from a single library allocation.
 */
void atd_bytes_free(uint8_t *bytes, uintptr_t len);

/**
 * # Safety
 * `a` and `b` must be live handles; `out` a valid location.
 */
enum AtdStatus atd_are_isomorphic(const struct AtdDigraph *a,
                                  const struct AtdDigraph *b,
                                  bool *out);

/**
 * # Safety
 * `d` must be a live handle; `out` a valid location.
 */
enum AtdStatus atd_is_self_opposite(const struct AtdDigraph *d, bool *out);

/**
 * Whether the digraph is connected, asymmetric, 2-valent regular and
 * arc-transitive.
 *
 * # Safety
 * `d` must be a live handle; `out` a valid location.
 */
enum AtdStatus atd_is_two_atd(const struct AtdDigraph *d, bool *out);

/**
 * Serialises a digraph document. Free with `atd_string_free`.
 *
 * # Safety
 * `d` must be a live handle; `out` a valid location.
 */
enum AtdStatus atd_digraph_document(const struct AtdDigraph *d, char **out);

/**
 * Computes the full invariant record of a 2-valent arc-transitive
 * asymmetric digraph as a two-line CSV (header and row). Free with
 * `atd_string_free`.
 *
 * # Safety
 * `d` must be a live handle; `out` a valid location.
 */
enum AtdStatus atd_record_csv(const struct AtdDigraph *d, char **out);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must be a string previously returned by this library.
 */
void atd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ATDCENSUS_H */
