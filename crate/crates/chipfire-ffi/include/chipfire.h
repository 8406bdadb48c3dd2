#ifndef CHIPFIRE_H
#define CHIPFIRE_H

/* Generated by cbindgen from chipfire-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a fallible call. `CF_STATUS_OK` is zero so callers can treat
// nonzero as failure.
typedef enum CfStatus {
  // The call succeeded.
  Ok = 0,
  // A required pointer argument was null.
  NullPointer = 1,
  // Input could not be parsed or violated a precondition; see
  // `cf_last_error_message`.
  InvalidInput = 2,
  // The operation needed a self-reachable configuration and the given
  // one is not.
  NotSelfReachable = 3,
  // A search guard tripped before the computation finished.
  GuardExceeded = 4,
  // An internal invariant failed; see `cf_last_error_message`.
  Internal = 5,
} CfStatus;

// Opaque graph handle. Create with [`cf_graph_parse`] or
// [`cf_random_tree`], release with [`cf_graph_free`].
typedef struct cf_graph cf_graph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses a graph from its text form (`"n <count>"` header, one `"u v"`
// edge per line) into a fresh handle.
//
// # Safety
// `text` must point to a NUL-terminated string and `out` to writable
// storage for one pointer; both must stay valid for the duration of the
// call.
enum CfStatus cf_graph_parse(const char *text, struct cf_graph **out);

// Releases a handle created by this library. A null pointer is a no-op.
//
// # Safety
// `g` must be null or a pointer previously returned through
// [`cf_graph_parse`] or [`cf_random_tree`] that has not been freed.
void cf_graph_free(struct cf_graph *g);

// Number of vertices, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle from this library.
uint64_t cf_graph_vertex_count(const struct cf_graph *g);

// Whether the graph is a tree (connected, n − 1 edges). False for null.
//
// # Safety
// `g` must be null or a live handle from this library.
bool cf_graph_is_tree(const struct cf_graph *g);

// Writes the graph's text form into `*out` as a freshly allocated string.
//
// # Safety
// `g` must be a live handle and `out` writable storage for one pointer.
enum CfStatus cf_graph_to_text(const struct cf_graph *g, char **out);

// Decides self-reachability of `config` (text form) on the graph, writing
// the answer to `*out`. Uses the linear-time tree decider when the graph
// is a tree and the greedy permutation search otherwise.
//
// # Safety
// `g` must be a live handle, `config` a NUL-terminated string, and `out`
// writable storage for one `bool`.
enum CfStatus cf_check_self_reachable(const struct cf_graph *g, const char *config, bool *out);

// Applies a firing sequence (text form, empty string for none) to a
// configuration and writes the resulting configuration's text form into
// `*out`.
//
// # Safety
// `g` must be a live handle, `config` and `sequence` NUL-terminated
// strings, and `out` writable storage for one pointer.
enum CfStatus cf_fire_sequence(const struct cf_graph *g,
                               const char *config,
                               const char *sequence,
                               char **out);

// Constructs a firing sequence taking `from` to `to` on a tree (both must
// be self-reachable with equal totals) and writes the witness as JSON
// (`{"from": ..., "to": ..., "seq": ...}`) into `*out`.
//
// # Safety
// `g` must be a live handle, `from` and `to` NUL-terminated strings, and
// `out` writable storage for one pointer.
enum CfStatus cf_reach_witness(const struct cf_graph *g,
                               const char *from,
                               const char *to,
                               char **out);

// Writes the number of self-reachable configurations with `chips` chips on
// any `vertices`-vertex tree into `*out` as a decimal string (the count is
// shape-independent and can exceed 64 bits).
//
// # Safety
// `out` must be writable storage for one pointer.
enum CfStatus cf_count_self_reachable(uint64_t chips, uint64_t vertices, char **out);

// Generates a uniform random labeled tree on `vertices` vertices into a
// fresh handle.
//
// # Safety
// `out` must be writable storage for one pointer.
enum CfStatus cf_random_tree(uint64_t vertices, uint64_t seed, struct cf_graph **out);

// Releases a string returned through an out parameter. A null pointer is
// a no-op.
//
// # Safety
// `s` must be null or a pointer previously written by this library that
// has not been freed.
void cf_string_free(char *s);

// Message for the most recent failure on this thread. The pointer stays
// valid until the next failing call on the same thread; do not free it.
const char *cf_last_error_message(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CHIPFIRE_H */
