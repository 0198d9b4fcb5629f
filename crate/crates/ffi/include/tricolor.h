#ifndef TRICOLOR_H
#define TRICOLOR_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TricolorStatus {
  TRICOLOR_STATUS_OK = 0,
  TRICOLOR_STATUS_INVALID_ARGUMENT = 1,
  TRICOLOR_STATUS_PARSE_ERROR = 2,
  TRICOLOR_STATUS_BUDGET_EXCEEDED = 3,
  TRICOLOR_STATUS_NULL_POINTER = 4,
  TRICOLOR_STATUS_INTERNAL = 5,
} TricolorStatus;

// Opaque graph handle.
typedef struct TricolorGraph TricolorGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread; empty after a success.
// Valid until the next call on the same thread.
const char *tricolor_last_error(void);

// Builds a graph on `n` vertices from `m` edges given as `2m` ids
// `u0, v0, u1, v1, ...`. Duplicate edges are merged.
//
// # Safety
// `edges` must point to `2 * m` readable values (or be null when `m == 0`);
// `out` must be writable.
enum TricolorStatus tricolor_graph_from_edges(size_t n,
                                              const uint32_t *edges,
                                              size_t m,
                                              struct TricolorGraph **out);

// Parses DIMACS `.col` text.
//
// # Safety
// `text` must be a nul-terminated string; `out` must be writable.
enum TricolorStatus tricolor_graph_from_dimacs(const char *text, struct TricolorGraph **out);

// Generates a planted 3-colorable graph. When `hidden` is not null it
// receives the planted coloring (`n` values).
//
// # Safety
// `out` must be writable; `hidden` must be null or hold `n` values.
enum TricolorStatus tricolor_graph_planted(size_t n,
                                           size_t degree,
                                           uint64_t seed,
                                           struct TricolorGraph **out,
                                           uint32_t *hidden);

// Frees a graph. Null is ignored.
//
// # Safety
// `g` must come from this library and not be used afterwards.
void tricolor_graph_free(struct TricolorGraph *g);

// Vertex count, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t tricolor_graph_vertex_count(const struct TricolorGraph *g);

// Edge count, or 0 for a null handle.
//
// # Safety
// `g` must be null or a live handle.
size_t tricolor_graph_edge_count(const struct TricolorGraph *g);

// Colors `g` at ratio `r`. `per_round_calls == 0` selects the default.
// `colors` receives one color per vertex. `report_json`, when not null,
// receives a run report to be released with [`tricolor_string_free`].
//
// # Safety
// `g` must be a live handle; `colors` must hold `n` values; the remaining
// pointers must be null or writable.
enum TricolorStatus tricolor_color(const struct TricolorGraph *g,
                                   double r,
                                   uint64_t seed,
                                   size_t per_round_calls,
                                   uint32_t *colors,
                                   size_t *colors_used,
                                   bool *promise_violation,
                                   char **report_json);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void tricolor_string_free(char *s);

// Approximate maximum independent set at ratio `r`. `membership` receives
// 1 for members and 0 otherwise.
//
// # Safety
// `g` must be a live handle; `membership` must hold `n` values; `size`
// must be null or writable.
enum TricolorStatus tricolor_independent_set(const struct TricolorGraph *g,
                                             double r,
                                             uint64_t seed,
                                             uint8_t *membership,
                                             size_t *size);

// Maximum independent set within `budget` search nodes.
//
// # Safety
// As for [`tricolor_independent_set`].
enum TricolorStatus tricolor_exact_mis(const struct TricolorGraph *g,
                                       uint64_t budget,
                                       uint8_t *membership,
                                       size_t *size);

// Exact 3-coloring within `budget` search nodes. `colors` is written only
// when `*colorable` comes back true.
//
// # Safety
// `g` must be a live handle; `colors` must hold `n` values; `colorable`
// must be writable.
enum TricolorStatus tricolor_exact_3color(const struct TricolorGraph *g,
                                          uint64_t budget,
                                          uint32_t *colors,
                                          bool *colorable);

// Checks that `colors` (one per vertex) is a proper coloring.
//
// # Safety
// `g` must be a live handle; `colors` must hold `n` values; `valid` must be
// writable.
enum TricolorStatus tricolor_verify_coloring(const struct TricolorGraph *g,
                                             const uint32_t *colors,
                                             bool *valid);

// Checks that the vertices flagged in `membership` are independent.
//
// # Safety
// `g` must be a live handle; `membership` must hold `n` values; `valid`
// must be writable.
enum TricolorStatus tricolor_verify_independent_set(const struct TricolorGraph *g,
                                                    const uint8_t *membership,
                                                    bool *valid);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TRICOLOR_H */
