#ifndef PCNLAB_H
#define PCNLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PcnStatus {
  PCN_STATUS_OK = 0,
  PCN_STATUS_NULL_POINTER = 1,
  PCN_STATUS_INVALID_ARGUMENT = 2,
  PCN_STATUS_PARSE_ERROR = 3,
  PCN_STATUS_EXHAUSTED = 4,
  PCN_STATUS_OUT_OF_DOMAIN = 5,
  PCN_STATUS_BUFFER_TOO_SMALL = 6,
  PCN_STATUS_PANIC = 7,
} PcnStatus;

typedef enum PcnParity {
  /**
   * `f(x, k)`, colour `2k`.
   */
  PCN_PARITY_EVEN = 0,
  /**
   * `h(x, k)`, colour `2k + 1`.
   */
  PCN_PARITY_ODD = 1,
} PcnParity;

/**
 * Opaque multigraph handle.
 */
typedef struct PcnGraph PcnGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a graph on `n` vertices from `edge_count` pairs stored flat in
 * `edges` (`2 * edge_count` entries).
 *
 * # Safety
 * `edges` must point to `2 * edge_count` readable values (or be null when
 * `edge_count` is 0); `out` must be writable.
 */
enum PcnStatus pcn_graph_new(size_t n,
                             const size_t *edges,
                             size_t edge_count,
                             struct PcnGraph **out);

/**
 * Parses the `n m` / `u v` text format.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum PcnStatus pcn_graph_parse(const char *text, struct PcnGraph **out);

/**
 * Releases a handle. Null is ignored.
 *
 * # Safety
 * `g` must come from this library and not be used afterwards.
 */
void pcn_graph_free(struct PcnGraph *g);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum PcnStatus pcn_graph_vertex_count(const struct PcnGraph *g, size_t *out);

/**
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum PcnStatus pcn_graph_edge_count(const struct PcnGraph *g, size_t *out);

/**
 * Girth, with 0 standing for an acyclic graph.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum PcnStatus pcn_graph_girth(const struct PcnGraph *g, size_t *out);

/**
 * Writes the NUL-terminated text form into `buf`. If `cap` is too small
 * nothing is written, `needed` receives the required size and the call
 * returns `PCN_STATUS_BUFFER_TOO_SMALL`.
 *
 * # Safety
 * `g` must be a live handle; `buf` must hold `cap` bytes; `needed` may be null.
 */
enum PcnStatus pcn_graph_to_text(const struct PcnGraph *g, char *buf, size_t cap, size_t *needed);

/**
 * `exp(-sum_{k=1}^{g-1} 2^(k-1)/k)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PcnStatus pcn_girth_limit_probability(size_t girth, double *out);

/**
 * Uniform labeled cubic graph with girth at least `girth`; `max_tries` of 0
 * selects the default budget.
 *
 * # Safety
 * `out` must be writable.
 */
enum PcnStatus pcn_sample_girth_conditioned(size_t n,
                                            size_t girth,
                                            uint64_t seed,
                                            uint64_t max_tries,
                                            struct PcnGraph **out);

/**
 * # Safety
 * `out_rate` and `out_accepted` must be writable.
 */
enum PcnStatus pcn_estimate_acceptance(size_t n,
                                       size_t girth,
                                       uint64_t trials,
                                       uint64_t seed,
                                       double *out_rate,
                                       uint64_t *out_accepted);

/**
 * Exact `c_i`. The witness is copied into `witness` when it is non-null and
 * `cap` is large enough; `out_size` is always set on success or
 * `PCN_STATUS_BUFFER_TOO_SMALL`.
 *
 * # Safety
 * `g` must be a live handle; `witness` must hold `cap` values or be null.
 */
enum PcnStatus pcn_max_i_independent(const struct PcnGraph *g,
                                     size_t i,
                                     size_t *witness,
                                     size_t cap,
                                     size_t *out_size);

/**
 * Exact `c_{1,2,4}`.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum PcnStatus pcn_max_union_124(const struct PcnGraph *g, size_t *out);

/**
 * Packing chromatic number up to `k_max`. `out_exact` is false when it
 * exceeds `k_max`. When exact and `colors` is non-null, the witness colouring
 * (one entry per vertex) is written there.
 *
 * # Safety
 * `g` must be a live handle; `colors` must hold one value per vertex or be null.
 */
enum PcnStatus pcn_chi_p(const struct PcnGraph *g,
                         uint32_t k_max,
                         uint32_t *colors,
                         uint32_t *out_value,
                         bool *out_exact);

/**
 * `f(x, k)` or `h(x, k)`.
 *
 * # Safety
 * `out` must be writable.
 */
enum PcnStatus pcn_rate(enum PcnParity parity, double x, uint32_t k, double *out);

/**
 * Total density of the budget certificate for `k >= 12` colours.
 *
 * # Safety
 * `out` must be writable.
 */
enum PcnStatus pcn_budget_total(uint32_t k, double *out);

/**
 * Copies the last error message of this thread (empty after a success) and
 * returns the buffer size it needs, including the NUL. Pass a null buffer to
 * query the size.
 *
 * # Safety
 * `buf` must hold `cap` bytes or be null.
 */
size_t pcn_last_error_message(char *buf, size_t cap);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PCNLAB_H */
