#ifndef FLOWTD_H
#define FLOWTD_H

#include <stddef.h>
#include <stdint.h>

typedef enum FtdStatus {
  FTD_STATUS_OK = 0,
  FTD_STATUS_NULL_POINTER = 1,
  FTD_STATUS_INVALID_ARGUMENT = 2,
  FTD_STATUS_INVALID_UTF8 = 3,
  FTD_STATUS_PARSE_ERROR = 4,
  FTD_STATUS_INVALID_DECOMPOSITION = 5,
  FTD_STATUS_BUFFER_TOO_SMALL = 6,
  FTD_STATUS_INTERNAL = 7,
} FtdStatus;

typedef enum FtdMethod {
  FTD_METHOD_AUTO = 0,
  FTD_METHOD_FLOW_CUTTER = 1,
  FTD_METHOD_MIN_DEGREE = 2,
  FTD_METHOD_MIN_FILL = 3,
} FtdMethod;

typedef struct FtdDecomposition FtdDecomposition;

typedef struct FtdGraph FtdGraph;

typedef struct FtdOptions {
  enum FtdMethod method;
  uint64_t seed;
  uint64_t max_seconds;
  /*
   0 means no limit besides `max_seconds`.
   */
  size_t max_iterations;
} FtdOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the most recent failure on this thread, or null. The
 pointer stays valid until the next `ftd_` call on the same thread.
 */
const char *ftd_last_error(void);

/*
 Static description of a status code.
 */
const char *ftd_status_name(enum FtdStatus status);

/*
 Parses a PACE `.gr` document.

 # Safety
 `text` must be a NUL-terminated string and `out` a writable pointer.
 */
enum FtdStatus ftd_graph_parse_gr(const char *text, struct FtdGraph **out);

/*
 Builds a graph from `edge_count` pairs stored flat in `edges`.
 Self-loops and duplicates are dropped.

 # Safety
 `edges` must point to `2 * edge_count` readable values (it may be null
 when `edge_count` is 0) and `out` must be writable.
 */
enum FtdStatus ftd_graph_from_edges(size_t node_count,
                                    const size_t *edges,
                                    size_t edge_count,
                                    struct FtdGraph **out);

/*
 # Safety
 `g` must be null or a handle from this library that was not freed.
 */
void ftd_graph_free(struct FtdGraph *g);

/*
 # Safety
 `g` must be a live graph handle and `out` writable.
 */
enum FtdStatus ftd_graph_node_count(const struct FtdGraph *g, size_t *out);

/*
 # Safety
 `g` must be a live graph handle and `out` writable.
 */
enum FtdStatus ftd_graph_edge_count(const struct FtdGraph *g, size_t *out);

/*
 Defaults: automatic method, seed 0, one minute, no iteration limit.
 */
struct FtdOptions ftd_options_default(void);

/*
 Runs the anytime solver and returns the best decomposition found.

 # Safety
 `g` must be a live graph handle, `options` null (for defaults) or
 readable, and `out` writable.
 */
enum FtdStatus ftd_decompose(const struct FtdGraph *g,
                             const struct FtdOptions *options,
                             struct FtdDecomposition **out);

/*
 Parses and fully checks a `.td` document against `g`.

 # Safety
 `g` must be a live graph handle, `text` NUL-terminated and `out` writable.
 */
enum FtdStatus ftd_decomposition_parse_td(const struct FtdGraph *g,
                                          const char *text,
                                          struct FtdDecomposition **out);

/*
 # Safety
 `td` must be null or a handle from this library that was not freed.
 */
void ftd_decomposition_free(struct FtdDecomposition *td);

/*
 Returns `FTD_STATUS_OK` if `td` is a tree decomposition of `g`.

 # Safety
 Both handles must be live.
 */
enum FtdStatus ftd_decomposition_validate(const struct FtdGraph *g,
                                          const struct FtdDecomposition *td);

/*
 Largest bag size minus one.

 # Safety
 `td` must be a live handle and `out` writable.
 */
enum FtdStatus ftd_decomposition_width(const struct FtdDecomposition *td, size_t *out);

/*
 # Safety
 `td` must be a live handle and `out` writable.
 */
enum FtdStatus ftd_decomposition_bag_count(const struct FtdDecomposition *td, size_t *out);

/*
 Copies bag `bag` into `nodes` (capacity `cap`) in ascending order and
 stores its size in `len`. If `cap` is too small nothing is copied,
 `len` still receives the size and `FTD_STATUS_BUFFER_TOO_SMALL` is
 returned; `nodes` may be null when `cap` is 0.

 # Safety
 `td` must be a live handle, `nodes` writable for `cap` values and `len`
 writable.
 */
enum FtdStatus ftd_decomposition_bag(const struct FtdDecomposition *td,
                                     size_t bag,
                                     size_t *nodes,
                                     size_t cap,
                                     size_t *len);

/*
 Number of tree edges between bags.

 # Safety
 `td` must be a live handle and `out` writable.
 */
enum FtdStatus ftd_decomposition_edge_count(const struct FtdDecomposition *td, size_t *out);

/*
 Endpoints of tree edge `edge`, as bag ids.

 # Safety
 `td` must be a live handle, `a` and `b` writable.
 */
enum FtdStatus ftd_decomposition_edge(const struct FtdDecomposition *td,
                                      size_t edge,
                                      size_t *a,
                                      size_t *b);

/*
 Renders `td` as a PACE `.td` document for a graph with `node_count`
 nodes. Release the string with [`ftd_string_free`].

 # Safety
 `td` must be a live handle and `out` writable.
 */
enum FtdStatus ftd_decomposition_write_td(const struct FtdDecomposition *td,
                                          size_t node_count,
                                          char **out);

/*
 # Safety
 `s` must be null or a string returned by this library that was not freed.
 */
void ftd_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FLOWTD_H */
