/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#ifndef TORTILE_H
#define TORTILE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum TtStatus {
  TT_STATUS_OK = 0,
  TT_STATUS_NULL_ARGUMENT = 1,
  TT_STATUS_INVALID_UTF8 = 2,
  TT_STATUS_PARSE_ERROR = 3,
  TT_STATUS_INVALID_INPUT = 4,
  // A size cap or window limit was hit.
  TT_STATUS_CAPACITY = 5,
  TT_STATUS_PANIC = 6,
} TtStatus;

// Lengths, twisting and characters over a field, bound to one graph.
typedef struct TtConfig TtConfig;

// A validated graph.
typedef struct TtGraph TtGraph;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// The message of the last failed call on this thread, or null. Owned by the
// library; valid until the next call.
const char *tt_last_error(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void tt_string_free(char *s);

// Parses graph JSON: `{"vertices": [...], "edges": [{"tail", "head"}]}`.
//
// # Safety
// `json` is a NUL-terminated string; `out` is writable.
enum TtStatus tt_graph_from_json(const char *json, struct TtGraph **out);

// # Safety
// `g` is null or a live handle from [`tt_graph_from_json`].
void tt_graph_free(struct TtGraph *g);

// # Safety
// `g` is a live graph handle.
size_t tt_graph_vertex_count(const struct TtGraph *g);

// # Safety
// `g` is a live graph handle.
size_t tt_graph_edge_count(const struct TtGraph *g);

// `{"spanning_trees": N, "lattice_index": N}`, numbers as strings.
//
// # Safety
// `g` is a live graph handle; `out` is writable.
enum TtStatus tt_trees_json(const struct TtGraph *g, char **out);

// Bond elements as a JSON array.
//
// # Safety
// `g` is a live graph handle; `out` is writable.
enum TtStatus tt_bonds_json(const struct TtGraph *g, char **out);

// Coherent acyclic orientations as a JSON array.
//
// # Safety
// `g` is a live graph handle; `out` is writable.
enum TtStatus tt_cac_json(const struct TtGraph *g, char **out);

// Builds a configuration from JSON (`lengths`, `twist`, `a`, `b`, `field`,
// `tree`); null means unit lengths, no twist, trivial characters over Q.
//
// # Safety
// `g` is a live graph handle; `json` is null or NUL-terminated; `out` is writable.
enum TtStatus tt_config_new(const struct TtGraph *g, const char *json, struct TtConfig **out);

// # Safety
// `c` is null or a live handle from [`tt_config_new`].
void tt_config_free(struct TtConfig *c);

// Every tile with `|f(v)| ≤ window`, as a JSON array.
//
// # Safety
// `c` is a live configuration handle; `out` is writable.
enum TtStatus tt_tiles_json(const struct TtConfig *c, int64_t window, char **out);

// Tiles containing a point given as comma-separated rationals. A negative
// window means the covering bound of the point.
//
// # Safety
// `c` is a live configuration handle; `point` is NUL-terminated; `out` is writable.
enum TtStatus tt_locate_json(const struct TtConfig *c,
                             const char *point,
                             int64_t window,
                             char **out);

// The shared face of two tiles as JSON, or `null` when they are disjoint.
//
// # Safety
// `c` is a live configuration handle; `f1`, `f2` are NUL-terminated; `out` is writable.
enum TtStatus tt_adjacency_json(const struct TtConfig *c,
                                const char *f1,
                                const char *f2,
                                char **out);

// Membership in `Y` and orbit data of a point given in JSON:
// `{"member": f | null, "orbit": {"n", "f", "c"} | null}`.
//
// # Safety
// `c` is a live configuration handle; `point_json` is NUL-terminated; `out` is writable.
enum TtStatus tt_orbit_json(const struct TtConfig *c,
                            const char *point_json,
                            int64_t window,
                            char **out);

// SVG of the tiling inside `bbox` (`"x0,y0,x1,y1"`), rank at most two.
//
// # Safety
// `c` is a live configuration handle; `bbox` is NUL-terminated; `out` is writable.
enum TtStatus tt_render_svg(const struct TtConfig *c,
                            const char *bbox,
                            int64_t max_window,
                            char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TORTILE_H */
