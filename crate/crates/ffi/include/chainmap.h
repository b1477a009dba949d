#ifndef CHAINMAP_H
#define CHAINMAP_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum CmStatus {
  CM_STATUS_OK = 0,
  CM_STATUS_NULL_POINTER = 1,
  CM_STATUS_INVALID_UTF8 = 2,
  CM_STATUS_INVALID_INPUT = 3,
  CM_STATUS_TOO_LARGE = 4,
  CM_STATUS_CONSISTENCY = 5,
  CM_STATUS_NON_FINITE = 6,
  CM_STATUS_IO = 7,
  CM_STATUS_PANIC = 8,
} CmStatus;

/**
 * A simplicial complex.
 */
typedef struct CmComplex CmComplex;

/**
 * A chain map with floating-point entries.
 */
typedef struct CmMap CmMap;

/**
 * Chain maps between two complexes up to homotopy, over the rationals.
 */
typedef struct CmParam CmParam;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next failing call on the same thread; do not free.
 */
const char *cm_last_error(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void cm_string_free(char *s);

/**
 * Builds a named model complex: point, triangle, square, octagon, ngon:N,
 * filled_triangle, octahedron, icosahedron.
 *
 * # Safety
 * `name` must be a nul-terminated string; `out` must be writable.
 */
enum CmStatus cm_complex_model(const char *name, struct CmComplex **out);

/**
 * Parses a complex from its JSON form (`{"simplices": [[0], [1], [0, 1], ...]}`).
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be writable.
 */
enum CmStatus cm_complex_from_json(const char *json, struct CmComplex **out);

/**
 * Writes the complex as JSON into a new string.
 *
 * # Safety
 * `k` must be a live handle; `out` must be writable.
 */
enum CmStatus cm_complex_to_json(const struct CmComplex *k, char **out);

/**
 * Number of simplices of dimension `dim`.
 *
 * # Safety
 * `k` must be a live handle or null (which gives 0).
 */
uintptr_t cm_complex_count(const struct CmComplex *k, uintptr_t dim);

/**
 * Rational Betti numbers in dimensions `0..len`; dimensions above the
 * complex are 0.
 *
 * # Safety
 * `k` must be a live handle; `out` must hold `len` values.
 */
enum CmStatus cm_complex_betti(const struct CmComplex *k, uintptr_t *out, uintptr_t len);

/**
 * # Safety
 * `k` must come from this library and not be freed twice. Null is ignored.
 */
void cm_complex_free(struct CmComplex *k);

/**
 * Computes the generators and homotopies of chain maps from `x` to `y`.
 *
 * # Safety
 * `x` and `y` must be live handles; `out` must be writable.
 */
enum CmStatus cm_param_new(const struct CmComplex *x,
                           const struct CmComplex *y,
                           struct CmParam **out);

/**
 * Number of homology-class generators.
 *
 * # Safety
 * `p` must be a live handle or null (which gives 0).
 */
uintptr_t cm_param_generator_count(const struct CmParam *p);

/**
 * Number of independent homotopy directions.
 *
 * # Safety
 * `p` must be a live handle or null (which gives 0).
 */
uintptr_t cm_param_homotopy_count(const struct CmParam *p);

/**
 * Writes the parameterization as JSON into a new string.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum CmStatus cm_param_to_json(const struct CmParam *p, char **out);

/**
 * # Safety
 * `p` must come from this library and not be freed twice. Null is ignored.
 */
void cm_param_free(struct CmParam *p);

/**
 * Solves the norm program and returns a random vertex of its optimal face.
 * `optimum` may be null.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum CmStatus cm_map_lp_random_vertex(const struct CmParam *p,
                                      uint64_t seed,
                                      struct CmMap **out,
                                      double *optimum);

/**
 * Returns the map with every homotopy coefficient zero.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum CmStatus cm_map_base(const struct CmParam *p, struct CmMap **out);

/**
 * Largest column sum plus largest row sum of absolute entries.
 *
 * # Safety
 * `g` must be a live handle or null (which gives NaN).
 */
double cm_map_norm_objective(const struct CmMap *g);

/**
 * Number of nonzero entries beyond one per row and per column.
 *
 * # Safety
 * `g` must be a live handle or null (which gives 0).
 */
uintptr_t cm_map_penalty(const struct CmMap *g);

/**
 * Diagonal-compatibility loss of the map and its adjoint.
 *
 * # Safety
 * `g` must be a live handle or null (which gives NaN).
 */
double cm_map_aw_loss(const struct CmMap *g);

/**
 * Whether the map commutes with the boundaries (1) or not (0).
 *
 * # Safety
 * `g` must be a live handle or null (which gives 0).
 */
int32_t cm_map_is_chain_map(const struct CmMap *g);

/**
 * Writes the map as JSON into a new string.
 *
 * # Safety
 * `g` must be a live handle; `out` must be writable.
 */
enum CmStatus cm_map_to_json(const struct CmMap *g, char **out);

/**
 * # Safety
 * `g` must come from this library and not be freed twice. Null is ignored.
 */
void cm_map_free(struct CmMap *g);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHAINMAP_H */
