#ifndef DOWKER_H
#define DOWKER_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum DkKind {
  DK_KIND_DOWKER = 0,
  DK_KIND_DOWKER_TRANSPOSE = 1,
  DK_KIND_RECTANGLE = 2,
} DkKind;

/**
 * Result of every fallible call. Values 1 to 3 match the CLI exit codes.
 */
typedef enum DkStatus {
  DK_STATUS_OK = 0,
  DK_STATUS_VERIFICATION_FAILED = 1,
  DK_STATUS_INVALID_INPUT = 2,
  DK_STATUS_RESOURCE_GUARD = 3,
  DK_STATUS_NULL_POINTER = 4,
  DK_STATUS_PANIC = 5,
} DkStatus;

/**
 * A simplicial complex.
 */
typedef struct DkComplex DkComplex;

/**
 * A finite relation.
 */
typedef struct DkRelation DkRelation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or NULL. The pointer is
 * valid until the next call into this library from the same thread.
 */
const char *dk_last_error(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library, not yet freed.
 */
void dk_string_free(char *s);

/**
 * Parses a relation from JSON: `{"x": [...], "y": [...], "pairs": [[x, y], ...]}`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for a pointer write.
 */
enum DkStatus dk_relation_from_json(const char *text, struct DkRelation **out);

/**
 * Parses a relation from CSV with an `x,y` header.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` valid for a pointer write.
 */
enum DkStatus dk_relation_from_csv(const char *text, struct DkRelation **out);

/**
 * Random relation on `x0..`, `y0..` with each pair kept with probability
 * `density`.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum DkStatus dk_relation_random(size_t nx,
                                 size_t ny,
                                 double density,
                                 uint64_t seed,
                                 struct DkRelation **out);

/**
 * # Safety
 * `relation` must be a live handle and `out` valid for a pointer write.
 */
enum DkStatus dk_relation_transpose(const struct DkRelation *relation, struct DkRelation **out);

/**
 * Number of pairs.
 *
 * # Safety
 * `relation` must be a live handle and `out` valid for a write.
 */
enum DkStatus dk_relation_len(const struct DkRelation *relation, size_t *out);

/**
 * Canonical JSON with sorted pairs.
 *
 * # Safety
 * `relation` must be a live handle and `out` valid for a pointer write.
 */
enum DkStatus dk_relation_to_json(const struct DkRelation *relation, char **out);

/**
 * # Safety
 * `relation` must be NULL or a handle from this library, not yet freed.
 */
void dk_relation_free(struct DkRelation *relation);

/**
 * All formal concepts as a JSON array of `{"extent", "intent"}`.
 *
 * # Safety
 * `relation` must be a live handle and `out` valid for a pointer write.
 */
enum DkStatus dk_concepts_json(const struct DkRelation *relation, char **out);

/**
 * Builds `D(R)`, `D(R^T)` or `E(R)`; facets above `max_dimension` are a
 * resource-guard error.
 *
 * # Safety
 * `relation` must be a live handle and `out` valid for a pointer write.
 */
enum DkStatus dk_complex_build(const struct DkRelation *relation,
                               enum DkKind kind,
                               size_t max_dimension,
                               struct DkComplex **out);

/**
 * # Safety
 * `complex` must be a live handle and `out` valid for a write.
 */
enum DkStatus dk_complex_num_facets(const struct DkComplex *complex, size_t *out);

/**
 * Declared vertices, including ones in no facet.
 *
 * # Safety
 * `complex` must be a live handle and `out` valid for a write.
 */
enum DkStatus dk_complex_num_vertices(const struct DkComplex *complex, size_t *out);

/**
 * −1 for the empty complex.
 *
 * # Safety
 * `complex` must be a live handle and `out` valid for a write.
 */
enum DkStatus dk_complex_dimension(const struct DkComplex *complex, int64_t *out);

/**
 * # Safety
 * `complex` must be a live handle and `out` valid for a write.
 */
enum DkStatus dk_complex_euler_characteristic(const struct DkComplex *complex, int64_t *out);

/**
 * `{"vertices": [...], "facets": [[...], ...]}`.
 *
 * # Safety
 * `complex` must be a live handle and `out` valid for a pointer write.
 */
enum DkStatus dk_complex_to_json(const struct DkComplex *complex, char **out);

/**
 * The 1-skeleton as a Graphviz `graph`.
 *
 * # Safety
 * `complex` must be a live handle and `out` valid for a pointer write.
 */
enum DkStatus dk_complex_to_dot(const struct DkComplex *complex, char **out);

/**
 * Homology as `{"reduced", "groups": [{"dim", "betti", "torsion"}]}`.
 * `coefficients` is `z`, `q`, `z2` or `zp:<p>`; NULL means `z`.
 *
 * # Safety
 * `complex` must be a live handle, `coefficients` NULL or a NUL-terminated
 * string, and `out` valid for a pointer write.
 */
enum DkStatus dk_complex_homology_json(const struct DkComplex *complex,
                                       bool reduced,
                                       const char *coefficients,
                                       char **out);

/**
 * # Safety
 * `complex` must be NULL or a handle from this library, not yet freed.
 */
void dk_complex_free(struct DkComplex *complex);

/**
 * Fiber report for `π_R` over the simplex given as comma-separated objects.
 *
 * # Safety
 * `relation` must be a live handle, `simplex` a NUL-terminated string and
 * `out` valid for a pointer write.
 */
enum DkStatus dk_fiber_json(const struct DkRelation *relation, const char *simplex, char **out);

/**
 * Whether both coordinate projections out of `E(R)` are
 * quasi-isomorphisms over the integers.
 *
 * # Safety
 * `relation` must be a live handle and `out` valid for a write.
 */
enum DkStatus dk_projections_are_quasi_isomorphisms(const struct DkRelation *relation, bool *out);

/**
 * Runs a verification campaign with every check and writes the JSON report.
 * Returns [`DkStatus::VerificationFailed`] (with the report written) when
 * any check fails.
 *
 * # Safety
 * `out` must be valid for a pointer write.
 */
enum DkStatus dk_verify_json(size_t trials, uint64_t seed, size_t max_x, size_t max_y, char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* DOWKER_H */
