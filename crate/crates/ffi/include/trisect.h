#ifndef TRISECT_H
#define TRISECT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. Zero is success.
typedef enum TrisectStatus {
  TRISECT_STATUS_OK = 0,
  TRISECT_STATUS_NULL_POINTER = 1,
  TRISECT_STATUS_INVALID_UTF8 = 2,
  TRISECT_STATUS_INVALID_DIAGRAM = 3,
  TRISECT_STATUS_INVALID_MOVE = 4,
  TRISECT_STATUS_AXIOM_VIOLATION = 5,
  TRISECT_STATUS_INCOMPATIBLE = 6,
  TRISECT_STATUS_STABILIZATION_OBSTRUCTION = 7,
  TRISECT_STATUS_RESOURCE_EXCEEDED = 8,
  TRISECT_STATUS_PARSE = 9,
  TRISECT_STATUS_IO = 10,
  TRISECT_STATUS_OTHER = 11,
  TRISECT_STATUS_PANIC = 12,
} TrisectStatus;

// A trisection or surface diagram.
typedef struct TrisectDiagram TrisectDiagram;

// A Hopf triplet with its default integrals.
typedef struct TrisectTriplet TrisectTriplet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or an empty string.
// The pointer stays valid until the next call into this library on the same thread.
const char *trisect_last_error(void);

// Loads a catalog diagram (`s4`, `cp2`, `cp2bar`, `s4-disc`, `s1xs3`).
//
// # Safety
// `name` must be a NUL-terminated string and `out` a valid pointer.
enum TrisectStatus trisect_diagram_catalog(const char *name, struct TrisectDiagram **out);

// Parses a diagram from JSON. With `strict` nonzero the full trisection rules apply.
//
// # Safety
// `json` must be a NUL-terminated string and `out` a valid pointer.
enum TrisectStatus trisect_diagram_from_json(const char *json,
                                             int32_t strict,
                                             struct TrisectDiagram **out);

// Serializes a diagram. Release the string with [`trisect_string_free`].
//
// # Safety
// `d` must come from this library and `out` must be a valid pointer.
enum TrisectStatus trisect_diagram_to_json(const struct TrisectDiagram *d, char **out);

// Genus of the diagram's surface, or -1 for a null handle.
//
// # Safety
// `d` must be null or come from this library.
int64_t trisect_diagram_genus(const struct TrisectDiagram *d);

// Applies a JSON move or list of moves, returning a new diagram.
//
// # Safety
// `d` must come from this library, `moves` must be a NUL-terminated string
// and `out` a valid pointer.
enum TrisectStatus trisect_diagram_apply_moves(const struct TrisectDiagram *d,
                                               const char *moves,
                                               struct TrisectDiagram **out);

// # Safety
// `d` must be null or a handle from this library that has not been freed.
void trisect_diagram_free(struct TrisectDiagram *d);

// Builds a triplet from `kashaev:n=<n>`, `group:C=<g>,B=<g>` or `file:<path>`.
//
// # Safety
// `spec` must be a NUL-terminated string and `out` a valid pointer.
enum TrisectStatus trisect_triplet_from_spec(const char *spec, struct TrisectTriplet **out);

// # Safety
// `t` must be null or a handle from this library that has not been freed.
void trisect_triplet_free(struct TrisectTriplet *t);

// The trisection bracket as a complex number.
//
// # Safety
// `d` and `t` must be handles from this library; `re` and `im` valid pointers.
enum TrisectStatus trisect_bracket(const struct TrisectDiagram *d,
                                   const struct TrisectTriplet *t,
                                   double *re,
                                   double *im);

// The normalized invariant on the principal cube-root branch.
//
// # Safety
// `d` and `t` must be handles from this library; `re` and `im` valid pointers.
enum TrisectStatus trisect_invariant(const struct TrisectDiagram *d,
                                     const struct TrisectTriplet *t,
                                     double *re,
                                     double *im);

// Number of admissible labellings for groups `c`, `b` and a one-point M,
// plus the normalized counting invariant.
//
// # Safety
// `d` must be a handle from this library, `c` and `b` NUL-terminated group
// names, and the output pointers valid.
enum TrisectStatus trisect_count(const struct TrisectDiagram *d,
                                 const char *c,
                                 const char *b,
                                 uint64_t *labellings,
                                 double *invariant);

// # Safety
// `s` must be null or a string returned by this library that has not been freed.
void trisect_string_free(char *s);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TRISECT_H */
