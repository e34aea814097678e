#ifndef COLORSURG_H
#define COLORSURG_H

/* Generated by cbindgen from colorsurg-ffi. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CsAnyonKind {
  CS_ANYON_KIND_BOUNDARIES = 0,
  CS_ANYON_KIND_TRANSPARENT = 1,
  CS_ANYON_KIND_SEMI_TRANSPARENT = 2,
  CS_ANYON_KIND_OPAQUE = 3,
} CsAnyonKind;

typedef enum CsStatus {
  CS_STATUS_OK = 0,
  CS_STATUS_NULL_POINTER = 1,
  CS_STATUS_PARSE = 2,
  CS_STATUS_VALIDATION = 3,
  CS_STATUS_RUNTIME = 4,
  CS_STATUS_PANIC = 5,
} CsStatus;

/*
 Opaque surgery layout.
 */
typedef struct CsLayout CsLayout;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *cs_version(void);

/*
 Message of the last failed call on this thread, or NULL. Valid until the
 next failing call on the same thread.
 */
const char *cs_last_error_message(void);

/*
 Release a string returned by this library.

 # Safety
 `s` must come from this library and not be freed twice.
 */
void cs_string_free(char *s);

/*
 Build the surgery layout of distance `d` for sparse words such as "X1 X3 Z4".

 # Safety
 `la` and `lb` must be NUL-terminated strings; `out` must be writable.
 */
enum CsStatus cs_layout_new(uintptr_t d, const char *la, const char *lb, struct CsLayout **out);

/*
 Import a layout from JSON.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum CsStatus cs_layout_from_json(const char *json, struct CsLayout **out);

/*
 Export a layout as JSON; free the result with `cs_string_free`.

 # Safety
 `layout` must be a live handle; `out` must be writable.
 */
enum CsStatus cs_layout_to_json(const struct CsLayout *layout, char **out);

/*
 Number of physical qubits (data and ancilla) in the layout, 0 for NULL.

 # Safety
 `layout` must be NULL or a live handle.
 */
uintptr_t cs_layout_num_qubits(const struct CsLayout *layout);

/*
 # Safety
 `layout` must be NULL or a handle not freed before.
 */
void cs_layout_free(struct CsLayout *layout);

/*
 One seeded merge/split run from the code space; writes both outcomes (+1/-1).

 # Safety
 `layout` must be a live handle; `out_a` and `out_b` must be writable.
 */
enum CsStatus cs_surgery_run(const struct CsLayout *layout,
                             uint64_t seed,
                             int8_t *out_a,
                             int8_t *out_b);

/*
 Min-cut fault distance of the split step; -1 when no Bell error can flip
 either outcome.

 # Safety
 `layout` must be a live handle; `out` must be writable.
 */
enum CsStatus cs_decoder_fault_distance(const struct CsLayout *layout, int64_t *out);

/*
 Monte Carlo count of decoded logical failures.

 # Safety
 `layout` must be a live handle; `out_failures` must be writable.
 */
enum CsStatus cs_decoder_failures(const struct CsLayout *layout,
                                  double p,
                                  uint64_t trials,
                                  uint64_t seed,
                                  uint64_t *out_failures);

/*
 Number of boundaries or walls of one kind.

 # Safety
 `out` must be writable.
 */
enum CsStatus cs_anyons_count(enum CsAnyonKind kind, uintptr_t *out);

/*
 Color over surface spacetime ratio at one physical error rate.

 # Safety
 `out` must be writable.
 */
enum CsStatus cs_estimate_spacetime_ratio(uint64_t n,
                                          double t_count,
                                          double budget,
                                          double p,
                                          double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COLORSURG_H */
