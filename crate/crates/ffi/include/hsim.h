/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef HSIM_H
#define HSIM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum HsimStatus {
  HSIM_STATUS_OK = 0,
  /**
   * Null pointer, bad UTF-8 or a buffer too small.
   */
  HSIM_STATUS_INVALID_ARGUMENT = 1,
  HSIM_STATUS_INPUT_ERROR = 2,
  HSIM_STATUS_CAPABILITY_ERROR = 3,
  HSIM_STATUS_INTERNAL_ERROR = 4,
  HSIM_STATUS_PANIC = 5,
} HsimStatus;

/**
 * Parsed Hamiltonian.
 */
typedef struct HsimHamiltonian HsimHamiltonian;

/**
 * Term ordering together with the Hamiltonian it orders.
 */
typedef struct HsimOrdering HsimOrdering;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. Valid until the
 * next `hsim_*` call on the same thread.
 */
const char *hsim_last_error(void);

/**
 * Parses Hamiltonian text (one `<coefficient> <pauli-string>` per line).
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum HsimStatus hsim_hamiltonian_parse(const char *text, struct HsimHamiltonian **out);

/**
 * Seeded random Hamiltonian with distinct non-identity terms.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum HsimStatus hsim_hamiltonian_random(size_t width,
                                        size_t n_terms,
                                        uint64_t seed,
                                        struct HsimHamiltonian **out);

/**
 * # Safety
 * `h` must come from `hsim_hamiltonian_parse` or `hsim_hamiltonian_random`
 * and not have been freed. Null is ignored.
 */
void hsim_hamiltonian_free(struct HsimHamiltonian *h);

/**
 * # Safety
 * `h` must be a live handle and `width`, `n_terms` valid pointers.
 */
enum HsimStatus hsim_hamiltonian_shape(const struct HsimHamiltonian *h,
                                       size_t *width,
                                       size_t *n_terms);

/**
 * Orders the terms of `h`. `strategy` is one of `lex`, `mag`, `random`,
 * `deplete`, `mctsp`; `seed` is used by `random` only.
 *
 * # Safety
 * `h` must be a live handle, `strategy` NUL-terminated, `out` valid.
 */
enum HsimStatus hsim_order(const struct HsimHamiltonian *h,
                           const char *strategy,
                           uint64_t seed,
                           struct HsimOrdering **out);

/**
 * # Safety
 * `o` must come from `hsim_order` and not have been freed. Null is ignored.
 */
void hsim_ordering_free(struct HsimOrdering *o);

/**
 * Copies the permutation into `buf`. With `buf` null, only `len` is set.
 *
 * # Safety
 * `o` must be a live handle; `buf` must hold `cap` elements when non-null.
 */
enum HsimStatus hsim_ordering_permutation(const struct HsimOrdering *o,
                                          size_t *buf,
                                          size_t cap,
                                          size_t *len);

/**
 * CNOT count of one Trotter step in this order, after cancellation.
 *
 * # Safety
 * `o` must be a live handle and `out` valid.
 */
enum HsimStatus hsim_ordering_cnot_cost(const struct HsimOrdering *o, size_t *out);

/**
 * Diamond distance between the compiled circuit at `(t, r)` and
 * `exp(-iHt)`.
 *
 * # Safety
 * `o` must be a live handle and `out` valid.
 */
enum HsimStatus hsim_trotter_error(const struct HsimOrdering *o, double t, size_t r, double *out);

/**
 * Compiles the Trotter circuit to the plain-text gate list. Release the
 * string with `hsim_string_free`.
 *
 * # Safety
 * `o` must be a live handle and `out` valid.
 */
enum HsimStatus hsim_compile(const struct HsimOrdering *o, double t, size_t r, char **out);

/**
 * # Safety
 * `s` must come from an `hsim_*` function returning an owned string. Null
 * is ignored.
 */
void hsim_string_free(char *s);

/**
 * CNOTs left at the interface between the subcircuits of `a` and `b`.
 *
 * # Safety
 * `a` and `b` must be NUL-terminated and `out` valid.
 */
enum HsimStatus hsim_cnot_distance(const char *a, const char *b, size_t *out);

/**
 * # Safety
 * `a` and `b` must be NUL-terminated and `out` valid.
 */
enum HsimStatus hsim_commutes(const char *a, const char *b, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HSIM_H */
