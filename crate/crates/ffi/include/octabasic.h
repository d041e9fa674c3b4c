#ifndef OCTABASIC_H
#define OCTABASIC_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Number of ring variables; `oct_poly_eval` expects this many values in the
// order a, b, r, s, t, u, p, q, v, w, x.
#define OCT_NUM_VARS 11

// Largest moment index accepted by the moment functions.
#define OCT_MAX_MOMENT 24

// Largest permutation size accepted by the enumeration functions.
#define OCT_MAX_PERM 10

typedef enum {
  OCT_CHECK_THEOREM1 = 0,
  OCT_CHECK_THEOREM2 = 1,
  OCT_CHECK_THEOREM3 = 2,
  OCT_CHECK_THEOREM4 = 3,
  OCT_CHECK_IDENTITY35 = 4,
  OCT_CHECK_PROP1 = 5,
  OCT_CHECK_ODD_MOMENTS = 6,
  OCT_CHECK_RESTRICTED_COUNT = 7,
} OctCheck;

typedef enum {
  OCT_FAMILY_OCTABASIC = 0,
  OCT_FAMILY_QJACOBI = 1,
  OCT_FAMILY_SUM2 = 2,
  OCT_FAMILY_QLAGUERRE = 3,
  OCT_FAMILY_ODD = 4,
} OctFamily;

typedef enum {
  OCT_RUN_TERM_N_MINUS_RUN = 0,
  OCT_RUN_TERM_RUN_MINUS_ONE = 1,
} OctRunTerm;

typedef enum {
  OCT_SPEC_NONE = 0,
  OCT_SPEC_T2 = 1,
  OCT_SPEC_T3 = 2,
  OCT_SPEC_QL = 3,
} OctSpec;

typedef enum {
  OCT_STATUS_OK = 0,
  OCT_STATUS_NULL_POINTER = 1,
  OCT_STATUS_INVALID_ARGUMENT = 2,
  OCT_STATUS_PARSE_ERROR = 3,
  OCT_STATUS_INVALID_UTF8 = 4,
  OCT_STATUS_OUT_OF_RANGE = 5,
  OCT_STATUS_PANIC = 6,
} OctStatus;

// Opaque exponent-to-count tally.
typedef struct OctDistribution OctDistribution;

// Opaque exact Laurent polynomial.
typedef struct OctPoly OctPoly;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on this thread, or NULL. The
// pointer stays valid until the next call into this library on the same
// thread.
const char *oct_last_error(void);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void oct_string_free(char *s);

// Parses the JSON term-list format.
//
// # Safety
// `json` must be a NUL-terminated string; `out` must be writable.
OctStatus oct_poly_from_json(const char *json, OctPoly **out);

// # Safety
// `p` must be a live handle; `out` must be writable. Free the result with
// `oct_string_free`.
OctStatus oct_poly_to_json(const OctPoly *p, char **out);

// Human-readable form such as `1 + a*b^2`.
//
// # Safety
// As for `oct_poly_to_json`.
OctStatus oct_poly_to_string(const OctPoly *p, char **out);

// Number of nonzero terms; 0 for a NULL handle.
//
// # Safety
// `p` must be NULL or a live handle.
uintptr_t oct_poly_num_terms(const OctPoly *p);

// # Safety
// `a` and `b` must be live handles; `out` must be writable.
OctStatus oct_poly_equal(const OctPoly *a, const OctPoly *b, bool *out);

// Evaluates at `values[0..OCT_NUM_VARS]`, in canonical variable order.
//
// # Safety
// `values` must point to `OCT_NUM_VARS` readable doubles; `out` must be
// writable.
OctStatus oct_poly_eval(const OctPoly *p, const double *values, double *out);

// # Safety
// `p` must be NULL or a handle not yet freed.
void oct_poly_free(OctPoly *p);

// The moment `mu_n` of a family from its recurrence.
//
// # Safety
// `out` must be writable.
OctStatus oct_moment(OctFamily family, OctSpec spec, uint32_t alpha, uint32_t n, OctPoly **out);

// `mu_n` of the ten-parameter family as a sum over permutations.
//
// # Safety
// `out` must be writable.
OctStatus oct_moment_via_permutations(uint32_t n, OctPoly **out);

// `mu_n` of the ten-parameter family as a sum over weighted paths.
//
// # Safety
// `out` must be writable.
OctStatus oct_moment_via_paths(uint32_t n, OctPoly **out);

// Tally over `S_n` of the statistic described by `profile`, e.g.
// `"run=n-run; op=2,1; clos=2,1; cont=2,1; sing=2,1"`.
//
// # Safety
// `profile` must be a NUL-terminated string; `out` must be writable.
OctStatus oct_distribution(uint32_t n, const char *profile, OctDistribution **out);

// Tally over `S_n` of `run_term + 2 lsg* + rsg* + n(sigma)`.
//
// # Safety
// `out` must be writable.
OctStatus oct_theorem4_distribution(uint32_t n, OctRunTerm run_term, OctDistribution **out);

// Number of distinct exponents; 0 for a NULL handle.
//
// # Safety
// `d` must be NULL or a live handle.
uintptr_t oct_distribution_len(const OctDistribution *d);

// The `index`-th `(exponent, count)` pair in increasing exponent order.
//
// # Safety
// `d` must be a live handle; `exponent` and `count` must be writable.
OctStatus oct_distribution_entry(const OctDistribution *d,
                                 uintptr_t index,
                                 int64_t *exponent,
                                 uint64_t *count);

// Whether the tally equals the coefficients of `n!_q`.
//
// # Safety
// `d` must be a live handle; `out` must be writable.
OctStatus oct_distribution_is_qfactorial(const OctDistribution *d, uint32_t n, bool *out);

// CSV with header `exponent,count`.
//
// # Safety
// `d` must be a live handle; `out` must be writable.
OctStatus oct_distribution_to_csv(const OctDistribution *d, char **out);

// # Safety
// `d` must be NULL or a handle not yet freed.
void oct_distribution_free(OctDistribution *d);

// Permutation in one-line notation to its weighted path, e.g.
// `"NE(0,0),SE(0,0)"`.
//
// # Safety
// `perm` must be a NUL-terminated string; `out` must be writable.
OctStatus oct_bijection_decode(const char *perm, char **out);

// Weighted path to its permutation in one-line notation.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be writable.
OctStatus oct_bijection_encode(const char *path, char **out);

// Runs one exhaustive check at size `n`.
//
// # Safety
// `out` must be writable.
OctStatus oct_verify(OctCheck check, uint32_t n, bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OCTABASIC_H */
