#ifndef CHROMALG_H
#define CHROMALG_H

/* Generated by cbindgen from crates/ffi; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result codes shared by all functions.
 */
typedef enum ChromalgStatus {
  CHROMALG_STATUS_OK = 0,
  /*
   A mathematical verification failed (not exact, not invariant, failed axioms, …).
   */
  CHROMALG_STATUS_MATH_FAILURE = 1,
  /*
   Malformed or unsupported input.
   */
  CHROMALG_STATUS_INVALID_INPUT = 2,
  CHROMALG_STATUS_NULL_POINTER = 3,
  CHROMALG_STATUS_INVALID_UTF8 = 4,
  /*
   A Rust panic was caught at the boundary.
   */
  CHROMALG_STATUS_INTERNAL = 5,
} ChromalgStatus;

/*
 An algebra R over BP_* with its classifying map.
 */
typedef struct ChromalgAlgebra ChromalgAlgebra;

/*
 A Hopf algebroid (A, Γ).
 */
typedef struct ChromalgHopf ChromalgHopf;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 The library version as a static string.
 */
const char *chromalg_version(void);

/*
 The message of the last failed call on this thread, or NULL. Valid until the next call.
 */
const char *chromalg_last_error(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void chromalg_string_free(char *s);

/*
 Parses an algebra.json document.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ChromalgStatus chromalg_algebra_from_json(const char *json, struct ChromalgAlgebra **out);

/*
 A built-in algebra such as "e1", "k2" or "bp" at the prime `p`.

 # Safety
 `name` must be a NUL-terminated string; `out` must be writable.
 */
enum ChromalgStatus chromalg_algebra_builtin(const char *name,
                                             uint64_t p,
                                             struct ChromalgAlgebra **out);

/*
 # Safety
 `a` must come from this library and not have been freed. NULL is ignored.
 */
void chromalg_algebra_free(struct ChromalgAlgebra *a);

/*
 Writes 1 to `out` when φ(v_n), φ(v_{n+1}), … is regular up to degree `max_degree`, else 0.
 The full verdict is written as JSON to `verdict_json` when that pointer is non-NULL.

 # Safety
 `a` must be a live handle; `out` must be writable.
 */
enum ChromalgStatus chromalg_algebra_is_exact(const struct ChromalgAlgebra *a,
                                              int max_degree,
                                              int *out,
                                              char **verdict_json);

/*
 The height of the algebra as JSON.

 # Safety
 `a` must be a live handle; `out` must be writable.
 */
enum ChromalgStatus chromalg_algebra_height(const struct ChromalgAlgebra *a,
                                            uint32_t bound,
                                            char **out);

/*
 The stratum label as JSON; fails with `MathFailure` when the algebra is not Landweber exact.

 # Safety
 `a` must be a live handle; `out` must be writable.
 */
enum ChromalgStatus chromalg_algebra_classify(const struct ChromalgAlgebra *a,
                                              uint32_t bound,
                                              int max_degree,
                                              char **out);

/*
 Compares the comodule categories of two algebras; the report is JSON.

 # Safety
 `left` and `right` must be live handles; `out` must be writable.
 */
enum ChromalgStatus chromalg_compare(const struct ChromalgAlgebra *left,
                                     const struct ChromalgAlgebra *right,
                                     uint32_t bound,
                                     int max_degree,
                                     char **out);

/*
 The BP Hopf algebroid at `p` through degree `max_degree`, with Hazewinkel generators.

 # Safety
 `out` must be writable.
 */
enum ChromalgStatus chromalg_hopf_bp(uint64_t p, int max_degree, struct ChromalgHopf **out);

/*
 Parses a hopf.json document.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum ChromalgStatus chromalg_hopf_from_json(const char *json, struct ChromalgHopf **out);

/*
 # Safety
 `h` must come from this library and not have been freed. NULL is ignored.
 */
void chromalg_hopf_free(struct ChromalgHopf *h);

/*
 Serializes the Hopf algebroid as hopf.json.

 # Safety
 `h` must be a live handle; `out` must be writable.
 */
enum ChromalgStatus chromalg_hopf_to_json(const struct ChromalgHopf *h, char **out);

/*
 Checks the Hopf algebroid axioms; returns `MathFailure` when one fails. The report is JSON.

 # Safety
 `h` must be a live handle; `report` must be writable.
 */
enum ChromalgStatus chromalg_hopf_check(const struct ChromalgHopf *h, char **report);

/*
 The denominator of ζ(1 − k) in decimal, for k ≥ 2.

 # Safety
 `out` must be writable.
 */
enum ChromalgStatus chromalg_zeta_denominator(uint32_t k, char **out);

/*
 Runs a command line given as a JSON array of arguments (without the program name), for example
 `["zeta","denom","--k","4"]`. Standard output and error are returned as strings and the
 command's exit code is written to `exit_code`. The cache is bypassed.

 # Safety
 `args_json` must be a NUL-terminated string; the output pointers must be writable.
 */
enum ChromalgStatus chromalg_run(const char *args_json,
                                 char **stdout_text,
                                 char **stderr_text,
                                 int *exit_code);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHROMALG_H */
