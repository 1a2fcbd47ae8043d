#ifndef APPROXSYS_H
#define APPROXSYS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum ApxStatus {
  APX_STATUS_OK = 0,
  // A required pointer argument was null.
  APX_STATUS_NULL_ARGUMENT = 1,
  // Malformed text, unknown system name or invalid UTF-8.
  APX_STATUS_PARSE = 2,
  APX_STATUS_DIMENSION = 3,
  // The input lies outside the function's domain.
  APX_STATUS_DOMAIN = 4,
  // Malformed formula or quadruple JSON.
  APX_STATUS_FORMAT = 5,
  // The search budget ran out.
  APX_STATUS_TIMEOUT = 6,
  // Nothing at the requested index, or no reference oracle.
  APX_STATUS_NOT_FOUND = 7,
  // An internal panic was caught at the boundary.
  APX_STATUS_PANIC = 8,
} ApxStatus;

// An approximation system together with its reference oracle, if any.
typedef struct ApxSystem ApxSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Creates a built-in system: `"division"`, `"max-division"` or `"cosine"`.
//
// # Safety
// `name` must be a nul-terminated string and `out` a writable pointer.
enum ApxStatus apx_system_builtin(const char *name, struct ApxSystem **out);

// Creates a semialgebraic system from formula JSON. A `"theta"` field
// supplies the reference oracle used by [`apx_verify_condition1`].
//
// # Safety
// `json` must be a nul-terminated string and `out` a writable pointer.
enum ApxStatus apx_system_from_formula_json(const char *json, struct ApxSystem **out);

// Releases a handle. Null is ignored.
//
// # Safety
// `sys` must come from an `apx_system_*` constructor and not be used again.
void apx_system_free(struct ApxSystem *sys);

// Input dimension of the system, or 0 for a null handle.
//
// # Safety
// `sys` must be null or a live handle.
size_t apx_system_dim(const struct ApxSystem *sys);

// Evaluates at the comma-separated rational point to precision index `n`.
// A `budget` of 0 uses the default schedule. Writes
// `{"value", "precision_index", "search_steps"}` to `out_json`.
//
// # Safety
// `sys` must be a live handle, `point` a nul-terminated string and
// `out_json` a writable pointer.
enum ApxStatus apx_eval(const struct ApxSystem *sys,
                        const char *point,
                        uint64_t n,
                        uint64_t budget,
                        char **out_json);

// Writes the quadruple at enumeration index `k` as JSON, or returns
// `NOT_FOUND` when the index holds no member.
//
// # Safety
// `sys` must be a live handle and `out_json` a writable pointer.
enum ApxStatus apx_enumerate(const struct ApxSystem *sys, uint64_t k, char **out_json);

// Membership of a quadruple given as JSON `{"a": [...], "m", "b", "n"}`.
// Writes 1 when accepted within `budget` steps and 0 otherwise.
//
// # Safety
// `sys` must be a live handle, `quad_json` a nul-terminated string and
// `out` a writable pointer.
enum ApxStatus apx_membership(const struct ApxSystem *sys,
                              const char *quad_json,
                              uint64_t budget,
                              int32_t *out);

// Samples the soundness condition and writes the verdict JSON. Fails with
// `NOT_FOUND` when the system has no reference oracle.
//
// # Safety
// `sys` must be a live handle and `out_json` a writable pointer.
enum ApxStatus apx_verify_condition1(const struct ApxSystem *sys,
                                     uint64_t quads,
                                     uint64_t xi_per_quad,
                                     uint64_t seed,
                                     char **out_json);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used again.
void apx_string_free(char *s);

// The message of the last failed call on this thread, or null. Valid
// until the next failing call on the same thread.
const char *apx_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* APPROXSYS_H */
