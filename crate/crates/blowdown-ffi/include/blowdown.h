/* C ABI for the blowdown lattice-arithmetic library. */

#ifndef BLOWDOWN_H
#define BLOWDOWN_H

/* This file is generated from the Rust sources by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Status of a C ABI call.
typedef enum BdStatus {
  // The call succeeded and all `out` parameters are set.
  BdStatus_Ok = 0,
  // A required pointer argument was NULL.
  BdStatus_NullArgument = 1,
  // Input could not be parsed or referenced an unknown name.
  BdStatus_InvalidInput = 2,
  // Input parsed but violated a mathematical precondition.
  BdStatus_Precondition = 3,
  // The computation ran and a verified claim or scripted expectation
  // failed.
  BdStatus_CheckFailed = 4,
  // A string argument was not valid UTF-8 (or a result could not be
  // encoded as a C string).
  BdStatus_InvalidUtf8 = 5,
  // An internal panic was caught at the boundary.
  BdStatus_Panic = 6,
} BdStatus;

// An opaque parsed manifest.
typedef struct BdManifest BdManifest;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string. Do not free.
const char *bd_version(void);

// Returns the most recent error message on this thread as a new string,
// or NULL when the last call succeeded. The caller owns the result and
// must release it with [`bd_string_free`].
char *bd_last_error_message(void);

// Releases a string returned by this library.
//
// # Safety
// `s` must be NULL or a pointer previously returned through a `char **`
// out parameter (or [`bd_last_error_message`]) of this library, not yet
// freed.
void bd_string_free(char *s);

// Parses manifest text into an opaque handle.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be a valid writable
// pointer. On success `*out` owns the handle and must be released with
// [`bd_manifest_free`].
enum BdStatus bd_manifest_parse(const char *text, struct BdManifest **out);

// Loads a builtin manifest by name (see `bd_dataset_json` for the list).
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be a valid writable
// pointer. On success `*out` owns the handle and must be released with
// [`bd_manifest_free`].
enum BdStatus bd_manifest_builtin(const char *name, struct BdManifest **out);

// Releases a manifest handle.
//
// # Safety
// `handle` must be NULL or a pointer returned by [`bd_manifest_parse`] or
// [`bd_manifest_builtin`], not yet freed.
void bd_manifest_free(struct BdManifest *handle);

// Serializes a manifest's JSON mirror.
//
// # Safety
// `handle` must be a live manifest handle; `out` must be a valid writable
// pointer. The result string must be released with [`bd_string_free`].
enum BdStatus bd_manifest_to_json(const struct BdManifest *handle, char **out);

// Enumerates basic classes for the manifest's chamber and writes the
// report's JSON mirror.
//
// # Safety
// `handle` must be a live manifest handle; `out` must be a valid writable
// pointer. The result string must be released with [`bd_string_free`].
enum BdStatus bd_enumerate_json(const struct BdManifest *handle, uintptr_t workers, char **out);

// Chamber SW value of a characteristic class on the manifest's model, in
// the manifest's chamber. A moduli space that is empty for dimension
// reasons writes 0 and sets `dimension_forced`.
//
// # Safety
// `handle` must be a live manifest handle; `coords` must point to `len`
// readable values; `out_value` must be a valid writable pointer;
// `dimension_forced` may be NULL when the caller does not need it.
enum BdStatus bd_sw_value(const struct BdManifest *handle,
                          const int64_t *coords,
                          uintptr_t len,
                          int64_t *out_value,
                          bool *dimension_forced);

// Decides descent of a characteristic class through the manifest's named
// configuration (pass NULL to use the manifest's only configuration).
//
// # Safety
// `handle` must be a live manifest handle; `config_name` may be NULL;
// `coords` must point to `len` readable values; `out_liftable` must be a
// valid writable pointer.
enum BdStatus bd_lift_check(const struct BdManifest *handle,
                            const char *config_name,
                            const int64_t *coords,
                            uintptr_t len,
                            bool *out_liftable);

// Reduces a characteristic vector (coordinates `h, e1, ..., em`) to its
// normal form and writes a JSON object with the result, the step count,
// and the basis images of the reducing isometry.
//
// # Safety
// `coords` must point to `len` readable values; `out` must be a valid
// writable pointer. The result string must be released with
// [`bd_string_free`].
enum BdStatus bd_reduce_json(const int64_t *coords, uintptr_t len, char **out);

// Replays handle-move script text and writes the outcome's JSON mirror.
// A script whose moves or expectations fail returns
// [`BdStatus::CheckFailed`] with the detail in the error message.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be a valid writable
// pointer. The result string must be released with [`bd_string_free`].
enum BdStatus bd_replay_json(const char *text, char **out);

// Replays a builtin script by name and writes the outcome's JSON mirror.
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be a valid writable
// pointer. The result string must be released with [`bd_string_free`].
enum BdStatus bd_replay_builtin_json(const char *name, char **out);

// Runs the verification battery (pass NULL to run every section, or a
// section name/prefix) and writes the section report's JSON mirror. All
// checks passing returns OK; any failing check returns
// [`BdStatus::CheckFailed`] with the JSON still written.
//
// # Safety
// `section` may be NULL; `out` must be a valid writable pointer. The
// result string must be released with [`bd_string_free`].
enum BdStatus bd_verify_json(const char *section, char **out);

// Writes the embedded dataset (manifest and script texts, keyed by name)
// as a JSON object.
//
// # Safety
// `out` must be a valid writable pointer. The result string must be
// released with [`bd_string_free`].
enum BdStatus bd_dataset_json(char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* BLOWDOWN_H */
