#ifndef UNILIN_UNILIN_H
#define UNILIN_UNILIN_H

#include <stdint.h>

#if defined(_WIN32)
#define UL_API __declspec(dllexport)
#else
#define UL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct ul_context ul_context;

typedef enum ul_status {
  UL_OK = 0,
  UL_ERR_INVALID_ARGUMENT = 1,
  UL_ERR_ZERO_VECTOR,
  UL_ERR_DEPENDENT_BASIS,
  UL_ERR_NOT_CLOSED,
  UL_ERR_NOT_NILPOTENT,
  UL_ERR_NOT_NILPOTENT_ALGEBRA,
  UL_ERR_EMPTY_CATALOG,
  UL_ERR_TRIVIAL_INTERSECTION,
  UL_ERR_DEGENERATE_LATTICE,
  UL_ERR_RESOLUTION_NOT_REACHED,
  UL_ERR_EXPONENT_VIOLATION,
  UL_ERR_SINGULAR_POINT,
  UL_ERR_PRECISION_EXHAUSTED,
  UL_ERR_PRECONDITION_UNVERIFIABLE,
  UL_ERR_INTERNAL,
  UL_ERR_NULL_HANDLE = 100
} ul_status;

UL_API const char* ul_version(void);

UL_API ul_context* ul_context_new(void);
UL_API void ul_context_free(ul_context* ctx);

// JSON object of constant overrides; replaces earlier overrides.
UL_API ul_status ul_set_constants(ul_context* ctx, const char* constants_json);
UL_API ul_status ul_set_seed(ul_context* ctx, uint64_t seed);
UL_API ul_status ul_set_threads(ul_context* ctx, int threads);

// Runs one command. On success *report_json (and *csv when non-null) receive strings owned by the
// caller, released with ul_free_string. *csv is set to an empty string for commands without rows.
UL_API ul_status ul_run(ul_context* ctx, const char* command, const char* params_json, char** report_json,
                        char** csv);
// Full config object: {"command", "params", "constants", "seed", "threads"}.
UL_API ul_status ul_run_config(ul_context* ctx, const char* config_json, char** report_json, char** csv);

// Human-readable summary of the last successful run.
UL_API const char* ul_last_summary(const ul_context* ctx);
// Machine-readable error JSON of the last failed call, or "" after a success.
UL_API const char* ul_last_error(const ul_context* ctx);
UL_API const char* ul_status_name(ul_status status);
// Process exit code for a status: 0 ok, 2 module or precondition error, 3 internal.
UL_API int ul_exit_code(ul_status status);
// Newline-separated command names; static storage.
UL_API const char* ul_commands(void);

UL_API void ul_free_string(char* s);

#ifdef __cplusplus
}
#endif

#endif
