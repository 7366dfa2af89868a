/* C interface to shadowlab. Every call returns an sl_status; results come
 * back as JSON text owned by the caller and released with sl_string_free.
 * The message of the last failure on the calling thread is available from
 * sl_last_error_message. */
#ifndef SHADOWLAB_H
#define SHADOWLAB_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(SHADOWLAB_BUILDING_LIBRARY)
#define SL_API __attribute__((visibility("default")))
#else
#define SL_API
#endif

typedef enum sl_status {
  SL_OK = 0,
  SL_INVALID_ARGUMENT = 1,
  SL_DOMAIN = 2,
  SL_UNSUPPORTED = 3,
  SL_INFEASIBLE = 4,
  SL_PARSE = 5,
  SL_IO = 6,
  SL_LIMIT = 7,
  SL_INTERNAL = 99
} sl_status;

typedef struct sl_system sl_system;

SL_API const char* sl_version(void);
SL_API const char* sl_last_error_message(void);
SL_API void sl_string_free(char* s);

/* spec_json: {"kind": "pl" | "tent" | "quadratic" | "logistic" | "cantor" |
 * "sft" | "odometer" | "slimit", ...}. */
SL_API sl_status sl_system_create(const char* spec_json, sl_system** out);
SL_API void sl_system_free(sl_system* s);
/* Canonical JSON form of the system. */
SL_API sl_status sl_system_describe(const sl_system* s, char** out_json);

/* orbit_json: {"points": [...], "claimedDelta": ..., "schedule": ...} or a
 * bare array of points. options_json may be NULL or
 * {"transcript": bool, "precision": n, "maxPrecision": n}. */
SL_API sl_status sl_shadow_oracle(const sl_system* s, const char* orbit_json, const char* epsilon,
                                  const char* options_json, char** out_json);
SL_API sl_status sl_h_shadow_solve(const sl_system* s, const char* orbit_json, const char* epsilon,
                                   const char* options_json, char** out_json);

/* request_json: {"property": "expanding" | "star" | "ball_expanding" |
 * "open_on" | "locally_injective" | "positively_expansive" | "theorem25",
 * "region": [[lo, hi], ...] or "points": [...], "delta", "mu", "nu",
 * "epsGrid", "b", "horizon", "seed"}. */
SL_API sl_status sl_expansivity_check(const sl_system* s, const char* request_json, char** out_json);

/* request_json: {"target": "RLL..." | "targetLength": n (prefix of K),
 * "horizon": n, "steps": n, "precision": n}. */
SL_API sl_status sl_kneading_search(const char* request_json, char** out_json);

/* params_json may be NULL or {"seed", "precision", "depth", "trials",
 * "extras": {key: value}}. */
SL_API sl_status sl_scenario_run(const char* name, const char* params_json, char** out_report_json);
SL_API sl_status sl_scenario_list(char** out_json);
/* format: "json" or "csv". */
SL_API sl_status sl_report_emit(const char* report_json, const char* format, const char* path);

#ifdef __cplusplus
}
#endif

#endif
