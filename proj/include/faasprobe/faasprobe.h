// Copyright 2026 The faasprobe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * faasprobe C API.
 *
 * Every function returns an fp_status; on failure a message describing the
 * error is available from fp_last_error() on the calling thread until the
 * next API call on that thread. Handles are opaque and owned by the caller;
 * release them with the matching *_destroy function. Strings returned
 * through `char**` out-parameters must be released with fp_string_free().
 * Strings returned directly (const char*) are owned by the handle.
 *
 * Durations are milliseconds.
 */

#ifndef FAASPROBE_FAASPROBE_H_
#define FAASPROBE_FAASPROBE_H_

#include <stddef.h>
#include <stdint.h>

#if defined(FAASPROBE_BUILDING_LIBRARY)
#define FP_API __attribute__((visibility("default")))
#else
#define FP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fp_status {
  FP_OK = 0,
  FP_ERR_INVALID_ARGUMENT = 1,
  FP_ERR_CONFIG = 2,
  FP_ERR_EMPTY_SAMPLES = 3,
  FP_ERR_TIME_TRAVEL = 4,
  FP_ERR_UNSORTED = 5,
  FP_ERR_UPPER_BOUND_TOO_LOW = 6,
  FP_ERR_BELOW_SEARCH_RESOLUTION = 7,
  FP_ERR_INCONSISTENT_PLATFORM = 8,
  FP_ERR_NO_RECYCLE_OBSERVED = 9,
  FP_ERR_STALE_PLATFORM_ASSUMPTION = 10,
  FP_ERR_TARGET_MISMATCH = 11,
  FP_ERR_INVOCATION_FAILED = 12,
  FP_ERR_IDENTITY_UNAVAILABLE = 13,
  FP_ERR_IO = 14,
  FP_ERR_PARSE = 15,
  FP_ERR_INTERNAL = 99
} fp_status;

typedef enum fp_workload { FP_WORKLOAD_FIB = 0, FP_WORKLOAD_HELLO = 1 } fp_workload;

typedef enum fp_start_kind {
  FP_START_COLD = 0,
  FP_START_WARM = 1,
  FP_START_UNKNOWN = 2
} fp_start_kind;

FP_API const char* fp_version(void);
FP_API const char* fp_last_error(void);
FP_API const char* fp_status_name(fp_status status);
FP_API void fp_string_free(char* s);

/* JSON array of the shipped provider policies. */
FP_API fp_status fp_presets_json(char** out_json);

/* Nearest-rank percentile over `count` non-negative samples, p in [1,100]. */
FP_API fp_status fp_nearest_rank_percentile(const int64_t* samples_ms,
                                            size_t count, int p,
                                            int64_t* out_ms);

/* ---- simulator ---------------------------------------------------------- */

typedef struct fp_simulator fp_simulator;

typedef struct fp_invocation {
  int64_t at_ms;
  int64_t latency_ms;
  fp_start_kind start_kind;
  /* NUL-terminated instance identity, e.g. "sim-1". */
  char identity[64];
} fp_invocation;

FP_API fp_status fp_simulator_create_preset(const char* preset, uint64_t seed,
                                            fp_simulator** out);
FP_API fp_status fp_simulator_create_json(const char* policy_json,
                                          uint64_t seed, fp_simulator** out);
FP_API void fp_simulator_destroy(fp_simulator* sim);
FP_API fp_status fp_simulator_invoke(fp_simulator* sim, int64_t at_ms,
                                     fp_workload workload, fp_invocation* out);

/* ---- probe runs --------------------------------------------------------- */

typedef struct fp_probe_run fp_probe_run;

/*
 * Loads and validates a probe config (PROBE_SEED overrides its seed), runs
 * the requested campaigns and writes the report and JSONL observation log.
 * FP_OK means the run executed; campaign failures are reported through
 * fp_probe_run_exit_code() and the report's error list. A config that fails
 * validation returns FP_ERR_CONFIG and no handle.
 */
FP_API fp_status fp_probe_run_config(const char* config_path, fp_probe_run** out);
/* 0 success, 1 config/transport error, 2 inconsistent platform. */
FP_API int fp_probe_run_exit_code(const fp_probe_run* run);
FP_API const char* fp_probe_run_summary(const fp_probe_run* run);
FP_API const char* fp_probe_run_report_path(const fp_probe_run* run);
FP_API const char* fp_probe_run_records_path(const fp_probe_run* run);
FP_API void fp_probe_run_destroy(fp_probe_run* run);

/* ---- checkpoint diff ---------------------------------------------------- */

typedef struct fp_diff fp_diff;

FP_API fp_status fp_diff_reports(const char* const* report_paths, size_t count,
                                 fp_diff** out);
FP_API size_t fp_diff_change_count(const fp_diff* diff);
FP_API const char* fp_diff_text(const fp_diff* diff);
FP_API const char* fp_diff_json(const fp_diff* diff);
FP_API void fp_diff_destroy(fp_diff* diff);

#ifdef __cplusplus
}
#endif

#endif /* FAASPROBE_FAASPROBE_H_ */
