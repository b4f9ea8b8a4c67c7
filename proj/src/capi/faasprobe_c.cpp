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

#include "faasprobe/faasprobe.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <string>
#include <vector>

#include "config.hpp"
#include "probe_runner.hpp"
#include "report.hpp"
#include "simulator.hpp"

struct fp_simulator {
  faasprobe::Simulator sim;
};

struct fp_probe_run {
  faasprobe::ProbeOutcome outcome;
};

struct fp_diff {
  faasprobe::DiffReport diff;
  std::string text;
  std::string json;
};

namespace {

thread_local std::string g_last_error;

fp_status to_status(faasprobe::ErrorCode code) {
  using faasprobe::ErrorCode;
  switch (code) {
    case ErrorCode::kInvalidArgument: return FP_ERR_INVALID_ARGUMENT;
    case ErrorCode::kConfig: return FP_ERR_CONFIG;
    case ErrorCode::kEmptySamples: return FP_ERR_EMPTY_SAMPLES;
    case ErrorCode::kTimeTravel: return FP_ERR_TIME_TRAVEL;
    case ErrorCode::kUnsorted: return FP_ERR_UNSORTED;
    case ErrorCode::kUpperBoundTooLow: return FP_ERR_UPPER_BOUND_TOO_LOW;
    case ErrorCode::kBelowSearchResolution: return FP_ERR_BELOW_SEARCH_RESOLUTION;
    case ErrorCode::kInconsistentPlatform: return FP_ERR_INCONSISTENT_PLATFORM;
    case ErrorCode::kNoRecycleObserved: return FP_ERR_NO_RECYCLE_OBSERVED;
    case ErrorCode::kStalePlatformAssumption: return FP_ERR_STALE_PLATFORM_ASSUMPTION;
    case ErrorCode::kTargetMismatch: return FP_ERR_TARGET_MISMATCH;
    case ErrorCode::kInvocationFailed: return FP_ERR_INVOCATION_FAILED;
    case ErrorCode::kIdentityUnavailable: return FP_ERR_IDENTITY_UNAVAILABLE;
    case ErrorCode::kIo: return FP_ERR_IO;
    case ErrorCode::kParse: return FP_ERR_PARSE;
  }
  return FP_ERR_INTERNAL;
}

fp_status fail(fp_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

// Runs `fn`, translating exceptions into status codes.
template <class Fn>
fp_status guarded(Fn&& fn) {
  g_last_error.clear();
  try {
    fn();
    return FP_OK;
  } catch (const faasprobe::ProbeError& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(FP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(FP_ERR_INTERNAL, e.what());
  }
}

char* dup_string(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* fp_version(void) { return FAASPROBE_VERSION; }

const char* fp_last_error(void) { return g_last_error.c_str(); }

const char* fp_status_name(fp_status status) {
  switch (status) {
    case FP_OK: return "OK";
    case FP_ERR_INTERNAL: return "InternalError";
    default:
      if (status > FP_OK && status <= FP_ERR_PARSE) {
        return faasprobe::error_code_name(
                   static_cast<faasprobe::ErrorCode>(status - 1)).data();
      }
      return "Unknown";
  }
}

void fp_string_free(char* s) { std::free(s); }

fp_status fp_presets_json(char** out_json) {
  if (out_json == nullptr) return fail(FP_ERR_INVALID_ARGUMENT, "null out_json");
  return guarded([&] { *out_json = dup_string(faasprobe::presets_json().dump(2)); });
}

fp_status fp_nearest_rank_percentile(const int64_t* samples_ms, size_t count,
                                     int p, int64_t* out_ms) {
  if (out_ms == nullptr || (samples_ms == nullptr && count > 0)) {
    return fail(FP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    std::vector<faasprobe::Duration> samples;
    samples.reserve(count);
    for (size_t i = 0; i < count; ++i) {
      if (samples_ms[i] < 0) {
        throw faasprobe::ProbeError(faasprobe::ErrorCode::kInvalidArgument,
                                    "negative sample");
      }
      samples.push_back(faasprobe::Duration::millis(samples_ms[i]));
    }
    *out_ms = faasprobe::nearest_rank_percentile(samples, p).ms();
  });
}

fp_status fp_simulator_create_preset(const char* preset, uint64_t seed,
                                     fp_simulator** out) {
  if (preset == nullptr || out == nullptr) {
    return fail(FP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    *out = new fp_simulator{faasprobe::Simulator(faasprobe::preset(preset), seed)};
  });
}

fp_status fp_simulator_create_json(const char* policy_json, uint64_t seed,
                                   fp_simulator** out) {
  if (policy_json == nullptr || out == nullptr) {
    return fail(FP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    auto doc = nlohmann::json::parse(policy_json, nullptr, false);
    if (doc.is_discarded()) {
      throw faasprobe::ProbeError(faasprobe::ErrorCode::kConfig,
                                  "policy is not valid JSON");
    }
    *out = new fp_simulator{faasprobe::Simulator(faasprobe::policy_from_json(doc), seed)};
  });
}

void fp_simulator_destroy(fp_simulator* sim) { delete sim; }

fp_status fp_simulator_invoke(fp_simulator* sim, int64_t at_ms,
                              fp_workload workload, fp_invocation* out) {
  if (sim == nullptr || out == nullptr || at_ms < 0) {
    return fail(FP_ERR_INVALID_ARGUMENT, "null handle or negative time");
  }
  return guarded([&] {
    const auto w = workload == FP_WORKLOAD_HELLO ? faasprobe::Workload::kHelloWorld
                                                 : faasprobe::Workload::kFibonacci;
    const auto rec = sim->sim.invoke(faasprobe::Duration::millis(at_ms), w);
    out->at_ms = rec.sent_at.ms();
    out->latency_ms = rec.latency.ms();
    out->start_kind = rec.start_kind == faasprobe::StartKind::kCold ? FP_START_COLD
                      : rec.start_kind == faasprobe::StartKind::kWarm ? FP_START_WARM
                                                                      : FP_START_UNKNOWN;
    std::memset(out->identity, 0, sizeof out->identity);
    std::strncpy(out->identity, rec.identity.str().c_str(), sizeof out->identity - 1);
  });
}

fp_status fp_probe_run_config(const char* config_path, fp_probe_run** out) {
  if (config_path == nullptr || out == nullptr) {
    return fail(FP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    const auto config =
        faasprobe::load_probe_config(config_path, faasprobe::seed_from_environment());
    *out = new fp_probe_run{faasprobe::run_probe_and_persist(config)};
  });
}

int fp_probe_run_exit_code(const fp_probe_run* run) {
  return run ? run->outcome.exit_code : 1;
}

const char* fp_probe_run_summary(const fp_probe_run* run) {
  return run ? run->outcome.summary.c_str() : "";
}

const char* fp_probe_run_report_path(const fp_probe_run* run) {
  return run ? run->outcome.report_path.c_str() : "";
}

const char* fp_probe_run_records_path(const fp_probe_run* run) {
  return run ? run->outcome.records_path.c_str() : "";
}

void fp_probe_run_destroy(fp_probe_run* run) { delete run; }

fp_status fp_diff_reports(const char* const* report_paths, size_t count,
                          fp_diff** out) {
  if (out == nullptr || (report_paths == nullptr && count > 0)) {
    return fail(FP_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    std::vector<faasprobe::CampaignReport> reports;
    for (size_t i = 0; i < count; ++i) {
      if (report_paths[i] == nullptr) {
        throw faasprobe::ProbeError(faasprobe::ErrorCode::kInvalidArgument,
                                    "null report path");
      }
      reports.push_back(faasprobe::read_report_file(report_paths[i]));
    }
    auto diff = faasprobe::compare_checkpoints(std::move(reports));
    auto text = faasprobe::format_diff(diff);
    auto json = faasprobe::diff_to_json(diff).dump(2);
    *out = new fp_diff{std::move(diff), std::move(text), std::move(json)};
  });
}

size_t fp_diff_change_count(const fp_diff* diff) {
  return diff ? diff->diff.changes.size() : 0;
}

const char* fp_diff_text(const fp_diff* diff) { return diff ? diff->text.c_str() : ""; }

const char* fp_diff_json(const fp_diff* diff) { return diff ? diff->json.c_str() : ""; }

void fp_diff_destroy(fp_diff* diff) { delete diff; }

}  // extern "C"
