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

#include "lifecycle.hpp"

#include <algorithm>

namespace faasprobe {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kEmptySamples: return "EmptySamples";
    case ErrorCode::kTimeTravel: return "ErrorTimeTravel";
    case ErrorCode::kUnsorted: return "ErrorUnsorted";
    case ErrorCode::kUpperBoundTooLow: return "UpperBoundTooLow";
    case ErrorCode::kBelowSearchResolution: return "BelowSearchResolution";
    case ErrorCode::kInconsistentPlatform: return "InconsistentPlatform";
    case ErrorCode::kNoRecycleObserved: return "NoRecycleObserved";
    case ErrorCode::kStalePlatformAssumption: return "StalePlatformAssumption";
    case ErrorCode::kTargetMismatch: return "TargetMismatch";
    case ErrorCode::kInvocationFailed: return "InvocationFailed";
    case ErrorCode::kIdentityUnavailable: return "IdentityUnavailable";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kParse: return "ParseError";
  }
  return "Unknown";
}

InstanceIdentity::InstanceIdentity(std::string id) : id_(std::move(id)) {
  if (id_.empty()) {
    throw ProbeError(ErrorCode::kInvalidArgument, "empty instance identity");
  }
}

std::string_view to_string(StartKind kind) {
  switch (kind) {
    case StartKind::kCold: return "cold";
    case StartKind::kWarm: return "warm";
    case StartKind::kUnknown: return "unknown";
  }
  return "unknown";
}

std::string_view to_string(Workload workload) {
  return workload == Workload::kFibonacci ? "fib" : "hello";
}

StartKind parse_start_kind(std::string_view text) {
  if (text == "cold") return StartKind::kCold;
  if (text == "warm") return StartKind::kWarm;
  if (text == "unknown") return StartKind::kUnknown;
  throw ProbeError(ErrorCode::kParse,
                   "unknown start kind '" + std::string(text) + "'");
}

Workload parse_workload(std::string_view text) {
  if (text == "fib") return Workload::kFibonacci;
  if (text == "hello") return Workload::kHelloWorld;
  throw ProbeError(ErrorCode::kParse,
                   "unknown workload '" + std::string(text) + "'");
}

StartKind classify_start(const std::optional<InstanceIdentity>& previous,
                         const InstanceIdentity& current,
                         std::optional<bool> adapter_cold_flag) {
  if (adapter_cold_flag) {
    return *adapter_cold_flag ? StartKind::kCold : StartKind::kWarm;
  }
  if (!previous) return StartKind::kUnknown;
  return *previous == current ? StartKind::kWarm : StartKind::kCold;
}

Duration nearest_rank_percentile(std::span<const Duration> samples, int p) {
  if (samples.empty()) {
    throw ProbeError(ErrorCode::kEmptySamples, "percentile of empty sample set");
  }
  if (p < 1 || p > 100) {
    throw ProbeError(ErrorCode::kInvalidArgument,
                     "percentile must be in [1, 100], got " + std::to_string(p));
  }
  std::vector<Duration> sorted(samples.begin(), samples.end());
  const std::size_t n = sorted.size();
  // ceil(p * n / 100) in integer arithmetic; always in [1, n].
  const std::size_t rank = (static_cast<std::size_t>(p) * n + 99) / 100;
  auto nth = sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1);
  std::nth_element(sorted.begin(), nth, sorted.end());
  return *nth;
}

LifetimeSummary summarize_lifetimes(std::span<const LifetimeSample> samples) {
  if (samples.empty()) {
    throw ProbeError(ErrorCode::kEmptySamples, "no lifetime samples");
  }
  std::vector<Duration> lifetimes;
  lifetimes.reserve(samples.size());
  for (const auto& s : samples) lifetimes.push_back(s.lifetime());
  return LifetimeSummary{
      .max = *std::max_element(lifetimes.begin(), lifetimes.end()),
      .p90 = nearest_rank_percentile(lifetimes, 90),
      .count = lifetimes.size(),
  };
}

}  // namespace faasprobe
