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

#ifndef FAASPROBE_CORE_CONFIG_HPP_
#define FAASPROBE_CORE_CONFIG_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adapter.hpp"
#include "json.hpp"
#include "policy.hpp"
#include "probe_engine.hpp"

namespace faasprobe {

struct TargetConfig {
  enum class Kind { kSimulator, kHttp };
  Kind kind = Kind::kSimulator;
  // Simulator targets.
  std::optional<std::string> preset;
  std::optional<ProviderPolicy> policy;
  // HTTP targets.
  HttpTargetOptions http;
  int retries = 2;
  Workload workload = Workload::kFibonacci;
  // Recorded only; lets a memory sweep be labelled per run.
  std::optional<int> memory_mb;
};

struct KeepAliveConfig {
  // Empty: poll at the estimated idle timeout.
  std::vector<Duration> intervals;
  Duration max_duration = Duration::hours(720);
  int min_generations = 10;
};

struct LatencyConfig {
  int repetitions = 10;
  // Unset: estimated idle timeout + step, or upper bound + step.
  std::optional<Duration> cooldown;
};

struct OutputConfig {
  std::string dir = ".";
  std::string label;
  std::optional<std::string> checkpoint;
  std::optional<std::string> started_at;
};

struct ProbeConfig {
  std::uint64_t seed = 1;
  TargetConfig target;
  SearchConfig search;
  bool run_search = false;
  std::optional<KeepAliveConfig> keepalive;
  std::optional<LatencyConfig> latency;
  OutputConfig output;

  // The policy a simulator target runs; throws kConfig for http targets.
  ProviderPolicy simulator_policy() const;
};

// Strict schema: unknown keys, wrong types, and violated invariants throw
// ProbeError(kConfig) before any campaign starts. `seed_override` (from
// PROBE_SEED) replaces the configured seed.
ProbeConfig parse_probe_config(const nlohmann::json& doc,
                               std::optional<std::uint64_t> seed_override = {});
ProbeConfig load_probe_config(const std::string& path,
                              std::optional<std::uint64_t> seed_override = {});

// Reads PROBE_SEED; throws kConfig if set but not an unsigned integer.
std::optional<std::uint64_t> seed_from_environment();

// The configuration with every default expanded.
nlohmann::ordered_json effective_config_json(const ProbeConfig& config);

}  // namespace faasprobe

#endif  // FAASPROBE_CORE_CONFIG_HPP_
