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

#ifndef FAASPROBE_CORE_POLICY_HPP_
#define FAASPROBE_CORE_POLICY_HPP_

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"
#include "lifecycle.hpp"

namespace faasprobe {

// Every instance is recycled once its age exceeds `cap`.
struct StaticCap {
  Duration cap;
  bool operator==(const StaticCap&) const = default;
};

// Caps are drawn by cycling `lifetimes`, starting at an index derived from
// the simulator seed.
struct EmpiricalCap {
  std::vector<Duration> lifetimes;
  bool operator==(const EmpiricalCap&) const = default;
};

// Cap chosen by the inter-arrival gap observed when the instance is
// created: the first rule whose closed range [low, high] contains the gap,
// else `default_cap`. Models platforms that treat frequent polling
// differently from sparse polling.
struct PatternRule {
  Duration low;
  Duration high;
  Duration cap;
  bool operator==(const PatternRule&) const = default;
};

struct PatternCap {
  std::vector<PatternRule> rules;
  Duration default_cap;
  bool operator==(const PatternCap&) const = default;
};

using RecycleRule = std::variant<StaticCap, EmpiricalCap, PatternCap>;

// Response time is mean +/- jitter, uniform.
struct LatencyModel {
  Duration cold_mean;
  Duration warm_mean;
  Duration jitter;
  bool operator==(const LatencyModel&) const = default;
};

struct ProviderPolicy {
  std::string name;
  Duration idle_timeout;
  RecycleRule recycle_rule;
  LatencyModel fibonacci;
  LatencyModel hello_world;

  const LatencyModel& latency(Workload w) const {
    return w == Workload::kFibonacci ? fibonacci : hello_world;
  }

  // Throws ProbeError(kConfig) naming the first violated invariant.
  void validate() const;

  bool operator==(const ProviderPolicy&) const = default;
};

std::vector<std::string> preset_names();
// Throws ProbeError(kConfig) for unknown names.
ProviderPolicy preset(std::string_view name);

nlohmann::ordered_json policy_to_json(const ProviderPolicy& policy);
// Validates the result. Unknown keys are rejected.
ProviderPolicy policy_from_json(const nlohmann::json& doc);

}  // namespace faasprobe

#endif  // FAASPROBE_CORE_POLICY_HPP_
