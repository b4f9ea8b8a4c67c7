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

// Measurement campaigns against any Adapter, scheduled on an injected
// Clock:
//
//   find_idle_timeout  linear descent of the polling interval from an upper
//                      bound until two consecutive requests hit the same
//                      instance, then confirmation runs at x and x + step.
//   measure_keepalive  poll below the idle timeout and record how long each
//                      instance survives.
//   measure_latency    cold/warm response time per workload.
//
// Exactly one request is in flight at a time.

#ifndef FAASPROBE_CORE_PROBE_ENGINE_HPP_
#define FAASPROBE_CORE_PROBE_ENGINE_HPP_

#include <optional>
#include <string>
#include <vector>

#include "adapter.hpp"
#include "clock.hpp"
#include "lifecycle.hpp"

namespace faasprobe {

struct SearchConfig {
  Duration upper_bound = Duration::minutes(20);
  Duration step = Duration::minutes(1);
  Duration campaign_duration = Duration::hours(5);
  double warm_confirm_threshold = 0.9;

  // Throws ProbeError(kConfig).
  void validate() const;
};

struct IdleTimeoutEstimate {
  Duration x;
  CampaignSummary confirm_at_x;
  CampaignSummary confirm_at_x_plus_1;
  // One entry per interval tried during the descent, longest first.
  std::vector<CampaignSummary> descent;
  std::vector<InvocationRecord> records;
};

struct KeepAliveResult {
  Duration polling_interval;
  std::vector<LifetimeSample> samples;
  Duration max;
  Duration p90;
};

struct LatencyStats {
  double cold_mean_ms = 0;
  double warm_mean_ms = 0;
  int samples = 0;
};

struct LatencySummary {
  LatencyStats fibonacci;
  LatencyStats hello_world;
};

struct EngineOptions {
  // Retries for InvocationFailed(retryable); they never move the schedule.
  int max_retries = 2;
  // Workload used by the idle-timeout and keep-alive campaigns.
  Workload workload = Workload::kFibonacci;
};

class ProbeEngine {
 public:
  ProbeEngine(Adapter& adapter, Clock& clock, EngineOptions options = {})
      : adapter_(adapter), clock_(clock), options_(options) {}

  // Errors: kUpperBoundTooLow when the upper bound interval already shows
  // warm reuse; kBelowSearchResolution when no interval down to `step`
  // does; kInconsistentPlatform (both confirmation summaries attached) when
  // the confirmation runs contradict the descent.
  IdleTimeoutEstimate find_idle_timeout(const SearchConfig& config);

  // Polls every `polling_interval` until `min_generations` instance
  // lifetimes have been observed or `max_duration` has elapsed. Lifetime is
  // first response to last warm response. Throws kNoRecycleObserved when
  // no instance was seen to retire.
  KeepAliveResult measure_keepalive(Duration polling_interval,
                                    Duration max_duration,
                                    int min_generations);

  // Per repetition and workload: wait `cooldown`, invoke (cold sample),
  // invoke again right after the response (warm sample). Throws
  // kStalePlatformAssumption if the post-cooldown call is served warm.
  LatencySummary measure_latency(int repetitions, Duration cooldown);

  // Every record produced by this engine, in order.
  const std::vector<InvocationRecord>& records() const { return records_; }

 private:
  struct Series {
    CampaignSummary summary;
    std::vector<InvocationRecord> records;
  };

  const InvocationRecord& invoke_at(Duration scheduled, Workload workload,
                                    const std::string& campaign);
  Series run_series(Duration start, Duration interval, Duration duration,
                    const std::string& campaign);

  Adapter& adapter_;
  Clock& clock_;
  EngineOptions options_;
  std::optional<InstanceIdentity> previous_;
  std::vector<InvocationRecord> records_;
  std::int64_t sequence_ = 0;
};

// Stable tag for a keep-alive campaign, e.g. "keepalive@5m".
std::string keepalive_tag(Duration polling_interval);

}  // namespace faasprobe

#endif  // FAASPROBE_CORE_PROBE_ENGINE_HPP_
