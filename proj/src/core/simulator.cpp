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

#include "simulator.hpp"

#include <string>

namespace faasprobe {

Duration assign_cap(const RecycleRule& rule,
                    std::optional<Duration> observed_interval,
                    CapCursor& cursor) {
  if (const auto* s = std::get_if<StaticCap>(&rule)) return s->cap;
  if (const auto* e = std::get_if<EmpiricalCap>(&rule)) {
    const auto n = e->lifetimes.size();
    return e->lifetimes[cursor.next++ % n];
  }
  const auto& p = std::get<PatternCap>(rule);
  if (observed_interval) {
    for (const auto& r : p.rules) {
      if (r.low <= *observed_interval && *observed_interval <= r.high) {
        return r.cap;
      }
    }
  }
  return p.default_cap;
}

Simulator::Simulator(ProviderPolicy policy, std::uint64_t seed)
    : policy_(std::move(policy)), rng_(seed), cursor_{seed} {
  policy_.validate();
}

bool Simulator::alive_at(Duration at) const {
  if (!live_) return false;
  const bool idle_expired = at - live_->last_served_at > policy_.idle_timeout;
  const bool cap_expired = at - live_->created_at > live_->assigned_cap;
  return !idle_expired && !cap_expired;
}

Duration Simulator::draw_latency(const LatencyModel& model, bool cold) {
  const auto mean = (cold ? model.cold_mean : model.warm_mean).ms();
  const auto j = model.jitter.ms();
  if (j == 0) return Duration::millis(mean);
  std::uniform_int_distribution<std::int64_t> dist(mean - j, mean + j);
  return Duration::millis(dist(rng_));
}

InvocationRecord Simulator::invoke(Duration at, Workload workload) {
  if (last_arrival_ && at < *last_arrival_) {
    throw ProbeError(ErrorCode::kTimeTravel,
                     "invocation at " + std::to_string(at.ms()) +
                         " ms precedes previous arrival at " +
                         std::to_string(last_arrival_->ms()) + " ms");
  }
  std::optional<Duration> gap;
  if (last_arrival_) gap = at - *last_arrival_;
  last_arrival_ = at;

  const bool cold = !alive_at(at);
  if (cold) {
    ++instance_counter_;
    live_ = LiveInstance{
        .identity = InstanceIdentity("sim-" + std::to_string(instance_counter_)),
        .created_at = at,
        .last_served_at = at,
        .assigned_cap = assign_cap(policy_.recycle_rule, gap, cursor_),
    };
  } else {
    live_->last_served_at = at;
  }

  return InvocationRecord{
      .sequence_no = ++sequence_,
      .campaign = "sim",
      .scheduled_at = at,
      .sent_at = at,
      .latency = draw_latency(policy_.latency(workload), cold),
      .identity = live_->identity,
      .start_kind = cold ? StartKind::kCold : StartKind::kWarm,
      .workload = workload,
  };
}

std::vector<InvocationRecord> run_trace(
    const ProviderPolicy& policy, std::span<const Duration> invocation_times,
    std::uint64_t seed, Workload workload) {
  for (std::size_t i = 1; i < invocation_times.size(); ++i) {
    if (invocation_times[i] <= invocation_times[i - 1]) {
      throw ProbeError(ErrorCode::kUnsorted,
                       "invocation times not strictly increasing at index " +
                           std::to_string(i));
    }
  }
  Simulator sim(policy, seed);
  std::vector<InvocationRecord> out;
  out.reserve(invocation_times.size());
  for (auto t : invocation_times) out.push_back(sim.invoke(t, workload));
  return out;
}

}  // namespace faasprobe
