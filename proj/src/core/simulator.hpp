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

// Discrete-event model of one function's container lifecycle. Time is
// supplied by the caller, so a multi-hour campaign runs in microseconds.
//
// Decommission rule, evaluated at each arrival `at`:
//   dead  iff  at - last_served_at > idle_timeout
//          or  at - created_at     > assigned_cap
// Equality on either side keeps the instance warm.

#ifndef FAASPROBE_CORE_SIMULATOR_HPP_
#define FAASPROBE_CORE_SIMULATOR_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "lifecycle.hpp"
#include "policy.hpp"

namespace faasprobe {

// Position in an EmpiricalCap lifetime list; starts at the simulator seed
// and advances by one per created instance.
struct CapCursor {
  std::uint64_t next = 0;
};

Duration assign_cap(const RecycleRule& rule,
                    std::optional<Duration> observed_interval,
                    CapCursor& cursor);

class Simulator {
 public:
  struct LiveInstance {
    InstanceIdentity identity;
    Duration created_at;
    Duration last_served_at;
    Duration assigned_cap;
  };

  Simulator(ProviderPolicy policy, std::uint64_t seed);

  // Throws ProbeError(kTimeTravel) if `at` precedes the previous arrival.
  InvocationRecord invoke(Duration at, Workload workload);

  const ProviderPolicy& policy() const { return policy_; }
  const std::optional<LiveInstance>& live_instance() const { return live_; }
  std::uint64_t instances_created() const { return instance_counter_; }

 private:
  bool alive_at(Duration at) const;
  Duration draw_latency(const LatencyModel& model, bool cold);

  ProviderPolicy policy_;
  std::mt19937_64 rng_;
  CapCursor cursor_;
  std::optional<LiveInstance> live_;
  std::optional<Duration> last_arrival_;
  std::uint64_t instance_counter_ = 0;
  std::int64_t sequence_ = 0;
};

// Feeds strictly increasing arrival times through a fresh simulator.
// Throws ProbeError(kUnsorted) otherwise.
std::vector<InvocationRecord> run_trace(
    const ProviderPolicy& policy, std::span<const Duration> invocation_times,
    std::uint64_t seed, Workload workload = Workload::kFibonacci);

}  // namespace faasprobe

#endif  // FAASPROBE_CORE_SIMULATOR_HPP_
