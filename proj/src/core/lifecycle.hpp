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

// Shared domain types for the prober and the simulator: durations,
// instance identities, per-invocation observations, and the few statistics
// the reports need.

#ifndef FAASPROBE_CORE_LIFECYCLE_HPP_
#define FAASPROBE_CORE_LIFECYCLE_HPP_

#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"

namespace faasprobe {

// Non-negative millisecond quantity. Arithmetic saturates: sums clamp at
// Duration::max(), differences clamp at zero.
class Duration {
 public:
  using rep = std::int64_t;

  constexpr Duration() = default;

  static constexpr Duration millis(rep ms) { return Duration(ms < 0 ? 0 : ms); }
  static constexpr Duration seconds(rep s) { return scaled(s, 1000); }
  static constexpr Duration minutes(rep m) { return scaled(m, 60'000); }
  static constexpr Duration hours(rep h) { return scaled(h, 3'600'000); }
  static constexpr Duration max() {
    return Duration(std::numeric_limits<rep>::max());
  }

  constexpr rep ms() const { return value_; }
  // Floor to whole minutes; reports are minute-accurate.
  constexpr rep whole_minutes() const { return value_ / 60'000; }

  friend constexpr Duration operator+(Duration a, Duration b) {
    if (a.value_ > std::numeric_limits<rep>::max() - b.value_) return max();
    return Duration(a.value_ + b.value_);
  }
  friend constexpr Duration operator-(Duration a, Duration b) {
    return Duration(a.value_ > b.value_ ? a.value_ - b.value_ : 0);
  }
  friend constexpr Duration operator*(Duration a, rep k) {
    if (k <= 0 || a.value_ == 0) return Duration();
    if (a.value_ > std::numeric_limits<rep>::max() / k) return max();
    return Duration(a.value_ * k);
  }
  constexpr Duration& operator+=(Duration o) { return *this = *this + o; }

  friend constexpr auto operator<=>(Duration, Duration) = default;

 private:
  constexpr explicit Duration(rep v) : value_(v) {}

  static constexpr Duration scaled(rep n, rep unit) {
    return Duration(unit) * n;
  }

  rep value_ = 0;
};

// Opaque per-instance token (log stream name, platform dimension, or a
// self-generated UUID). Never empty; compared byte for byte.
class InstanceIdentity {
 public:
  explicit InstanceIdentity(std::string id);

  const std::string& str() const { return id_; }

  friend bool operator==(const InstanceIdentity&,
                         const InstanceIdentity&) = default;

 private:
  std::string id_;
};

enum class StartKind { kCold, kWarm, kUnknown };
enum class Workload { kFibonacci, kHelloWorld };

std::string_view to_string(StartKind kind);
std::string_view to_string(Workload workload);
StartKind parse_start_kind(std::string_view text);
// Accepts "fib" / "hello".
Workload parse_workload(std::string_view text);

struct InvocationRecord {
  std::int64_t sequence_no = 0;
  // Tags the campaign the record belongs to, e.g. "idle-search" or
  // "keepalive@5m"; records sharing a tag form one replayable trace.
  std::string campaign;
  Duration scheduled_at;
  Duration sent_at;
  Duration latency;
  InstanceIdentity identity{"-"};
  StartKind start_kind = StartKind::kUnknown;
  Workload workload = Workload::kFibonacci;
  int retries = 0;

  bool operator==(const InvocationRecord&) const = default;
};

struct LifetimeSample {
  Duration first_warm_at;
  Duration last_warm_at;
  InstanceIdentity identity{"-"};

  Duration lifetime() const { return last_warm_at - first_warm_at; }
  bool operator==(const LifetimeSample&) const = default;
};

struct LifetimeSummary {
  Duration max;
  Duration p90;
  std::size_t count = 0;
};

// An adapter-reported creation flag wins; otherwise Warm iff the previous
// request was served by the same identity.
StartKind classify_start(const std::optional<InstanceIdentity>& previous,
                         const InstanceIdentity& current,
                         std::optional<bool> adapter_cold_flag);

// Nearest-rank percentile: the ceil(p/100 * n)-th smallest sample (1-based).
// Throws ProbeError(kEmptySamples) on empty input and kInvalidArgument when
// p is outside [1, 100].
Duration nearest_rank_percentile(std::span<const Duration> samples, int p);

LifetimeSummary summarize_lifetimes(std::span<const LifetimeSample> samples);

}  // namespace faasprobe

#endif  // FAASPROBE_CORE_LIFECYCLE_HPP_
