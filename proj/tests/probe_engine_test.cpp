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

#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "probe_engine.hpp"
#include "support/generators.hpp"
#include "support/trace_oracle.hpp"

namespace faasprobe {
namespace {

using testing::simple_policy;

Duration min(long long m) { return Duration::minutes(m); }

// Instance identity decided by a caller-supplied rule over (gap, call).
class RuleAdapter final : public Adapter {
 public:
  using Rule = std::function<bool(Duration at, Duration gap, int call)>;
  explicit RuleAdapter(Rule warm_if) : warm_if_(std::move(warm_if)) {}

  InvocationResponse invoke(Workload, Duration at) override {
    ++calls_;
    const bool warm = last_ && warm_if_(at, at - *last_, calls_);
    if (!warm) ++instance_;
    last_ = at;
    return {InstanceIdentity("r-" + std::to_string(instance_)), std::nullopt,
            Duration::millis(10), {}, 200};
  }
  std::string describe() const override { return "rule"; }

 private:
  Rule warm_if_;
  std::optional<Duration> last_;
  int calls_ = 0;
  int instance_ = 0;
};

// Fails selected attempts before delegating to a simulator.
class FlakyAdapter final : public Adapter {
 public:
  FlakyAdapter(ProviderPolicy policy, std::vector<int> failing_attempts, bool retryable)
      : inner_(std::move(policy), 1), failing_(std::move(failing_attempts)),
        retryable_(retryable) {}

  InvocationResponse invoke(Workload w, Duration at) override {
    ++attempt_;
    if (std::find(failing_.begin(), failing_.end(), attempt_) != failing_.end()) {
      throw ProbeError(ErrorCode::kInvocationFailed, "injected").set_retryable(retryable_);
    }
    return inner_.invoke(w, at);
  }
  std::string describe() const override { return "flaky"; }

 private:
  SimulatorAdapter inner_;
  std::vector<int> failing_;
  bool retryable_;
  int attempt_ = 0;
};

// Lets simulated time pass while a request is in flight, as a wall clock
// would.
class ElapsingAdapter final : public Adapter {
 public:
  ElapsingAdapter(VirtualClock& clock, std::vector<Duration> latencies)
      : clock_(clock), latencies_(std::move(latencies)) {}

  InvocationResponse invoke(Workload, Duration) override {
    const auto latency = latencies_[std::min(call_++, latencies_.size() - 1)];
    clock_.wait_until(clock_.now() + latency);
    return {InstanceIdentity("e-1"), std::nullopt, latency, {}, 200};
  }
  std::string describe() const override { return "elapsing"; }

 private:
  VirtualClock& clock_;
  std::vector<Duration> latencies_;
  std::size_t call_ = 0;
};

Duration estimate_for(const ProviderPolicy& policy, std::uint64_t seed = 1) {
  SimulatorAdapter adapter(policy, seed);
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  return engine.find_idle_timeout({}).x;
}

template <class Fn>
ErrorCode error_of(Fn&& fn) {
  try {
    fn();
  } catch (const ProbeError& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected ProbeError";
  return ErrorCode::kInvalidArgument;
}

TEST(SearchConfigTest, Validation) {
  EXPECT_NO_THROW(SearchConfig{}.validate());
  SearchConfig short_campaign;
  short_campaign.campaign_duration = min(39);
  EXPECT_EQ(error_of([&] { short_campaign.validate(); }), ErrorCode::kConfig);
  SearchConfig bad_step;
  bad_step.step = min(20);
  EXPECT_EQ(error_of([&] { bad_step.validate(); }), ErrorCode::kConfig);
  SearchConfig bad_threshold;
  bad_threshold.warm_confirm_threshold = 0;
  EXPECT_EQ(error_of([&] { bad_threshold.validate(); }), ErrorCode::kConfig);
}

TEST(FindIdleTimeoutTest, Presets) {
  EXPECT_EQ(estimate_for(preset("aws-2021")), min(5));
  EXPECT_EQ(estimate_for(preset("ibm-2021")), min(10));
  EXPECT_EQ(estimate_for(preset("azure-2021")), min(12));
  EXPECT_EQ(estimate_for(preset("aws-2020")), min(10));
  EXPECT_EQ(estimate_for(preset("azure-2020")), min(14));
}

TEST(FindIdleTimeoutTest, FractionalTimeoutFloors) {
  const auto policy = simple_policy(Duration::millis(450'000), StaticCap{Duration::hours(10)});
  // Oracle: a 7-minute gap keeps the instance, an 8-minute gap loses it.
  const auto o = testing::to_oracle(policy);
  EXPECT_EQ(testing::oracle_trace(o, {0, 420'000}, 0), (std::vector<bool>{false, true}));
  EXPECT_EQ(testing::oracle_trace(o, {0, 480'000}, 0), (std::vector<bool>{false, false}));
  EXPECT_EQ(estimate_for(policy), min(7));
}

TEST(FindIdleTimeoutTest, UpperBoundTooLow) {
  const auto policy = simple_policy(min(20), StaticCap{Duration::hours(10)});
  EXPECT_EQ(error_of([&] { estimate_for(policy); }), ErrorCode::kUpperBoundTooLow);
}

TEST(FindIdleTimeoutTest, EstimateCarriesEvidence) {
  SimulatorAdapter adapter(preset("aws-2021"), 1);
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  const auto est = engine.find_idle_timeout({});
  ASSERT_EQ(est.descent.size(), 16u);  // 20, 19, ..., 5
  EXPECT_EQ(est.descent.front().interval_ms, min(20).ms());
  EXPECT_EQ(est.descent.back().interval_ms, min(5).ms());
  for (std::size_t i = 0; i + 1 < est.descent.size(); ++i) EXPECT_EQ(est.descent[i].warm, 0);
  EXPECT_EQ(est.confirm_at_x.interval_ms, min(5).ms());
  EXPECT_EQ(est.confirm_at_x.invocations, 61);
  EXPECT_EQ(est.confirm_at_x.eligible_warm, est.confirm_at_x.eligible);
  EXPECT_EQ(est.confirm_at_x_plus_1.interval_ms, min(6).ms());
  EXPECT_EQ(est.confirm_at_x_plus_1.warm, 0);
  EXPECT_EQ(est.confirm_at_x_plus_1.eligible, est.confirm_at_x_plus_1.invocations - 1);
  std::optional<Duration> prev;
  for (const auto& r : est.records) {
    if (prev) EXPECT_GE(r.scheduled_at - *prev, min(1));
    prev = r.scheduled_at;
  }
  EXPECT_EQ(est.records.size(), engine.records().size());
}

TEST(FindIdleTimeoutTest, ColdDominatedAtXIsInconsistent) {
  RuleAdapter adapter([](Duration, Duration gap, int call) {
    return gap <= min(5) && call % 4 == 0;
  });
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  try {
    engine.find_idle_timeout({});
    FAIL();
  } catch (const ProbeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistentPlatform);
    ASSERT_EQ(e.evidence().size(), 2u);
    EXPECT_EQ(e.evidence()[0].interval_ms, min(5).ms());
    EXPECT_EQ(e.evidence()[1].interval_ms, min(6).ms());
  }
}

TEST(FindIdleTimeoutTest, WarmAtXPlusOneIsInconsistent) {
  // Start of the x + 1 confirmation run: descent 20..5, confirm at 5, then 6.
  std::vector<long long> order;
  for (long long i = 20; i >= 5; --i) order.push_back(i);
  order.push_back(5);
  std::optional<Duration> last;
  for (auto i : order) {
    const auto start = last ? *last + min(i) : Duration();
    last = start + min(i) * (300 / i);
  }
  const Duration switch_at = *last + min(6);
  RuleAdapter adapter([&](Duration at, Duration gap, int) {
    return gap <= (at >= switch_at ? min(6) : min(5));
  });
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  try {
    engine.find_idle_timeout({});
    FAIL();
  } catch (const ProbeError& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistentPlatform);
    ASSERT_EQ(e.evidence().size(), 2u);
    EXPECT_GT(e.evidence()[1].warm, 0);
  }
}

TEST(FindIdleTimeoutTest, NeverWarmIsBelowResolution) {
  RuleAdapter adapter([](Duration, Duration, int) { return false; });
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  EXPECT_EQ(error_of([&] { engine.find_idle_timeout({}); }),
            ErrorCode::kBelowSearchResolution);
}

TEST(FindIdleTimeoutTest, VirtualClockSendsExactlyOnSchedule) {
  SimulatorAdapter adapter(preset("azure-2021"), 4);
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  engine.find_idle_timeout({});
  std::int64_t seq = 0;
  for (const auto& r : engine.records()) {
    EXPECT_EQ(r.sent_at, r.scheduled_at);
    EXPECT_GT(r.sequence_no, seq);
    seq = r.sequence_no;
  }
}

TEST(FindIdleTimeoutTest, RecordsReplayThroughRunTrace) {
  for (const char* name : {"aws-2021", "ibm-2021", "azure-2021"}) {
    const auto policy = preset(name);
    SimulatorAdapter adapter(policy, 9);
    VirtualClock clock;
    ProbeEngine engine(adapter, clock);
    engine.find_idle_timeout({});
    std::vector<Duration> times;
    for (const auto& r : engine.records()) times.push_back(r.sent_at);
    const auto replay = run_trace(policy, times, 9);
    for (std::size_t i = 0; i < replay.size(); ++i) {
      ASSERT_EQ(replay[i].start_kind, engine.records()[i].start_kind) << name << " i=" << i;
    }
  }
}

TEST(MeasureKeepAliveTest, AwsPreset) {
  SimulatorAdapter adapter(preset("aws-2021"), 1);
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  const auto r = engine.measure_keepalive(min(5), Duration::hours(720), 10);
  EXPECT_EQ(r.max, min(145));
  EXPECT_EQ(r.p90, min(140));
  EXPECT_EQ(r.samples.size(), 10u);
}

TEST(MeasureKeepAliveTest, AzurePatternBehaviour) {
  for (auto [interval, expected] : {std::pair{10, 20}, std::pair{5, 2670}}) {
    SimulatorAdapter adapter(preset("azure-2021"), 1);
    VirtualClock clock;
    ProbeEngine engine(adapter, clock);
    const auto r = engine.measure_keepalive(min(interval), Duration::hours(720), 10);
    EXPECT_EQ(r.max, min(expected)) << "interval " << interval;
  }
}

TEST(MeasureKeepAliveTest, LifetimesAreMultiplesOfInterval) {
  for (const char* name : {"aws-2021", "ibm-2021", "azure-2021"}) {
    SimulatorAdapter adapter(preset(name), 2);
    VirtualClock clock;
    ProbeEngine engine(adapter, clock);
    const auto r = engine.measure_keepalive(min(5), Duration::hours(720), 10);
    EXPECT_GE(r.max, r.p90);
    for (const auto& s : r.samples) EXPECT_EQ(s.lifetime().ms() % min(5).ms(), 0) << name;
  }
}

// Lifetimes recovered from the oracle's warm/cold sequence at fixed polls.
Duration oracle_max_lifetime(const testing::OraclePolicy& o, Duration interval,
                             int polls) {
  std::vector<std::int64_t> times;
  for (int k = 0; k < polls; ++k) times.push_back(interval.ms() * k);
  const auto warm = testing::oracle_trace(o, times, 0);
  std::int64_t best = 0, first = 0, last = 0;
  for (std::size_t i = 0; i < warm.size(); ++i) {
    if (!warm[i]) {
      if (i > 0) best = std::max(best, last - first);
      first = last = times[i];
    } else {
      last = times[i];
    }
  }
  return Duration::millis(best);
}

TEST(MeasureKeepAliveTest, StaticCapBoundMatchesOracle) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const auto cap = min(std::uniform_int_distribution<long long>(10, 300)(rng));
    const auto interval = Duration::millis(
        std::uniform_int_distribution<std::int64_t>(30'000, 600'000)(rng));
    const auto idle = interval + Duration::millis(
        std::uniform_int_distribution<std::int64_t>(0, 60'000)(rng));
    const auto policy = simple_policy(idle, StaticCap{cap});
    SimulatorAdapter adapter(policy, 1);
    VirtualClock clock;
    ProbeEngine engine(adapter, clock);
    const auto r = engine.measure_keepalive(interval, Duration::hours(200), 3);
    EXPECT_LE(r.max, cap);
    EXPECT_GE(r.max, cap - interval);
    const int polls = static_cast<int>(clock.now().ms() / interval.ms()) + 1;
    EXPECT_EQ(r.max, oracle_max_lifetime(testing::to_oracle(policy), interval, polls));
  }
}

TEST(MeasureKeepAliveTest, NoRecycleWithinBudget) {
  SimulatorAdapter adapter(simple_policy(min(10), StaticCap{Duration::hours(100)}), 1);
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  EXPECT_EQ(error_of([&] { engine.measure_keepalive(min(5), Duration::hours(10), 1); }),
            ErrorCode::kNoRecycleObserved);
}

TEST(MeasureKeepAliveTest, DiscardsInstanceAliveBeforePolling) {
  SimulatorAdapter adapter(simple_policy(min(10), StaticCap{min(60)}), 1);
  adapter.invoke(Workload::kFibonacci, Duration());  // pre-existing instance
  VirtualClock clock;
  clock.wait_until(min(5));
  ProbeEngine engine(adapter, clock);
  const auto r = engine.measure_keepalive(min(5), Duration::hours(10), 3);
  ASSERT_EQ(r.samples.size(), 3u);
  EXPECT_EQ(r.samples.front().first_warm_at, min(65));
  for (const auto& s : r.samples) EXPECT_EQ(s.lifetime(), min(60));
}

TEST(MeasureKeepAliveTest, ArgumentChecks) {
  SimulatorAdapter adapter(preset("aws-2021"), 1);
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  EXPECT_EQ(error_of([&] { engine.measure_keepalive(Duration(), min(60), 1); }),
            ErrorCode::kConfig);
  EXPECT_EQ(error_of([&] { engine.measure_keepalive(min(5), min(60), 0); }),
            ErrorCode::kConfig);
}

ProviderPolicy without_jitter(ProviderPolicy p) {
  p.fibonacci.jitter = Duration();
  p.hello_world.jitter = Duration();
  return p;
}

TEST(MeasureLatencyTest, ZeroJitterGivesConfiguredMeans) {
  SimulatorAdapter adapter(without_jitter(preset("aws-2021")), 1);
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  const auto s = engine.measure_latency(10, min(6));
  EXPECT_EQ(s.fibonacci.cold_mean_ms, 1161.0);
  EXPECT_EQ(s.fibonacci.warm_mean_ms, 778.0);
  EXPECT_EQ(s.hello_world.cold_mean_ms, 698.0);
  EXPECT_EQ(s.hello_world.warm_mean_ms, 79.0);
  EXPECT_EQ(s.fibonacci.samples, 10);
}

TEST(MeasureLatencyTest, JitteredMeansStayWithinJitter) {
  for (const char* name : {"aws-2021", "ibm-2021"}) {
    const auto policy = preset(name);
    SimulatorAdapter adapter(policy, 3);
    VirtualClock clock;
    ProbeEngine engine(adapter, clock);
    const auto s = engine.measure_latency(10, min(11));
    auto near = [](double got, const LatencyModel& m, bool cold) {
      const double mean = static_cast<double>((cold ? m.cold_mean : m.warm_mean).ms());
      return std::abs(got - mean) <= static_cast<double>(m.jitter.ms());
    };
    EXPECT_TRUE(near(s.fibonacci.cold_mean_ms, policy.fibonacci, true)) << name;
    EXPECT_TRUE(near(s.fibonacci.warm_mean_ms, policy.fibonacci, false)) << name;
    EXPECT_TRUE(near(s.hello_world.cold_mean_ms, policy.hello_world, true)) << name;
    EXPECT_TRUE(near(s.hello_world.warm_mean_ms, policy.hello_world, false)) << name;
  }
  // Hello-world on IBM: cold about 1495 ms, warm about 169 ms.
  EXPECT_EQ(preset("ibm-2021").hello_world.cold_mean, Duration::millis(1495));
  EXPECT_EQ(preset("ibm-2021").hello_world.warm_mean, Duration::millis(169));
}

TEST(MeasureLatencyTest, WarmAfterCooldownIsStale) {
  SimulatorAdapter adapter(preset("azure-2021"), 1);
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  adapter.invoke(Workload::kFibonacci, Duration());
  EXPECT_EQ(error_of([&] { engine.measure_latency(3, min(5)); }),
            ErrorCode::kStalePlatformAssumption);
}

TEST(MeasureLatencyTest, NeedsThreeRepetitions) {
  SimulatorAdapter adapter(preset("aws-2021"), 1);
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  EXPECT_EQ(error_of([&] { engine.measure_latency(2, min(6)); }), ErrorCode::kConfig);
}

TEST(RetryTest, ScheduleUnaffectedByRetries) {
  FlakyAdapter adapter(simple_policy(min(2), StaticCap{min(3)}), {2, 3}, true);
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  engine.measure_keepalive(min(1), min(30), 2);
  const auto& recs = engine.records();
  ASSERT_GE(recs.size(), 3u);
  EXPECT_EQ(recs[0].retries, 0);
  EXPECT_EQ(recs[1].retries, 2);
  EXPECT_EQ(recs[2].retries, 0);
  for (std::size_t k = 0; k < recs.size(); ++k) {
    EXPECT_EQ(recs[k].scheduled_at, min(static_cast<long long>(k)));
  }
}

TEST(RetryTest, ExhaustedRetriesPropagate) {
  FlakyAdapter adapter(simple_policy(min(5), StaticCap{min(600)}), {1, 2, 3}, true);
  VirtualClock clock;
  ProbeEngine engine(adapter, clock);
  EXPECT_EQ(error_of([&] { engine.measure_keepalive(min(1), min(30), 1); }),
            ErrorCode::kInvocationFailed);
}

TEST(RetryTest, NonRetryableFailsImmediately) {
  FlakyAdapter adapter(simple_policy(min(5), StaticCap{min(600)}), {1}, false);
  VirtualClock clock;
  ProbeEngine engine(adapter, clock, {.max_retries = 5});
  EXPECT_EQ(error_of([&] { engine.measure_keepalive(min(1), min(30), 1); }),
            ErrorCode::kInvocationFailed);
  EXPECT_TRUE(engine.records().empty());
}

TEST(SchedulingTest, SlowResponsesDoNotShiftLaterSlots) {
  VirtualClock clock;
  const auto s = Duration::seconds(1);
  ElapsingAdapter adapter(clock, {s, s * 25, s, s, s, s});
  ProbeEngine engine(adapter, clock);
  EXPECT_EQ(error_of([&] { engine.measure_keepalive(s * 10, s * 60, 1); }),
            ErrorCode::kNoRecycleObserved);
  const auto& recs = engine.records();
  ASSERT_EQ(recs.size(), 7u);
  for (std::size_t k = 0; k < recs.size(); ++k) {
    EXPECT_EQ(recs[k].scheduled_at, s * 10 * static_cast<long long>(k));
  }
  // The 25 s response ends at 35 s, so slots at 20 s and 30 s go out late;
  // from 40 s on the original grid is back.
  EXPECT_EQ(recs[2].sent_at, s * 35);
  EXPECT_EQ(recs[3].sent_at, s * 36);
  for (std::size_t k = 4; k < recs.size(); ++k) EXPECT_EQ(recs[k].sent_at, recs[k].scheduled_at);
}

class SleepingAdapter final : public Adapter {
 public:
  InvocationResponse invoke(Workload, Duration) override {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
    return {InstanceIdentity("w"), std::nullopt, Duration::millis(5), {}, 200};
  }
  std::string describe() const override { return "sleeping"; }
};

TEST(SchedulingTest, WallClockSkewDoesNotAccumulate) {
  SleepingAdapter adapter;
  WallClock clock;
  ProbeEngine engine(adapter, clock);
  EXPECT_EQ(error_of([&] {
              engine.measure_keepalive(Duration::millis(20), Duration::millis(400), 1);
            }),
            ErrorCode::kNoRecycleObserved);
  const auto& recs = engine.records();
  ASSERT_EQ(recs.size(), 21u);
  for (std::size_t k = 0; k < recs.size(); ++k) {
    EXPECT_EQ(recs[k].scheduled_at.ms() - recs[0].scheduled_at.ms(), 20 * static_cast<long long>(k));
    EXPECT_GE(recs[k].sent_at, recs[k].scheduled_at);
  }
  EXPECT_LT((recs.back().sent_at - recs.back().scheduled_at).ms(), 50);
}

}  // namespace
}  // namespace faasprobe
