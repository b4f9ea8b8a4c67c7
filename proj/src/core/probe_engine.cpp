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

#include "probe_engine.hpp"

#include <numeric>

namespace faasprobe {

namespace {

std::string minutes_text(Duration d) {
  if (d.ms() % 60'000 == 0) return std::to_string(d.whole_minutes()) + "m";
  return std::to_string(d.ms()) + "ms";
}

double warm_fraction(const CampaignSummary& s) {
  return s.eligible == 0 ? 0.0
                         : static_cast<double>(s.eligible_warm) / s.eligible;
}

}  // namespace

std::string keepalive_tag(Duration polling_interval) {
  return "keepalive@" + minutes_text(polling_interval);
}

void SearchConfig::validate() const {
  if (step.ms() <= 0) throw ProbeError(ErrorCode::kConfig, "step must be > 0");
  if (upper_bound <= step) {
    throw ProbeError(ErrorCode::kConfig, "upper_bound must exceed step");
  }
  if (campaign_duration < upper_bound * 2) {
    throw ProbeError(ErrorCode::kConfig,
                     "campaign duration must be at least 2 x upper_bound");
  }
  if (!(warm_confirm_threshold > 0.0 && warm_confirm_threshold <= 1.0)) {
    throw ProbeError(ErrorCode::kConfig,
                     "warm_confirm_threshold must be in (0, 1]");
  }
}

const InvocationRecord& ProbeEngine::invoke_at(Duration scheduled,
                                               Workload workload,
                                               const std::string& campaign) {
  clock_.wait_until(scheduled);
  const Duration sent = clock_.now();
  int retries = 0;
  for (;;) {
    try {
      auto response = adapter_.invoke(workload, sent);
      const auto kind =
          classify_start(previous_, response.identity, response.created_this_call);
      previous_ = response.identity;
      records_.push_back(InvocationRecord{
          .sequence_no = ++sequence_,
          .campaign = campaign,
          .scheduled_at = scheduled,
          .sent_at = sent,
          .latency = response.latency,
          .identity = std::move(response.identity),
          .start_kind = kind,
          .workload = workload,
          .retries = retries,
      });
      return records_.back();
    } catch (const ProbeError& e) {
      if (e.code() != ErrorCode::kInvocationFailed || !e.retryable() ||
          retries >= options_.max_retries) {
        throw;
      }
      ++retries;
    }
  }
}

ProbeEngine::Series ProbeEngine::run_series(Duration start, Duration interval,
                                            Duration duration,
                                            const std::string& campaign) {
  Series series;
  series.summary.interval_ms = interval.ms();
  const auto count = duration.ms() / interval.ms() + 1;
  for (std::int64_t k = 0; k < count; ++k) {
    const auto& rec = invoke_at(start + interval * k, options_.workload, campaign);
    series.records.push_back(rec);
  }

  auto& s = series.summary;
  s.invocations = static_cast<int>(series.records.size());
  for (std::size_t i = 1; i < series.records.size(); ++i) {
    const auto kind = series.records[i].start_kind;
    const bool warm = kind == StartKind::kWarm;
    s.warm += warm ? 1 : 0;
    // A cold start right after a warm one at the same gap cannot be an idle
    // expiry; the instance hit its recycle cap.
    const bool cap_recycle =
        kind == StartKind::kCold &&
        series.records[i - 1].start_kind == StartKind::kWarm;
    if (cap_recycle) continue;
    ++s.eligible;
    s.eligible_warm += warm ? 1 : 0;
  }
  return series;
}

IdleTimeoutEstimate ProbeEngine::find_idle_timeout(const SearchConfig& config) {
  config.validate();
  const std::string tag = "idle-search";
  IdleTimeoutEstimate est;
  const auto first_record = records_.size();

  // Campaigns run back to back; each opens one of its own intervals after
  // the previous request.
  std::optional<Duration> last_sent;
  auto run = [&](Duration interval) {
    const auto start = last_sent ? *last_sent + interval : clock_.now();
    auto series = run_series(start, interval, config.campaign_duration, tag);
    last_sent = series.records.back().scheduled_at;
    return series.summary;
  };

  std::optional<Duration> found;
  for (Duration i = config.upper_bound; i >= config.step && i.ms() > 0;
       i = i - config.step) {
    const auto summary = run(i);
    est.descent.push_back(summary);
    if (summary.warm > 0) {
      if (i == config.upper_bound) {
        throw ProbeError(ErrorCode::kUpperBoundTooLow,
                         "instance reuse already observed at the upper bound of " +
                             minutes_text(i) + "; raise upper_bound")
            .add_evidence(summary);
      }
      found = i;
      break;
    }
  }
  if (!found) {
    throw ProbeError(ErrorCode::kBelowSearchResolution,
                     "no instance reuse observed down to an interval of " +
                         minutes_text(config.step));
  }

  est.x = *found;
  est.confirm_at_x = run(est.x);
  est.confirm_at_x_plus_1 = run(est.x + config.step);
  const bool x_ok =
      warm_fraction(est.confirm_at_x) >= config.warm_confirm_threshold;
  const bool x1_ok = est.confirm_at_x_plus_1.warm == 0;
  if (!x_ok || !x1_ok) {
    throw ProbeError(ErrorCode::kInconsistentPlatform,
                     "confirmation runs disagree with x = " + minutes_text(est.x) +
                         (x_ok ? "" : ": mostly cold at x") +
                         (x1_ok ? "" : ": warm reuse at x + step"))
        .add_evidence(est.confirm_at_x)
        .add_evidence(est.confirm_at_x_plus_1);
  }
  est.records.assign(records_.begin() + static_cast<std::ptrdiff_t>(first_record),
                     records_.end());
  return est;
}

KeepAliveResult ProbeEngine::measure_keepalive(Duration polling_interval,
                                               Duration max_duration,
                                               int min_generations) {
  if (polling_interval.ms() <= 0) {
    throw ProbeError(ErrorCode::kConfig, "polling interval must be > 0");
  }
  if (min_generations < 1) {
    throw ProbeError(ErrorCode::kConfig, "min_generations must be >= 1");
  }
  const auto tag = keepalive_tag(polling_interval);

  struct Current {
    InstanceIdentity identity;
    Duration first_at;
    Duration last_warm_at;
    // False for an instance that already existed when polling began; its
    // true start is unknown.
    bool complete;
  };
  std::optional<Current> current;
  KeepAliveResult result;
  result.polling_interval = polling_interval;

  const auto start = clock_.now();
  for (Duration t = start; t - start <= max_duration; t += polling_interval) {
    const auto& rec = invoke_at(t, options_.workload, tag);
    const bool same = current && rec.start_kind != StartKind::kCold &&
                      rec.identity == current->identity;
    if (same) {
      current->last_warm_at = rec.sent_at;
      continue;
    }
    if (current && current->complete) {
      result.samples.push_back(
          {current->first_at, current->last_warm_at, current->identity});
      if (static_cast<int>(result.samples.size()) >= min_generations) break;
    }
    current = Current{rec.identity, rec.sent_at, rec.sent_at,
                      rec.start_kind == StartKind::kCold};
    if (t == Duration::max()) break;
  }

  if (result.samples.empty()) {
    throw ProbeError(ErrorCode::kNoRecycleObserved,
                     "no instance retired within " + minutes_text(max_duration) +
                         " of polling every " + minutes_text(polling_interval));
  }
  const auto summary = summarize_lifetimes(result.samples);
  result.max = summary.max;
  result.p90 = summary.p90;
  return result;
}

LatencySummary ProbeEngine::measure_latency(int repetitions, Duration cooldown) {
  if (repetitions < 3) {
    throw ProbeError(ErrorCode::kConfig, "latency repetitions must be >= 3");
  }
  if (cooldown.ms() <= 0) {
    throw ProbeError(ErrorCode::kConfig, "latency cooldown must be > 0");
  }
  const std::string tag = "latency";
  struct Acc {
    std::vector<double> cold, warm;
  };
  Acc fib, hello;

  for (int rep = 0; rep < repetitions; ++rep) {
    for (auto workload : {Workload::kFibonacci, Workload::kHelloWorld}) {
      auto& acc = workload == Workload::kFibonacci ? fib : hello;
      const auto& cold = invoke_at(clock_.now() + cooldown, workload, tag);
      if (cold.start_kind == StartKind::kWarm) {
        throw ProbeError(ErrorCode::kStalePlatformAssumption,
                         "request after a " + minutes_text(cooldown) +
                             " cooldown was served warm; the idle timeout "
                             "estimate is outdated");
      }
      acc.cold.push_back(static_cast<double>(cold.latency.ms()));
      const auto warm_at = cold.sent_at + cold.latency;
      const auto& warm = invoke_at(warm_at, workload, tag);
      if (warm.start_kind != StartKind::kWarm) {
        throw ProbeError(ErrorCode::kInconsistentPlatform,
                         "immediate follow-up request was not served warm");
      }
      acc.warm.push_back(static_cast<double>(warm.latency.ms()));
    }
  }

  auto mean = [](const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
  };
  auto stats = [&](const Acc& a) {
    return LatencyStats{mean(a.cold), mean(a.warm), static_cast<int>(a.cold.size())};
  };
  return {stats(fib), stats(hello)};
}

}  // namespace faasprobe
