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

#include "probe_runner.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace faasprobe {

namespace {

constexpr const char* kVirtualEpoch = "1970-01-01T00:00:00Z";

int severity(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoRecycleObserved:
      return 0;
    case ErrorCode::kInconsistentPlatform:
    case ErrorCode::kStalePlatformAssumption:
      return 2;
    default:
      return 1;
  }
}

// One adapter + clock pair per campaign for simulator targets (a fresh
// deployment each time); a single shared pair for HTTP targets.
class TargetSession {
 public:
  explicit TargetSession(const ProbeConfig& config) : config_(config) {
    if (config.target.kind == TargetConfig::Kind::kHttp) {
      http_ = std::make_unique<HttpAdapter>(config.target.http);
      wall_ = std::make_unique<WallClock>();
    }
  }

  template <class Fn>
  auto with_engine(Fn&& fn) {
    const EngineOptions opts{config_.target.retries, config_.target.workload};
    if (http_) {
      ProbeEngine engine(*http_, *wall_, opts);
      return finish(engine, fn);
    }
    SimulatorAdapter sim(config_.simulator_policy(), config_.seed);
    VirtualClock clock;
    ProbeEngine engine(sim, clock, opts);
    return finish(engine, fn);
  }

  std::vector<InvocationRecord>& records() { return records_; }

 private:
  template <class Fn>
  auto finish(ProbeEngine& engine, Fn& fn) {
    struct Collect {
      ProbeEngine& engine;
      std::vector<InvocationRecord>& out;
      ~Collect() {
        out.insert(out.end(), engine.records().begin(), engine.records().end());
      }
    } collect{engine, records_};
    return fn(engine);
  }

  const ProbeConfig& config_;
  std::unique_ptr<HttpAdapter> http_;
  std::unique_ptr<WallClock> wall_;
  std::vector<InvocationRecord> records_;
};

std::string sanitize(std::string s) {
  for (auto& c : s) {
    const bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
                    c == '_' || c == '.';
    if (!ok) c = '_';
  }
  return s;
}

std::string fixed1(double v) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(1) << v;
  return out.str();
}

}  // namespace

ProbeOutcome run_probe(const ProbeConfig& config) {
  ProbeOutcome outcome;
  auto& report = outcome.report;
  const bool simulated = config.target.kind == TargetConfig::Kind::kSimulator;
  report.target_label = config.output.label;
  report.started_at = config.output.started_at
                          ? *config.output.started_at
                          : (simulated ? kVirtualEpoch : utc_now_rfc3339());
  report.policy_checkpoint_label =
      config.output.checkpoint ? *config.output.checkpoint : report.started_at;
  report.tool_version = FAASPROBE_VERSION;
  report.effective_config = effective_config_json(config);

  auto fail = [&](const std::string& campaign, const ProbeError& e) {
    report.errors.push_back({campaign, std::string(error_code_name(e.code())),
                             e.what(), e.evidence()});
    // Configuration and transport failures outrank platform findings.
    const int s = severity(e.code());
    if (s == 1 || (s == 2 && outcome.exit_code == 0)) outcome.exit_code = s;
  };

  std::unique_ptr<TargetSession> session;
  try {
    session = std::make_unique<TargetSession>(config);
  } catch (const ProbeError& e) {
    fail("target", e);
    outcome.summary = format_summary(report);
    return outcome;
  }

  if (config.run_search) {
    try {
      auto est = session->with_engine(
          [&](ProbeEngine& e) { return e.find_idle_timeout(config.search); });
      report.idle_estimate = IdleSection::from(est);
    } catch (const ProbeError& e) {
      fail("idle-search", e);
    }
  }
  const std::optional<Duration> x =
      report.idle_estimate ? std::optional(report.idle_estimate->x) : std::nullopt;

  if (config.keepalive) {
    auto intervals = config.keepalive->intervals;
    if (intervals.empty() && x) intervals.push_back(*x);
    if (intervals.empty()) {
      fail("keepalive", ProbeError(ErrorCode::kConfig,
                                   "no keep-alive interval: configure "
                                   "keepalive.interval_min or a successful search"));
    }
    auto resolved = nlohmann::ordered_json::array();
    for (auto interval : intervals) {
      resolved.push_back(static_cast<double>(interval.ms()) / 60'000.0);
      try {
        report.keepalive.push_back(session->with_engine([&](ProbeEngine& e) {
          return e.measure_keepalive(interval, config.keepalive->max_duration,
                                     config.keepalive->min_generations);
        }));
      } catch (const ProbeError& e) {
        fail(keepalive_tag(interval), e);
      }
    }
    report.effective_config["keepalive"]["interval_min"] = resolved;
  }

  if (config.latency) {
    const auto cooldown = config.latency->cooldown
                              ? *config.latency->cooldown
                              : (x ? *x : config.search.upper_bound) + config.search.step;
    report.effective_config["latency"]["cooldown_min"] =
        static_cast<double>(cooldown.ms()) / 60'000.0;
    try {
      report.latency = session->with_engine([&](ProbeEngine& e) {
        return e.measure_latency(config.latency->repetitions, cooldown);
      });
    } catch (const ProbeError& e) {
      fail("latency", e);
    }
  }

  outcome.records = std::move(session->records());
  std::int64_t seq = 0;
  for (auto& r : outcome.records) r.sequence_no = ++seq;
  outcome.summary = format_summary(report);
  return outcome;
}

ProbeOutcome run_probe_and_persist(const ProbeConfig& config) {
  auto outcome = run_probe(config);
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(config.output.dir, ec);
  if (ec) {
    throw ProbeError(ErrorCode::kIo, "cannot create output directory '" +
                                         config.output.dir + "': " + ec.message());
  }
  const auto stem = sanitize(outcome.report.target_label + "_" +
                             outcome.report.policy_checkpoint_label);
  const fs::path dir(config.output.dir);
  outcome.report_path = (dir / (stem + ".report.json")).string();
  outcome.records_path = (dir / (stem + ".records.jsonl")).string();

  write_text_file(outcome.report_path, serialize_report(outcome.report));
  std::ostringstream jsonl;
  write_records(jsonl, outcome.records);
  write_text_file(outcome.records_path, jsonl.str());
  return outcome;
}

std::string format_summary(const CampaignReport& r) {
  std::vector<std::pair<std::string, std::string>> rows;
  rows.emplace_back("target", r.target_label);
  rows.emplace_back("checkpoint", r.policy_checkpoint_label);
  if (r.idle_estimate) {
    rows.emplace_back("idle_timeout_min", std::to_string(r.idle_estimate->x.whole_minutes()));
  }
  for (const auto& k : r.keepalive) {
    const auto poll = std::to_string(k.polling_interval.whole_minutes());
    rows.emplace_back("keepalive_max_min",
                      std::to_string(k.max.whole_minutes()) + "  (poll every " + poll +
                          " min, " + std::to_string(k.samples.size()) + " generations)");
    rows.emplace_back("keepalive_p90_min",
                      std::to_string(k.p90.whole_minutes()) + "  (poll every " + poll + " min)");
  }
  if (r.latency) {
    rows.emplace_back("latency_fib_ms", "cold " + fixed1(r.latency->fibonacci.cold_mean_ms) +
                                            "  warm " + fixed1(r.latency->fibonacci.warm_mean_ms));
    rows.emplace_back("latency_hello_ms",
                      "cold " + fixed1(r.latency->hello_world.cold_mean_ms) + "  warm " +
                          fixed1(r.latency->hello_world.warm_mean_ms));
  }
  for (const auto& e : r.errors) {
    rows.emplace_back("error", e.campaign + " " + e.code + ": " + e.message);
  }
  std::size_t width = 0;
  for (const auto& [k, v] : rows) width = std::max(width, k.size() + 1);
  std::ostringstream out;
  for (const auto& [k, v] : rows) {
    out << std::left << std::setw(static_cast<int>(width) + 2) << (k + ":") << v << "\n";
  }
  return out.str();
}

nlohmann::ordered_json presets_json() {
  auto out = nlohmann::ordered_json::array();
  for (const auto& name : preset_names()) out.push_back(policy_to_json(preset(name)));
  return out;
}

}  // namespace faasprobe
