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

#include "policy.hpp"

#include <map>

#include "json_util.hpp"

namespace faasprobe {

namespace {

using json_util::as_millis;
using json_util::field;
using json_util::reject_unknown_keys;
constexpr auto kCfg = ErrorCode::kConfig;

Duration min(long long m) { return Duration::minutes(m); }
Duration ms(long long v) { return Duration::millis(v); }

// Jitter of a tenth of the mean keeps every sample strictly positive.
LatencyModel latency(long long cold_ms, long long warm_ms) {
  return {ms(cold_ms), ms(warm_ms), ms(warm_ms / 10)};
}

std::vector<Duration> repeated_then(Duration common, int copies,
                                    Duration outlier) {
  std::vector<Duration> out(static_cast<std::size_t>(copies), common);
  out.push_back(outlier);
  return out;
}

// Mean response times per platform, in ms: (fib cold, fib warm, hello cold,
// hello warm).
struct LatencyRow {
  long long fib_cold, fib_warm, hello_cold, hello_warm;
};
constexpr LatencyRow kAwsLatency{1161, 778, 698, 79};
constexpr LatencyRow kIbmLatency{3169, 695, 1495, 169};
constexpr LatencyRow kAzureLatency{2825, 628, 2663, 81};

ProviderPolicy make(std::string name, Duration idle, RecycleRule rule,
                    const LatencyRow& row) {
  ProviderPolicy p{
      .name = std::move(name),
      .idle_timeout = idle,
      .recycle_rule = std::move(rule),
      .fibonacci = latency(row.fib_cold, row.fib_warm),
      .hello_world = latency(row.hello_cold, row.hello_warm),
  };
  p.validate();
  return p;
}

// Most instances recycled at 140 min, the longest lasting 145 min.
RecycleRule aws_recycle() {
  return EmpiricalCap{repeated_then(min(140), 9, min(145))};
}

// Usual lifetime 138 min, occasionally kept for 336 min.
RecycleRule ibm_recycle() {
  return EmpiricalCap{repeated_then(min(138), 9, min(336))};
}

// Polling every 5 min or faster keeps an instance for 44 h 30 min (2670 min).
// Polling every 6..12 min retains an instance for at most 20 min.
RecycleRule azure_recycle() {
  return PatternCap{
      .rules = {{ms(0), min(5), min(2670)},
                {min(5) + ms(1), min(12), min(20)}},
      .default_cap = min(20),
  };
}

const std::map<std::string, ProviderPolicy, std::less<>>& presets() {
  static const auto* table = [] {
    auto* t = new std::map<std::string, ProviderPolicy, std::less<>>;
    auto add = [&](ProviderPolicy p) { t->emplace(p.name, std::move(p)); };
    add(make("aws-2020", min(10), aws_recycle(), kAwsLatency));
    add(make("aws-2021", min(5), aws_recycle(), kAwsLatency));
    add(make("ibm-2020", min(10), ibm_recycle(), kIbmLatency));
    add(make("ibm-2021", min(10), ibm_recycle(), kIbmLatency));
    add(make("azure-2020-q1", min(20), azure_recycle(), kAzureLatency));
    add(make("azure-2020", min(14), azure_recycle(), kAzureLatency));
    add(make("azure-2021", min(12), azure_recycle(), kAzureLatency));
    return t;
  }();
  return *table;
}

void validate_latency(const LatencyModel& m, const std::string& which) {
  if (m.cold_mean.ms() <= 0 || m.warm_mean.ms() <= 0) {
    throw ProbeError(kCfg, which + ": latency means must be > 0");
  }
  if (m.jitter >= m.cold_mean || m.jitter >= m.warm_mean) {
    throw ProbeError(kCfg, which + ": jitter must be below both means");
  }
}

nlohmann::ordered_json latency_to_json(const LatencyModel& m) {
  return {{"cold_ms", m.cold_mean.ms()},
          {"warm_ms", m.warm_mean.ms()},
          {"jitter_ms", m.jitter.ms()}};
}

LatencyModel latency_from_json(const nlohmann::json& j,
                               const std::string& path) {
  reject_unknown_keys(j, {"cold_ms", "warm_ms", "jitter_ms"}, path, kCfg);
  LatencyModel m{
      as_millis(field(j, "cold_ms", path, kCfg), path + ".cold_ms", kCfg),
      as_millis(field(j, "warm_ms", path, kCfg), path + ".warm_ms", kCfg),
      Duration(),
  };
  if (j.contains("jitter_ms")) {
    m.jitter = as_millis(j["jitter_ms"], path + ".jitter_ms", kCfg);
  }
  return m;
}

}  // namespace

void ProviderPolicy::validate() const {
  if (idle_timeout.ms() <= 0) {
    throw ProbeError(kCfg, "policy '" + name + "': idle_timeout must be > 0");
  }
  std::visit(
      [&](const auto& rule) {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, StaticCap>) {
          if (rule.cap.ms() <= 0) {
            throw ProbeError(kCfg, "policy '" + name + "': cap must be > 0");
          }
        } else if constexpr (std::is_same_v<T, EmpiricalCap>) {
          if (rule.lifetimes.empty()) {
            throw ProbeError(kCfg,
                             "policy '" + name + "': empty lifetime list");
          }
          for (auto d : rule.lifetimes) {
            if (d.ms() <= 0) {
              throw ProbeError(kCfg, "policy '" + name + "': cap must be > 0");
            }
          }
        } else {
          if (rule.default_cap.ms() <= 0) {
            throw ProbeError(kCfg,
                             "policy '" + name + "': default_cap must be > 0");
          }
          for (std::size_t i = 0; i < rule.rules.size(); ++i) {
            const auto& r = rule.rules[i];
            if (r.cap.ms() <= 0 || r.low > r.high) {
              throw ProbeError(kCfg, "policy '" + name + "': bad pattern rule " +
                                         std::to_string(i));
            }
            if (i > 0 && rule.rules[i - 1].high >= r.low) {
              throw ProbeError(kCfg, "policy '" + name +
                                         "': pattern rules overlap or are "
                                         "out of order at rule " +
                                         std::to_string(i));
            }
          }
        }
      },
      recycle_rule);
  validate_latency(fibonacci, "policy '" + name + "' fib latency");
  validate_latency(hello_world, "policy '" + name + "' hello latency");
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, _] : presets()) names.push_back(name);
  return names;
}

ProviderPolicy preset(std::string_view name) {
  const auto& t = presets();
  auto it = t.find(name);
  if (it == t.end()) {
    throw ProbeError(kCfg, "unknown preset '" + std::string(name) + "'");
  }
  return it->second;
}

nlohmann::ordered_json policy_to_json(const ProviderPolicy& policy) {
  nlohmann::ordered_json recycle = std::visit(
      [](const auto& rule) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(rule)>;
        if constexpr (std::is_same_v<T, StaticCap>) {
          return {{"kind", "static"}, {"cap_ms", rule.cap.ms()}};
        } else if constexpr (std::is_same_v<T, EmpiricalCap>) {
          auto list = nlohmann::ordered_json::array();
          for (auto d : rule.lifetimes) list.push_back(d.ms());
          return {{"kind", "empirical"}, {"lifetimes_ms", list}};
        } else {
          auto rules = nlohmann::ordered_json::array();
          for (const auto& r : rule.rules) {
            rules.push_back({{"low_ms", r.low.ms()},
                             {"high_ms", r.high.ms()},
                             {"cap_ms", r.cap.ms()}});
          }
          return {{"kind", "pattern"},
                  {"rules", rules},
                  {"default_cap_ms", rule.default_cap.ms()}};
        }
      },
      policy.recycle_rule);
  return {{"name", policy.name},
          {"idle_timeout_ms", policy.idle_timeout.ms()},
          {"recycle", recycle},
          {"latency",
           {{"fib", latency_to_json(policy.fibonacci)},
            {"hello", latency_to_json(policy.hello_world)}}}};
}

ProviderPolicy policy_from_json(const nlohmann::json& doc) {
  const std::string path = "policy";
  reject_unknown_keys(doc, {"name", "idle_timeout_ms", "recycle", "latency"},
                      path, kCfg);
  ProviderPolicy p;
  p.name = json_util::as_string(field(doc, "name", path, kCfg), "policy.name",
                                kCfg);
  p.idle_timeout = as_millis(field(doc, "idle_timeout_ms", path, kCfg),
                             "policy.idle_timeout_ms", kCfg);

  const auto& rec = field(doc, "recycle", path, kCfg);
  json_util::require_object(rec, "policy.recycle", kCfg);
  const auto kind = json_util::as_string(field(rec, "kind", "policy.recycle", kCfg),
                                         "policy.recycle.kind", kCfg);
  if (kind == "static") {
    reject_unknown_keys(rec, {"kind", "cap_ms"}, "policy.recycle", kCfg);
    p.recycle_rule = StaticCap{as_millis(field(rec, "cap_ms", "policy.recycle", kCfg),
                                         "policy.recycle.cap_ms", kCfg)};
  } else if (kind == "empirical") {
    reject_unknown_keys(rec, {"kind", "lifetimes_ms"}, "policy.recycle", kCfg);
    const auto& list = field(rec, "lifetimes_ms", "policy.recycle", kCfg);
    if (!list.is_array()) {
      throw ProbeError(kCfg, "policy.recycle.lifetimes_ms: expected an array");
    }
    EmpiricalCap cap;
    for (const auto& v : list) {
      cap.lifetimes.push_back(as_millis(v, "policy.recycle.lifetimes_ms", kCfg));
    }
    p.recycle_rule = std::move(cap);
  } else if (kind == "pattern") {
    reject_unknown_keys(rec, {"kind", "rules", "default_cap_ms"},
                        "policy.recycle", kCfg);
    PatternCap cap;
    cap.default_cap = as_millis(field(rec, "default_cap_ms", "policy.recycle", kCfg),
                                "policy.recycle.default_cap_ms", kCfg);
    const auto& rules = field(rec, "rules", "policy.recycle", kCfg);
    if (!rules.is_array()) {
      throw ProbeError(kCfg, "policy.recycle.rules: expected an array");
    }
    for (const auto& r : rules) {
      const std::string rp = "policy.recycle.rules[]";
      reject_unknown_keys(r, {"low_ms", "high_ms", "cap_ms"}, rp, kCfg);
      cap.rules.push_back({as_millis(field(r, "low_ms", rp, kCfg), rp, kCfg),
                           as_millis(field(r, "high_ms", rp, kCfg), rp, kCfg),
                           as_millis(field(r, "cap_ms", rp, kCfg), rp, kCfg)});
    }
    p.recycle_rule = std::move(cap);
  } else {
    throw ProbeError(kCfg, "policy.recycle.kind: unknown kind '" + kind + "'");
  }

  const auto& lat = field(doc, "latency", path, kCfg);
  reject_unknown_keys(lat, {"fib", "hello"}, "policy.latency", kCfg);
  p.fibonacci = latency_from_json(field(lat, "fib", "policy.latency", kCfg),
                                  "policy.latency.fib");
  p.hello_world = latency_from_json(field(lat, "hello", "policy.latency", kCfg),
                                    "policy.latency.hello");
  p.validate();
  return p;
}

}  // namespace faasprobe
