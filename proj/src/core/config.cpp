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

#include "config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace faasprobe {

namespace {

using json_util::as_bool;
using json_util::as_int;
using json_util::as_number;
using json_util::as_string;
using json_util::field;
using json_util::reject_unknown_keys;
using J = nlohmann::json;
using OJ = nlohmann::ordered_json;
constexpr auto kCfg = ErrorCode::kConfig;

// Optional keys may be spelled out as null, as effective configs do.
bool present(const J& j, const char* key) { return j.contains(key) && !j[key].is_null(); }

Duration scaled(const J& j, const std::string& path, double unit_ms) {
  const double v = as_number(j, path, kCfg);
  if (!(v > 0) || !std::isfinite(v)) {
    throw ProbeError(kCfg, path + ": must be a positive number");
  }
  return Duration::millis(static_cast<std::int64_t>(std::llround(v * unit_ms)));
}

Duration minutes_field(const J& j, const std::string& path) {
  return scaled(j, path, 60'000.0);
}

int positive_int(const J& j, const std::string& path) {
  const auto v = as_int(j, path, kCfg);
  if (v < 1 || v > 1'000'000) throw ProbeError(kCfg, path + ": out of range");
  return static_cast<int>(v);
}

double as_minutes(Duration d) { return static_cast<double>(d.ms()) / 60'000.0; }
double as_hours(Duration d) { return static_cast<double>(d.ms()) / 3'600'000.0; }

IdentitySource parse_identity_source(const J& j) {
  const std::string path = "target.identity_source";
  json_util::require_object(j, path, kCfg);
  const auto kind = as_string(field(j, "kind", path, kCfg), path + ".kind", kCfg);
  if (kind == "self_uuid") {
    reject_unknown_keys(j, {"kind"}, path, kCfg);
    return IdentitySource::self_uuid();
  }
  if (kind == "body_field") {
    reject_unknown_keys(j, {"kind", "pointer"}, path, kCfg);
    auto ptr = as_string(field(j, "pointer", path, kCfg), path + ".pointer", kCfg);
    try {
      (void)J::json_pointer(ptr);
    } catch (const J::exception&) {
      throw ProbeError(kCfg, path + ".pointer: invalid JSON pointer");
    }
    return IdentitySource::body_field(std::move(ptr));
  }
  if (kind == "header") {
    reject_unknown_keys(j, {"kind", "name"}, path, kCfg);
    auto name = as_string(field(j, "name", path, kCfg), path + ".name", kCfg);
    if (name.empty()) throw ProbeError(kCfg, path + ".name: empty");
    return IdentitySource::header(std::move(name));
  }
  throw ProbeError(kCfg, path + ".kind: unknown kind '" + kind + "'");
}

OJ identity_source_json(const IdentitySource& s) {
  switch (s.kind) {
    case IdentitySource::Kind::kSelfUuid: return {{"kind", "self_uuid"}};
    case IdentitySource::Kind::kBodyField:
      return {{"kind", "body_field"}, {"pointer", s.argument}};
    case IdentitySource::Kind::kHeader:
      return {{"kind", "header"}, {"name", s.argument}};
  }
  return nullptr;
}

TargetConfig parse_target(const J& j) {
  const std::string path = "target";
  reject_unknown_keys(j,
                      {"kind", "preset", "policy", "url", "identity_source",
                       "timeout_s", "retries", "fib_n", "workload", "memory_mb"},
                      path, kCfg);
  TargetConfig t;
  const auto kind = as_string(field(j, "kind", path, kCfg), "target.kind", kCfg);
  if (j.contains("workload")) {
    const auto w = as_string(j["workload"], "target.workload", kCfg);
    if (w != "fib" && w != "hello") {
      throw ProbeError(kCfg, "target.workload: expected \"fib\" or \"hello\"");
    }
    t.workload = parse_workload(w);
  }
  if (present(j, "memory_mb")) t.memory_mb = positive_int(j["memory_mb"], "target.memory_mb");
  if (j.contains("retries")) {
    const auto r = as_int(j["retries"], "target.retries", kCfg);
    if (r < 0 || r > 10) throw ProbeError(kCfg, "target.retries: out of range");
    t.retries = static_cast<int>(r);
  }

  auto forbid = [&](std::initializer_list<const char*> keys, const std::string& why) {
    for (auto k : keys) {
      if (j.contains(k)) throw ProbeError(kCfg, "target." + std::string(k) + ": " + why);
    }
  };

  if (kind == "simulator") {
    t.kind = TargetConfig::Kind::kSimulator;
    forbid({"url", "identity_source", "timeout_s", "fib_n"},
           "not valid for simulator targets");
    if (j.contains("preset") == j.contains("policy")) {
      throw ProbeError(kCfg, "target: simulator needs exactly one of preset/policy");
    }
    if (j.contains("preset")) {
      t.preset = as_string(j["preset"], "target.preset", kCfg);
      (void)preset(*t.preset);
    } else {
      t.policy = policy_from_json(j["policy"]);
    }
  } else if (kind == "http") {
    t.kind = TargetConfig::Kind::kHttp;
    forbid({"preset", "policy"}, "not valid for http targets");
    t.http.url = as_string(field(j, "url", path, kCfg), "target.url", kCfg);
    (void)split_url(t.http.url);
    if (j.contains("identity_source")) {
      t.http.identity_source = parse_identity_source(j["identity_source"]);
    }
    if (j.contains("timeout_s")) {
      t.http.request_timeout = scaled(j["timeout_s"], "target.timeout_s", 1000.0);
    }
    if (j.contains("fib_n")) t.http.fib_n = positive_int(j["fib_n"], "target.fib_n");
  } else {
    throw ProbeError(kCfg, "target.kind: expected \"simulator\" or \"http\"");
  }
  return t;
}

SearchConfig parse_search(const J& j) {
  const std::string path = "search";
  reject_unknown_keys(j,
                      {"upper_bound_min", "step_min", "campaign_hours",
                       "warm_confirm_threshold"},
                      path, kCfg);
  SearchConfig s;
  if (j.contains("upper_bound_min")) {
    s.upper_bound = minutes_field(j["upper_bound_min"], "search.upper_bound_min");
  }
  if (j.contains("step_min")) s.step = minutes_field(j["step_min"], "search.step_min");
  if (j.contains("campaign_hours")) {
    s.campaign_duration = scaled(j["campaign_hours"], "search.campaign_hours", 3'600'000.0);
  }
  if (j.contains("warm_confirm_threshold")) {
    s.warm_confirm_threshold =
        as_number(j["warm_confirm_threshold"], "search.warm_confirm_threshold", kCfg);
  }
  s.validate();
  return s;
}

KeepAliveConfig parse_keepalive(const J& j) {
  const std::string path = "keepalive";
  reject_unknown_keys(j, {"interval_min", "max_hours", "min_generations"}, path, kCfg);
  KeepAliveConfig k;
  if (j.contains("interval_min")) {
    const auto& v = j["interval_min"];
    if (v.is_array()) {
      if (v.empty()) throw ProbeError(kCfg, "keepalive.interval_min: empty list");
      for (const auto& e : v) k.intervals.push_back(minutes_field(e, "keepalive.interval_min"));
    } else {
      k.intervals.push_back(minutes_field(v, "keepalive.interval_min"));
    }
  }
  if (j.contains("max_hours")) {
    k.max_duration = scaled(j["max_hours"], "keepalive.max_hours", 3'600'000.0);
  }
  if (j.contains("min_generations")) {
    k.min_generations = positive_int(j["min_generations"], "keepalive.min_generations");
  }
  return k;
}

LatencyConfig parse_latency(const J& j) {
  reject_unknown_keys(j, {"repetitions", "cooldown_min"}, "latency", kCfg);
  LatencyConfig l;
  if (j.contains("repetitions")) {
    l.repetitions = positive_int(j["repetitions"], "latency.repetitions");
    if (l.repetitions < 3) throw ProbeError(kCfg, "latency.repetitions: must be >= 3");
  }
  if (present(j, "cooldown_min")) {
    l.cooldown = minutes_field(j["cooldown_min"], "latency.cooldown_min");
  }
  return l;
}

OutputConfig parse_output(const J& j) {
  reject_unknown_keys(j, {"dir", "label", "checkpoint", "started_at"}, "output", kCfg);
  OutputConfig o;
  if (j.contains("dir")) o.dir = as_string(j["dir"], "output.dir", kCfg);
  if (j.contains("label")) o.label = as_string(j["label"], "output.label", kCfg);
  if (present(j, "checkpoint")) o.checkpoint = as_string(j["checkpoint"], "output.checkpoint", kCfg);
  if (present(j, "started_at")) o.started_at = as_string(j["started_at"], "output.started_at", kCfg);
  return o;
}

}  // namespace

ProviderPolicy ProbeConfig::simulator_policy() const {
  if (target.kind != TargetConfig::Kind::kSimulator) {
    throw ProbeError(kCfg, "target is not a simulator");
  }
  return target.policy ? *target.policy : preset(*target.preset);
}

ProbeConfig parse_probe_config(const J& doc,
                               std::optional<std::uint64_t> seed_override) {
  reject_unknown_keys(doc,
                      {"seed", "target", "search", "keepalive", "latency", "output"},
                      "config", kCfg);
  ProbeConfig c;
  if (doc.contains("seed")) {
    const auto& s = doc["seed"];
    if (!s.is_number_unsigned()) throw ProbeError(kCfg, "config.seed: expected an unsigned integer");
    c.seed = s.get<std::uint64_t>();
  }
  if (seed_override) c.seed = *seed_override;
  c.target = parse_target(field(doc, "target", "config", kCfg));
  if (doc.contains("search")) {
    c.search = parse_search(doc["search"]);
    c.run_search = true;
  }
  if (doc.contains("keepalive")) c.keepalive = parse_keepalive(doc["keepalive"]);
  if (doc.contains("latency")) c.latency = parse_latency(doc["latency"]);
  if (!c.run_search && !c.keepalive && !c.latency) {
    throw ProbeError(kCfg, "config: no campaign requested (search, keepalive, latency)");
  }
  if (c.keepalive && c.keepalive->intervals.empty() && !c.run_search) {
    throw ProbeError(kCfg, "keepalive.interval_min is required without a search section");
  }
  if (doc.contains("output")) c.output = parse_output(doc["output"]);
  if (c.output.label.empty()) {
    c.output.label = c.target.kind == TargetConfig::Kind::kSimulator
                         ? c.simulator_policy().name
                         : std::string("http-target");
  }
  return c;
}

ProbeConfig load_probe_config(const std::string& path,
                              std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProbeError(kCfg, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto doc = J::parse(buf.str(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw ProbeError(kCfg, "config '" + path + "' is not valid JSON");
  return parse_probe_config(doc, seed_override);
}

std::optional<std::uint64_t> seed_from_environment() {
  const char* raw = std::getenv("PROBE_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  char* end = nullptr;
  errno = 0;
  const auto v = std::strtoull(raw, &end, 10);
  if (errno != 0 || *end != '\0' || raw[0] == '-') {
    throw ProbeError(kCfg, std::string("PROBE_SEED is not an unsigned integer: ") + raw);
  }
  return v;
}

OJ effective_config_json(const ProbeConfig& c) {
  OJ target;
  if (c.target.kind == TargetConfig::Kind::kSimulator) {
    target["kind"] = "simulator";
    if (c.target.preset) target["preset"] = *c.target.preset;
    target["policy"] = policy_to_json(c.simulator_policy());
  } else {
    target["kind"] = "http";
    target["url"] = c.target.http.url;
    target["identity_source"] = identity_source_json(c.target.http.identity_source);
    target["timeout_s"] = static_cast<double>(c.target.http.request_timeout.ms()) / 1000.0;
    target["fib_n"] = c.target.http.fib_n;
  }
  target["retries"] = c.target.retries;
  target["workload"] = std::string(to_string(c.target.workload));
  target["memory_mb"] = c.target.memory_mb ? OJ(*c.target.memory_mb) : OJ(nullptr);

  OJ doc;
  doc["seed"] = c.seed;
  doc["target"] = target;
  if (c.run_search) {
    doc["search"] = {{"upper_bound_min", as_minutes(c.search.upper_bound)},
                     {"step_min", as_minutes(c.search.step)},
                     {"campaign_hours", as_hours(c.search.campaign_duration)},
                     {"warm_confirm_threshold", c.search.warm_confirm_threshold}};
  }
  if (c.keepalive) {
    OJ intervals = OJ::array();
    for (auto d : c.keepalive->intervals) intervals.push_back(as_minutes(d));
    doc["keepalive"] = {{"interval_min", intervals},
                        {"max_hours", as_hours(c.keepalive->max_duration)},
                        {"min_generations", c.keepalive->min_generations}};
  }
  if (c.latency) {
    doc["latency"] = {{"repetitions", c.latency->repetitions},
                      {"cooldown_min", c.latency->cooldown
                                           ? OJ(as_minutes(*c.latency->cooldown))
                                           : OJ(nullptr)}};
  }
  doc["output"] = {{"dir", c.output.dir},
                   {"label", c.output.label},
                   {"checkpoint", c.output.checkpoint ? OJ(*c.output.checkpoint) : OJ(nullptr)},
                   {"started_at", c.output.started_at ? OJ(*c.output.started_at) : OJ(nullptr)}};
  return doc;
}

}  // namespace faasprobe
