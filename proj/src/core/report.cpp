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

#include "report.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "json_util.hpp"

namespace faasprobe {

namespace {

using OJ = nlohmann::ordered_json;
using json_util::as_int;
using json_util::as_millis;
using json_util::as_number;
using json_util::as_string;
using json_util::field;
constexpr auto kParse = ErrorCode::kParse;

OJ summary_to_json(const CampaignSummary& s) {
  return {{"interval_ms", s.interval_ms},
          {"invocations", s.invocations},
          {"warm", s.warm},
          {"eligible", s.eligible},
          {"eligible_warm", s.eligible_warm}};
}

CampaignSummary summary_from_json(const OJ& j, const std::string& path) {
  json_util::require_object(j, path, kParse);
  auto num = [&](const char* key) {
    return as_int(field(j, key, path, kParse), path + "." + key, kParse);
  };
  return {num("interval_ms"), static_cast<int>(num("invocations")),
          static_cast<int>(num("warm")), static_cast<int>(num("eligible")),
          static_cast<int>(num("eligible_warm"))};
}

OJ summaries_to_json(const std::vector<CampaignSummary>& v) {
  auto out = OJ::array();
  for (const auto& s : v) out.push_back(summary_to_json(s));
  return out;
}

std::vector<CampaignSummary> summaries_from_json(const OJ& j,
                                                 const std::string& path) {
  if (!j.is_array()) throw ProbeError(kParse, path + ": expected an array");
  std::vector<CampaignSummary> out;
  for (const auto& s : j) out.push_back(summary_from_json(s, path + "[]"));
  return out;
}

OJ keepalive_to_json(const KeepAliveResult& k) {
  auto samples = OJ::array();
  for (const auto& s : k.samples) {
    samples.push_back({{"identity", s.identity.str()},
                       {"first_ms", s.first_warm_at.ms()},
                       {"last_warm_ms", s.last_warm_at.ms()},
                       {"lifetime_min", s.lifetime().whole_minutes()}});
  }
  return {{"polling_interval_ms", k.polling_interval.ms()},
          {"max_ms", k.max.ms()},
          {"p90_ms", k.p90.ms()},
          {"max_min", k.max.whole_minutes()},
          {"p90_min", k.p90.whole_minutes()},
          {"generations", k.samples.size()},
          {"samples", samples}};
}

KeepAliveResult keepalive_from_json(const OJ& j) {
  const std::string path = "keepalive[]";
  json_util::require_object(j, path, kParse);
  KeepAliveResult k;
  k.polling_interval = as_millis(field(j, "polling_interval_ms", path, kParse),
                                 path + ".polling_interval_ms", kParse);
  k.max = as_millis(field(j, "max_ms", path, kParse), path + ".max_ms", kParse);
  k.p90 = as_millis(field(j, "p90_ms", path, kParse), path + ".p90_ms", kParse);
  const auto& samples = field(j, "samples", path, kParse);
  if (!samples.is_array()) {
    throw ProbeError(kParse, path + ".samples: expected an array");
  }
  for (const auto& s : samples) {
    const std::string sp = path + ".samples[]";
    json_util::require_object(s, sp, kParse);
    k.samples.push_back(LifetimeSample{
        as_millis(field(s, "first_ms", sp, kParse), sp, kParse),
        as_millis(field(s, "last_warm_ms", sp, kParse), sp, kParse),
        InstanceIdentity(as_string(field(s, "identity", sp, kParse), sp, kParse)),
    });
  }
  return k;
}

OJ latency_stats_to_json(const LatencyStats& s) {
  return {{"cold_mean_ms", s.cold_mean_ms},
          {"warm_mean_ms", s.warm_mean_ms},
          {"samples", s.samples}};
}

LatencyStats latency_stats_from_json(const OJ& j, const std::string& path) {
  json_util::require_object(j, path, kParse);
  return {as_number(field(j, "cold_mean_ms", path, kParse), path, kParse),
          as_number(field(j, "warm_mean_ms", path, kParse), path, kParse),
          static_cast<int>(as_int(field(j, "samples", path, kParse), path, kParse))};
}

}  // namespace

OJ report_to_json(const CampaignReport& r) {
  OJ doc;
  doc["target_label"] = r.target_label;
  doc["started_at"] = r.started_at;
  doc["policy_checkpoint_label"] = r.policy_checkpoint_label;
  doc["tool_version"] = r.tool_version;
  if (r.idle_estimate) {
    const auto& e = *r.idle_estimate;
    doc["idle_estimate"] = {{"x_ms", e.x.ms()},
                            {"x_min", e.x.whole_minutes()},
                            {"confirm_at_x", summary_to_json(e.confirm_at_x)},
                            {"confirm_at_x_plus_1",
                             summary_to_json(e.confirm_at_x_plus_1)},
                            {"descent", summaries_to_json(e.descent)}};
  } else {
    doc["idle_estimate"] = nullptr;
  }
  auto ka = OJ::array();
  for (const auto& k : r.keepalive) ka.push_back(keepalive_to_json(k));
  doc["keepalive"] = ka;
  if (r.latency) {
    doc["latency"] = {{"fib", latency_stats_to_json(r.latency->fibonacci)},
                      {"hello", latency_stats_to_json(r.latency->hello_world)}};
  } else {
    doc["latency"] = nullptr;
  }
  auto errors = OJ::array();
  for (const auto& e : r.errors) {
    errors.push_back({{"campaign", e.campaign},
                      {"code", e.code},
                      {"message", e.message},
                      {"evidence", summaries_to_json(e.evidence)}});
  }
  doc["errors"] = errors;
  doc["effective_config"] = r.effective_config;
  return doc;
}

CampaignReport report_from_json(const OJ& doc) {
  const std::string path = "report";
  json_util::require_object(doc, path, kParse);
  CampaignReport r;
  auto text = [&](const char* key) {
    return as_string(field(doc, key, path, kParse), path + "." + key, kParse);
  };
  r.target_label = text("target_label");
  r.started_at = text("started_at");
  r.policy_checkpoint_label = text("policy_checkpoint_label");
  r.tool_version = text("tool_version");

  if (const auto& e = field(doc, "idle_estimate", path, kParse); !e.is_null()) {
    const std::string ep = "report.idle_estimate";
    json_util::require_object(e, ep, kParse);
    r.idle_estimate = IdleSection{
        as_millis(field(e, "x_ms", ep, kParse), ep + ".x_ms", kParse),
        summary_from_json(field(e, "confirm_at_x", ep, kParse), ep + ".confirm_at_x"),
        summary_from_json(field(e, "confirm_at_x_plus_1", ep, kParse),
                          ep + ".confirm_at_x_plus_1"),
        summaries_from_json(field(e, "descent", ep, kParse), ep + ".descent"),
    };
  }
  const auto& ka = field(doc, "keepalive", path, kParse);
  if (!ka.is_array()) throw ProbeError(kParse, "report.keepalive: expected an array");
  for (const auto& k : ka) r.keepalive.push_back(keepalive_from_json(k));

  if (const auto& l = field(doc, "latency", path, kParse); !l.is_null()) {
    json_util::require_object(l, "report.latency", kParse);
    r.latency = LatencySummary{
        latency_stats_from_json(field(l, "fib", "report.latency", kParse),
                                "report.latency.fib"),
        latency_stats_from_json(field(l, "hello", "report.latency", kParse),
                                "report.latency.hello"),
    };
  }
  const auto& errors = field(doc, "errors", path, kParse);
  if (!errors.is_array()) throw ProbeError(kParse, "report.errors: expected an array");
  for (const auto& e : errors) {
    const std::string ep = "report.errors[]";
    json_util::require_object(e, ep, kParse);
    r.errors.push_back({as_string(field(e, "campaign", ep, kParse), ep, kParse),
                        as_string(field(e, "code", ep, kParse), ep, kParse),
                        as_string(field(e, "message", ep, kParse), ep, kParse),
                        summaries_from_json(field(e, "evidence", ep, kParse),
                                            ep + ".evidence")});
  }
  r.effective_config = field(doc, "effective_config", path, kParse);
  return r;
}

std::string serialize_report(const CampaignReport& report) {
  return report_to_json(report).dump(2) + "\n";
}

CampaignReport read_report_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProbeError(ErrorCode::kIo, "cannot open report '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  auto doc = OJ::parse(buf.str(), nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) {
    throw ProbeError(kParse, "report '" + path + "' is not valid JSON");
  }
  try {
    return report_from_json(doc);
  } catch (const ProbeError& e) {
    throw ProbeError(e.code(), path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ProbeError(ErrorCode::kIo, "cannot write '" + path + "'");
  out << text;
  if (!out) throw ProbeError(ErrorCode::kIo, "short write to '" + path + "'");
}

std::string record_to_jsonl_line(const InvocationRecord& r) {
  const OJ line = {{"seq", r.sequence_no},
                   {"campaign", r.campaign},
                   {"scheduled_ms", r.scheduled_at.ms()},
                   {"sent_ms", r.sent_at.ms()},
                   {"latency_ms", r.latency.ms()},
                   {"identity", r.identity.str()},
                   {"start", std::string(to_string(r.start_kind))},
                   {"workload", std::string(to_string(r.workload))},
                   {"retries", r.retries}};
  return line.dump();
}

void write_records(std::ostream& out,
                   const std::vector<InvocationRecord>& records) {
  for (const auto& r : records) out << record_to_jsonl_line(r) << '\n';
}

std::vector<InvocationRecord> read_records(std::istream& in) {
  std::vector<InvocationRecord> out;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    try {
      const auto j = nlohmann::json::parse(line);
      json_util::reject_unknown_keys(
          j,
          {"seq", "campaign", "scheduled_ms", "sent_ms", "latency_ms",
           "identity", "start", "workload", "retries"},
          where, kParse);
      out.push_back(InvocationRecord{
          .sequence_no = as_int(field(j, "seq", where, kParse), where, kParse),
          .campaign = as_string(field(j, "campaign", where, kParse), where, kParse),
          .scheduled_at = as_millis(field(j, "scheduled_ms", where, kParse), where, kParse),
          .sent_at = as_millis(field(j, "sent_ms", where, kParse), where, kParse),
          .latency = as_millis(field(j, "latency_ms", where, kParse), where, kParse),
          .identity = InstanceIdentity(
              as_string(field(j, "identity", where, kParse), where, kParse)),
          .start_kind = parse_start_kind(
              as_string(field(j, "start", where, kParse), where, kParse)),
          .workload = parse_workload(
              as_string(field(j, "workload", where, kParse), where, kParse)),
          .retries = static_cast<int>(
              as_int(field(j, "retries", where, kParse), where, kParse)),
      });
    } catch (const nlohmann::json::exception& e) {
      throw ProbeError(kParse, where + ": " + e.what());
    } catch (const ProbeError& e) {
      const std::string msg = e.what();
      throw ProbeError(kParse, msg.rfind(where, 0) == 0 ? msg : where + ": " + msg);
    }
  }
  return out;
}

DiffReport compare_checkpoints(std::vector<CampaignReport> reports) {
  if (reports.size() < 2) {
    throw ProbeError(ErrorCode::kInvalidArgument,
                     "diff needs at least two reports");
  }
  for (const auto& r : reports) {
    if (r.target_label != reports.front().target_label) {
      throw ProbeError(ErrorCode::kTargetMismatch,
                       "target labels differ: '" + reports.front().target_label +
                           "' vs '" + r.target_label + "'");
    }
  }
  std::stable_sort(reports.begin(), reports.end(),
                   [](const CampaignReport& a, const CampaignReport& b) {
                     return a.started_at < b.started_at;
                   });

  DiffReport diff;
  diff.target_label = reports.front().target_label;
  for (const auto& r : reports) {
    CheckpointRow row{r.policy_checkpoint_label, r.started_at, std::nullopt, {}};
    if (r.idle_estimate) row.idle_timeout = r.idle_estimate->x;
    for (const auto& k : r.keepalive) {
      row.keepalive.push_back({k.polling_interval, k.max, k.p90});
    }
    diff.rows.push_back(std::move(row));
  }

  for (std::size_t i = 1; i < diff.rows.size(); ++i) {
    const auto& prev = diff.rows[i - 1];
    const auto& cur = diff.rows[i];
    auto mark = [&](std::string field, Duration a, Duration b) {
      if (a != b) diff.changes.push_back({prev.label, cur.label, std::move(field), a, b});
    };
    if (prev.idle_timeout && cur.idle_timeout) {
      mark("idle_timeout", *prev.idle_timeout, *cur.idle_timeout);
    }
    for (const auto& k : cur.keepalive) {
      auto it = std::find_if(prev.keepalive.begin(), prev.keepalive.end(),
                             [&](const auto& p) { return p.interval == k.interval; });
      if (it == prev.keepalive.end()) continue;
      const auto suffix = keepalive_tag(k.interval).substr(std::string("keepalive").size());
      mark("keepalive_max" + suffix, it->max, k.max);
      mark("keepalive_p90" + suffix, it->p90, k.p90);
    }
  }
  return diff;
}

std::string format_diff(const DiffReport& diff) {
  auto minutes = [](const std::optional<Duration>& d) {
    return d ? std::to_string(d->whole_minutes()) : std::string("-");
  };
  std::size_t label_w = std::string("checkpoint").size();
  for (const auto& r : diff.rows) label_w = std::max(label_w, r.label.size());

  std::ostringstream out;
  out << "target: " << diff.target_label << "\n\n";
  out << std::left << std::setw(static_cast<int>(label_w) + 2) << "checkpoint"
      << std::setw(22) << "started_at" << std::setw(18) << "idle_timeout_min"
      << "keepalive (interval: max/p90 min)\n";
  for (const auto& r : diff.rows) {
    out << std::setw(static_cast<int>(label_w) + 2) << r.label << std::setw(22)
        << r.started_at << std::setw(18) << minutes(r.idle_timeout);
    if (r.keepalive.empty()) out << "-";
    for (std::size_t i = 0; i < r.keepalive.size(); ++i) {
      const auto& k = r.keepalive[i];
      out << (i ? "  " : "") << k.interval.whole_minutes() << "m: "
          << k.max.whole_minutes() << "/" << k.p90.whole_minutes();
    }
    out << "\n";
  }
  out << "\n";
  if (diff.changes.empty()) {
    out << "no changes\n";
    return out.str();
  }
  out << "changes:\n";
  for (const auto& c : diff.changes) {
    const auto delta = c.delta_minutes();
    out << "  " << c.from_label << " -> " << c.to_label << "  " << c.field << ": "
        << c.old_value.whole_minutes() << " → " << c.new_value.whole_minutes()
        << " (" << (delta > 0 ? "+" : "") << delta << " min)\n";
  }
  return out.str();
}

nlohmann::ordered_json diff_to_json(const DiffReport& diff) {
  OJ rows = OJ::array();
  for (const auto& r : diff.rows) {
    OJ ka = OJ::array();
    for (const auto& k : r.keepalive) {
      ka.push_back({{"interval_ms", k.interval.ms()},
                    {"max_ms", k.max.ms()},
                    {"p90_ms", k.p90.ms()}});
    }
    rows.push_back({{"checkpoint", r.label},
                    {"started_at", r.started_at},
                    {"idle_timeout_ms",
                     r.idle_timeout ? OJ(r.idle_timeout->ms()) : OJ(nullptr)},
                    {"keepalive", ka}});
  }
  OJ changes = OJ::array();
  for (const auto& c : diff.changes) {
    changes.push_back({{"from", c.from_label},
                       {"to", c.to_label},
                       {"field", c.field},
                       {"old_ms", c.old_value.ms()},
                       {"new_ms", c.new_value.ms()},
                       {"delta_min", c.delta_minutes()}});
  }
  return {{"target_label", diff.target_label},
          {"rows", rows},
          {"changes", changes}};
}

}  // namespace faasprobe
