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

// Persisted campaign results and checkpoint diffing.
//
// Report files are pretty-printed JSON with a fixed field order so that
// load -> save reproduces the input byte for byte. Invocation records are
// JSONL, one object per line.

#ifndef FAASPROBE_CORE_REPORT_HPP_
#define FAASPROBE_CORE_REPORT_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "probe_engine.hpp"

namespace faasprobe {

struct IdleSection {
  Duration x;
  CampaignSummary confirm_at_x;
  CampaignSummary confirm_at_x_plus_1;
  std::vector<CampaignSummary> descent;

  static IdleSection from(const IdleTimeoutEstimate& e) {
    return {e.x, e.confirm_at_x, e.confirm_at_x_plus_1, e.descent};
  }
};

struct CampaignError {
  std::string campaign;
  std::string code;
  std::string message;
  std::vector<CampaignSummary> evidence;
};

struct CampaignReport {
  std::string target_label;
  std::string started_at;
  std::string policy_checkpoint_label;
  std::string tool_version;
  std::optional<IdleSection> idle_estimate;
  std::vector<KeepAliveResult> keepalive;
  std::optional<LatencySummary> latency;
  std::vector<CampaignError> errors;
  nlohmann::ordered_json effective_config = nlohmann::ordered_json::object();
};

nlohmann::ordered_json report_to_json(const CampaignReport& report);
// Throws ProbeError(kParse).
CampaignReport report_from_json(const nlohmann::ordered_json& doc);

std::string serialize_report(const CampaignReport& report);
// Throws ProbeError(kIo) / (kParse).
CampaignReport read_report_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

std::string record_to_jsonl_line(const InvocationRecord& record);
void write_records(std::ostream& out, const std::vector<InvocationRecord>& records);
// Throws ProbeError(kParse) naming the 1-based line number of a bad line.
std::vector<InvocationRecord> read_records(std::istream& in);

struct CheckpointChange {
  std::string from_label;
  std::string to_label;
  // "idle_timeout", "keepalive_max@5m", "keepalive_p90@5m", ...
  std::string field;
  Duration old_value;
  Duration new_value;

  long long delta_minutes() const {
    return new_value.whole_minutes() - old_value.whole_minutes();
  }
};

struct CheckpointRow {
  std::string label;
  std::string started_at;
  std::optional<Duration> idle_timeout;
  struct KeepAlive {
    Duration interval;
    Duration max;
    Duration p90;
  };
  std::vector<KeepAlive> keepalive;
};

struct DiffReport {
  std::string target_label;
  std::vector<CheckpointRow> rows;
  std::vector<CheckpointChange> changes;
};

// Orders reports by started_at and marks every value that differs from the
// preceding checkpoint. A value is compared only when both neighbours carry
// it. Throws kInvalidArgument for fewer than two reports and
// kTargetMismatch when target labels differ.
DiffReport compare_checkpoints(std::vector<CampaignReport> reports);

std::string format_diff(const DiffReport& diff);
nlohmann::ordered_json diff_to_json(const DiffReport& diff);

}  // namespace faasprobe

#endif  // FAASPROBE_CORE_REPORT_HPP_
