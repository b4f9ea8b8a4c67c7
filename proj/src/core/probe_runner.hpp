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

// End-to-end driver behind the `probe` subcommand: runs the campaigns a
// config requests, then assembles the report, the observation log and a
// plain-text summary.

#ifndef FAASPROBE_CORE_PROBE_RUNNER_HPP_
#define FAASPROBE_CORE_PROBE_RUNNER_HPP_

#include <string>
#include <vector>

#include "config.hpp"
#include "report.hpp"

namespace faasprobe {

struct ProbeOutcome {
  CampaignReport report;
  std::vector<InvocationRecord> records;
  std::string summary;
  // 0 success, 1 config/transport error, 2 platform inconsistent with the
  // measured assumptions.
  int exit_code = 0;
  std::string report_path;
  std::string records_path;
};

// Never throws for campaign failures; they land in report.errors.
ProbeOutcome run_probe(const ProbeConfig& config);

// run_probe() plus writing the report and JSONL files under output.dir.
ProbeOutcome run_probe_and_persist(const ProbeConfig& config);

std::string format_summary(const CampaignReport& report);

// Presets as a JSON array of policy documents.
nlohmann::ordered_json presets_json();

}  // namespace faasprobe

#endif  // FAASPROBE_CORE_PROBE_RUNNER_HPP_
