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

// faasprobe: measure a FaaS platform's idle timeout, keep-alive instance
// lifetime and cold/warm latency, and diff results across checkpoints.
//
//   faasprobe probe <config.json>
//   faasprobe diff <report.json> <report.json>... [--json out.json]
//   faasprobe presets
//
// Exit codes: 0 ok, 1 config/transport/IO error, 2 inconsistent platform
// (probe), 3 change detected (diff).

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "faasprobe/faasprobe.h"

namespace {

constexpr int kExitError = 1;
constexpr int kExitChanged = 3;

int report_failure(fp_status status) {
  std::fprintf(stderr, "faasprobe: %s: %s\n", fp_status_name(status), fp_last_error());
  return kExitError;
}

int run_probe(const std::string& config_path) {
  fp_probe_run* run = nullptr;
  if (auto st = fp_probe_run_config(config_path.c_str(), &run); st != FP_OK) {
    return report_failure(st);
  }
  std::fputs(fp_probe_run_summary(run), stdout);
  std::printf("report:   %s\nrecords:  %s\n", fp_probe_run_report_path(run),
              fp_probe_run_records_path(run));
  const int code = fp_probe_run_exit_code(run);
  fp_probe_run_destroy(run);
  return code;
}

int run_diff(const std::vector<std::string>& paths, const std::string& json_out) {
  std::vector<const char*> argv;
  for (const auto& p : paths) argv.push_back(p.c_str());
  fp_diff* diff = nullptr;
  if (auto st = fp_diff_reports(argv.data(), argv.size(), &diff); st != FP_OK) {
    return report_failure(st);
  }
  std::fputs(fp_diff_text(diff), stdout);
  int code = fp_diff_change_count(diff) > 0 ? kExitChanged : 0;
  if (!json_out.empty()) {
    std::ofstream out(json_out, std::ios::binary | std::ios::trunc);
    out << fp_diff_json(diff) << "\n";
    if (!out) {
      std::fprintf(stderr, "faasprobe: cannot write '%s'\n", json_out.c_str());
      code = kExitError;
    }
  }
  fp_diff_destroy(diff);
  return code;
}

int run_presets() {
  char* json = nullptr;
  if (auto st = fp_presets_json(&json); st != FP_OK) return report_failure(st);
  std::puts(json);
  fp_string_free(json);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-box FaaS idle-timeout and keep-alive prober"};
  app.set_version_flag("--version", fp_version());
  app.require_subcommand(1);

  std::string config_path;
  auto* probe = app.add_subcommand("probe", "Run the campaigns a config requests");
  probe->add_option("config", config_path, "Probe config (JSON)")->required();

  std::vector<std::string> reports;
  std::string json_out;
  auto* diff = app.add_subcommand("diff", "Compare reports from several checkpoints");
  diff->add_option("reports", reports, "Report files (JSON)")->required()->expected(2, -1);
  diff->add_option("--json", json_out, "Also write the diff as JSON");

  app.add_subcommand("presets", "List the shipped simulator policies");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  if (probe->parsed()) return run_probe(config_path);
  if (diff->parsed()) return run_diff(reports, json_out);
  return run_presets();
}
