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

#ifndef FAASPROBE_CORE_ERROR_HPP_
#define FAASPROBE_CORE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace faasprobe {

enum class ErrorCode {
  kInvalidArgument,
  kConfig,
  kEmptySamples,
  kTimeTravel,
  kUnsorted,
  kUpperBoundTooLow,
  kBelowSearchResolution,
  kInconsistentPlatform,
  kNoRecycleObserved,
  kStalePlatformAssumption,
  kTargetMismatch,
  kInvocationFailed,
  kIdentityUnavailable,
  kIo,
  kParse,
};

// Stable machine-readable name, used in reports and by the C API.
std::string_view error_code_name(ErrorCode code);

// Compact evidence for one fixed-interval campaign; attached to errors that
// need to show what the platform did.
struct CampaignSummary {
  long long interval_ms = 0;
  int invocations = 0;
  int warm = 0;
  int eligible = 0;
  int eligible_warm = 0;

  bool operator==(const CampaignSummary&) const = default;
};

class ProbeError : public std::runtime_error {
 public:
  ProbeError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

  bool retryable() const { return retryable_; }
  ProbeError& set_retryable(bool r) {
    retryable_ = r;
    return *this;
  }

  // Raw response body for IdentityUnavailable / InvocationFailed.
  const std::string& raw_body() const { return raw_body_; }
  ProbeError& set_raw_body(std::string body) {
    raw_body_ = std::move(body);
    return *this;
  }

  const std::vector<CampaignSummary>& evidence() const { return evidence_; }
  ProbeError& add_evidence(const CampaignSummary& s) {
    evidence_.push_back(s);
    return *this;
  }

 private:
  ErrorCode code_;
  bool retryable_ = false;
  std::string raw_body_;
  std::vector<CampaignSummary> evidence_;
};

}  // namespace faasprobe

#endif  // FAASPROBE_CORE_ERROR_HPP_
