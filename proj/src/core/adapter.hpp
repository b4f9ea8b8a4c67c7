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

// Uniform invocation interface over probe targets: the in-process simulator
// and a generic HTTP(S) endpoint with pluggable instance-identity
// extraction.

#ifndef FAASPROBE_CORE_ADAPTER_HPP_
#define FAASPROBE_CORE_ADAPTER_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lifecycle.hpp"
#include "simulator.hpp"

namespace faasprobe {

struct InvocationResponse {
  InstanceIdentity identity;
  // Present when the target can tell whether this call created the
  // instance (simulator, self-UUID handler).
  std::optional<bool> created_this_call;
  Duration latency;
  std::string raw_body;
  int status = 200;
};

// Where the instance identity lives in a response.
struct IdentitySource {
  enum class Kind { kBodyField, kHeader, kSelfUuid };

  Kind kind = Kind::kSelfUuid;
  // JSON pointer for kBodyField, header name for kHeader, unused otherwise.
  std::string argument;

  static IdentitySource body_field(std::string json_pointer) {
    return {Kind::kBodyField, std::move(json_pointer)};
  }
  static IdentitySource header(std::string name) {
    return {Kind::kHeader, std::move(name)};
  }
  static IdentitySource self_uuid() { return {Kind::kSelfUuid, {}}; }

  bool operator==(const IdentitySource&) const = default;
};

using HeaderList = std::vector<std::pair<std::string, std::string>>;

struct ExtractedIdentity {
  InstanceIdentity identity;
  std::optional<bool> created;
};

// Pure. Throws ProbeError(kIdentityUnavailable) with the raw body attached
// when the configured field/header is missing, empty, or malformed.
// Header names match case-insensitively.
ExtractedIdentity extract_identity(std::string_view body,
                                   const HeaderList& headers,
                                   const IdentitySource& source);

class Adapter {
 public:
  virtual ~Adapter() = default;
  // `at` is campaign-relative. The simulator adapter uses it as the arrival
  // time; the HTTP adapter ignores it (the wall clock governs).
  // Throws ProbeError(kInvocationFailed) or (kIdentityUnavailable).
  virtual InvocationResponse invoke(Workload workload, Duration at) = 0;
  virtual std::string describe() const = 0;
};

class SimulatorAdapter final : public Adapter {
 public:
  SimulatorAdapter(ProviderPolicy policy, std::uint64_t seed)
      : sim_(std::move(policy), seed) {}

  InvocationResponse invoke(Workload workload, Duration at) override;
  std::string describe() const override {
    return "simulator:" + sim_.policy().name;
  }

  const Simulator& simulator() const { return sim_; }

 private:
  Simulator sim_;
};

struct HttpTargetOptions {
  std::string url;
  IdentitySource identity_source = IdentitySource::self_uuid();
  Duration request_timeout = Duration::seconds(20);
  int fib_n = 38;
};

class HttpAdapter final : public Adapter {
 public:
  // Throws ProbeError(kConfig) for a URL it cannot parse.
  explicit HttpAdapter(HttpTargetOptions options);
  ~HttpAdapter() override;
  HttpAdapter(HttpAdapter&&) noexcept;
  HttpAdapter& operator=(HttpAdapter&&) noexcept;

  InvocationResponse invoke(Workload workload, Duration at) override;
  std::string describe() const override { return "http:" + options_.url; }

 private:
  struct Impl;
  HttpTargetOptions options_;
  std::unique_ptr<Impl> impl_;
};

// Splits "scheme://host[:port][/path]" into ("scheme://host[:port]", path).
// Path defaults to "/".
std::pair<std::string, std::string> split_url(std::string_view url);

}  // namespace faasprobe

#endif  // FAASPROBE_CORE_ADAPTER_HPP_
