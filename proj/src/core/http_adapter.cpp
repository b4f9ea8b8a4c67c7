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

#include <chrono>

#include "adapter.hpp"
#include "httplib.h"
#include "json.hpp"

namespace faasprobe {

std::pair<std::string, std::string> split_url(std::string_view url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string_view::npos || scheme_end == 0) {
    throw ProbeError(ErrorCode::kConfig,
                     "url '" + std::string(url) + "' lacks a scheme");
  }
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ProbeError(ErrorCode::kConfig,
                     "unsupported url scheme '" + std::string(scheme) + "'");
  }
  const auto host_begin = scheme_end + 3;
  const auto path_begin = url.find('/', host_begin);
  const auto authority = url.substr(host_begin, path_begin - host_begin);
  if (authority.empty()) {
    throw ProbeError(ErrorCode::kConfig,
                     "url '" + std::string(url) + "' lacks a host");
  }
  std::string path = path_begin == std::string_view::npos
                         ? "/"
                         : std::string(url.substr(path_begin));
  return {std::string(url.substr(0, path_begin)), std::move(path)};
}

struct HttpAdapter::Impl {
  explicit Impl(const std::string& base) : client(base) {}
  httplib::Client client;
  std::string path;
};

HttpAdapter::HttpAdapter(HttpTargetOptions options)
    : options_(std::move(options)) {
  auto [base, path] = split_url(options_.url);
  impl_ = std::make_unique<Impl>(base);
  impl_->path = std::move(path);
  const auto timeout = std::chrono::milliseconds(options_.request_timeout.ms());
  impl_->client.set_connection_timeout(timeout);
  impl_->client.set_read_timeout(timeout);
  impl_->client.set_write_timeout(timeout);
}

HttpAdapter::~HttpAdapter() = default;
HttpAdapter::HttpAdapter(HttpAdapter&&) noexcept = default;
HttpAdapter& HttpAdapter::operator=(HttpAdapter&&) noexcept = default;

InvocationResponse HttpAdapter::invoke(Workload workload, Duration /*at*/) {
  nlohmann::json request = {{"workload", std::string(to_string(workload))}};
  if (workload == Workload::kFibonacci) request["n"] = options_.fib_n;

  const auto start = std::chrono::steady_clock::now();
  auto result = impl_->client.Post(impl_->path, request.dump(),
                                   "application/json");
  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);

  if (!result) {
    throw ProbeError(ErrorCode::kInvocationFailed,
                     "POST " + options_.url + " failed: " +
                         httplib::to_string(result.error()))
        .set_retryable(true);
  }
  const auto& res = *result;
  if (res.status < 200 || res.status >= 300) {
    const bool retryable =
        res.status >= 500 || res.status == 408 || res.status == 429;
    throw ProbeError(ErrorCode::kInvocationFailed,
                     "POST " + options_.url + " returned status " +
                         std::to_string(res.status))
        .set_retryable(retryable)
        .set_raw_body(res.body);
  }

  HeaderList headers(res.headers.begin(), res.headers.end());
  auto extracted = extract_identity(res.body, headers, options_.identity_source);
  return InvocationResponse{
      .identity = std::move(extracted.identity),
      .created_this_call = extracted.created,
      .latency = Duration::millis(elapsed.count()),
      .raw_body = res.body,
      .status = res.status,
  };
}

}  // namespace faasprobe
