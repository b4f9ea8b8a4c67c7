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

#include <algorithm>
#include <cctype>

#include "adapter.hpp"
#include "json.hpp"

namespace faasprobe {

namespace {

bool iequals(std::string_view a, std::string_view b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](char x, char y) {
    return std::tolower(static_cast<unsigned char>(x)) ==
           std::tolower(static_cast<unsigned char>(y));
  });
}

[[noreturn]] void unavailable(const std::string& why, std::string_view body) {
  throw ProbeError(ErrorCode::kIdentityUnavailable, why)
      .set_raw_body(std::string(body));
}

nlohmann::json parse_body(std::string_view body) {
  auto doc = nlohmann::json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) unavailable("response body is not JSON", body);
  return doc;
}

std::string token_from(const nlohmann::json& v, const std::string& what,
                       std::string_view body) {
  std::string token;
  if (v.is_string()) {
    token = v.get<std::string>();
  } else if (v.is_number_integer()) {
    token = v.dump();
  } else {
    unavailable(what + " is not a string", body);
  }
  if (token.empty()) unavailable(what + " is empty", body);
  return token;
}

}  // namespace

ExtractedIdentity extract_identity(std::string_view body,
                                   const HeaderList& headers,
                                   const IdentitySource& source) {
  switch (source.kind) {
    case IdentitySource::Kind::kHeader: {
      for (const auto& [name, value] : headers) {
        if (iequals(name, source.argument) && !value.empty()) {
          return {InstanceIdentity(value), std::nullopt};
        }
      }
      unavailable("header '" + source.argument + "' missing", body);
    }
    case IdentitySource::Kind::kBodyField: {
      nlohmann::json::json_pointer ptr;
      try {
        ptr = nlohmann::json::json_pointer(source.argument);
      } catch (const nlohmann::json::exception&) {
        throw ProbeError(ErrorCode::kConfig,
                         "invalid JSON pointer '" + source.argument + "'");
      }
      const auto doc = parse_body(body);
      if (!doc.contains(ptr)) {
        unavailable("body field '" + source.argument + "' missing", body);
      }
      return {InstanceIdentity(token_from(doc.at(ptr), source.argument, body)),
              std::nullopt};
    }
    case IdentitySource::Kind::kSelfUuid: {
      const auto doc = parse_body(body);
      if (!doc.is_object() || !doc.contains("uuid")) {
        unavailable("self-uuid response lacks 'uuid'", body);
      }
      std::optional<bool> created;
      if (auto it = doc.find("created"); it != doc.end()) {
        if (!it->is_boolean()) unavailable("'created' is not a boolean", body);
        created = it->get<bool>();
      }
      return {InstanceIdentity(token_from(doc["uuid"], "uuid", body)), created};
    }
  }
  unavailable("unknown identity source", body);
}

InvocationResponse SimulatorAdapter::invoke(Workload workload, Duration at) {
  const auto rec = sim_.invoke(at, workload);
  return InvocationResponse{
      .identity = rec.identity,
      .created_this_call = rec.start_kind == StartKind::kCold,
      .latency = rec.latency,
      .raw_body = {},
      .status = 200,
  };
}

}  // namespace faasprobe
