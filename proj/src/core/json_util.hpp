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

// Small helpers for strict JSON reading. Every accessor throws
// ProbeError(code) with a dotted path to the offending field.

#ifndef FAASPROBE_CORE_JSON_UTIL_HPP_
#define FAASPROBE_CORE_JSON_UTIL_HPP_

#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>

#include "error.hpp"
#include "json.hpp"
#include "lifecycle.hpp"

namespace faasprobe::json_util {

template <class J>
inline void require_object(const J& j, const std::string& path,
                           ErrorCode code) {
  if (!j.is_object()) throw ProbeError(code, path + ": expected an object");
}

template <class J>
inline void reject_unknown_keys(const J& j,
                                std::initializer_list<std::string_view> allowed,
                                const std::string& path, ErrorCode code) {
  require_object(j, path, code);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw ProbeError(code, path + ": unknown key '" + key + "'");
  }
}

template <class J>
inline const J& field(const J& j,
                                   std::string_view key,
                                   const std::string& path, ErrorCode code) {
  auto it = j.find(std::string(key));
  if (it == j.end()) {
    throw ProbeError(code, path + ": missing '" + std::string(key) + "'");
  }
  return *it;
}

template <class J>
inline std::int64_t as_int(const J& j, const std::string& path,
                           ErrorCode code) {
  if (!j.is_number_integer()) {
    throw ProbeError(code, path + ": expected an integer");
  }
  return j.template get<std::int64_t>();
}

template <class J>
inline double as_number(const J& j, const std::string& path,
                        ErrorCode code) {
  if (!j.is_number()) throw ProbeError(code, path + ": expected a number");
  return j.template get<double>();
}

template <class J>
inline std::string as_string(const J& j, const std::string& path,
                             ErrorCode code) {
  if (!j.is_string()) throw ProbeError(code, path + ": expected a string");
  return j.template get<std::string>();
}

template <class J>
inline bool as_bool(const J& j, const std::string& path,
                    ErrorCode code) {
  if (!j.is_boolean()) throw ProbeError(code, path + ": expected a boolean");
  return j.template get<bool>();
}

template <class J>
inline Duration as_millis(const J& j, const std::string& path,
                          ErrorCode code) {
  const auto v = as_int(j, path, code);
  if (v < 0) throw ProbeError(code, path + ": negative duration");
  return Duration::millis(v);
}

}  // namespace faasprobe::json_util

#endif  // FAASPROBE_CORE_JSON_UTIL_HPP_
