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

#ifndef FAASPROBE_CORE_CLOCK_HPP_
#define FAASPROBE_CORE_CLOCK_HPP_

#include <chrono>
#include <string>

#include "lifecycle.hpp"

namespace faasprobe {

// Campaign-relative time source. The probe engine schedules every request
// by absolute target time through wait_until(), so skew never accumulates.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual Duration now() const = 0;
  // Returns immediately if `t` is already in the past.
  virtual void wait_until(Duration t) = 0;
};

// Monotone simulated time; wait_until() jumps forward.
class VirtualClock final : public Clock {
 public:
  Duration now() const override { return now_; }
  void wait_until(Duration t) override {
    if (t > now_) now_ = t;
  }

 private:
  Duration now_;
};

// steady_clock time since construction.
class WallClock final : public Clock {
 public:
  WallClock() : origin_(std::chrono::steady_clock::now()) {}
  Duration now() const override;
  void wait_until(Duration t) override;

 private:
  std::chrono::steady_clock::time_point origin_;
};

// Current UTC time as "YYYY-MM-DDTHH:MM:SSZ".
std::string utc_now_rfc3339();

}  // namespace faasprobe

#endif  // FAASPROBE_CORE_CLOCK_HPP_
