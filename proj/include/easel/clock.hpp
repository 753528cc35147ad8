// Copyright (c) 2026, The Easel Engine Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <atomic>
#include <memory>

#include "easel/ids.hpp"

namespace easel {

class Clock {
 public:
  virtual ~Clock() = default;
  virtual Timestamp now() = 0;
};

class SystemClock final : public Clock {
 public:
  Timestamp now() override;
};

// Deterministic clock for tests and fixtures: starts at `start` and advances
// by `step` on every read.
class ManualClock final : public Clock {
 public:
  explicit ManualClock(Timestamp start = 1'700'000'000'000'000, Timestamp step = 1'000)
      : current_(start), step_(step) {}

  Timestamp now() override { return current_.fetch_add(step_); }
  void advance(Timestamp delta) { current_.fetch_add(delta); }
  void set(Timestamp t) { current_.store(t); }

 private:
  std::atomic<Timestamp> current_;
  Timestamp step_;
};

// Wraps another clock so successive readings are strictly increasing even if
// the source stalls or steps backwards.
class MonotonicClock {
 public:
  explicit MonotonicClock(std::shared_ptr<Clock> source) : source_(std::move(source)) {}

  Timestamp next();
  void observe(Timestamp t);

 private:
  std::shared_ptr<Clock> source_;
  std::atomic<Timestamp> last_{0};
};

}  // namespace easel
