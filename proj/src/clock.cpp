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

#include "easel/clock.hpp"

#include <chrono>
#include <cstdio>

namespace easel {

Timestamp SystemClock::now() {
  using namespace std::chrono;
  return duration_cast<microseconds>(system_clock::now().time_since_epoch()).count();
}

Timestamp MonotonicClock::next() {
  Timestamp t = source_->now();
  Timestamp prev = last_.load();
  for (;;) {
    Timestamp candidate = t > prev ? t : prev + 1;
    if (last_.compare_exchange_weak(prev, candidate)) return candidate;
  }
}

void MonotonicClock::observe(Timestamp t) {
  Timestamp prev = last_.load();
  while (t > prev && !last_.compare_exchange_weak(prev, t)) {
  }
}

std::string make_id(std::string_view prefix, std::uint64_t counter) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "-%06llu", static_cast<unsigned long long>(counter));
  return std::string(prefix) + buf;
}

}  // namespace easel
