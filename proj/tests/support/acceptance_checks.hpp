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

#include <cstdint>
#include <string>

namespace easel::test {

struct CriterionResult {
  std::string name;
  bool ok = false;
  std::string detail;
  double seconds = 0;
  double budget = 0;  // seconds; 0 means unbounded
};

// Each check runs one acceptance criterion end to end against independent
// oracles. Sizes are parameters so unit tests can run small variants; the
// defaults are the acceptance sizes.
CriterionResult check_slider_maps(int samples = 1000, std::uint64_t seed = 20260101);
CriterionResult check_structure_ends();
CriterionResult check_golden_graphs();
CriterionResult check_switch_strategy(int specs = 500, std::uint64_t seed = 11);
CriterionResult check_recreate_round_trip(int runs = 200, std::uint64_t seed = 23);
CriterionResult check_provenance_invariants(int operations = 10000, int fixtures = 20, std::uint64_t seed = 5);
CriterionResult check_history_window();
CriterionResult check_heatmap_and_trails(std::uint64_t seed = 3);
CriterionResult check_end_to_end();
CriterionResult check_crash_recovery(int trials = 50, std::uint64_t seed = 1000);
CriterionResult check_wire_conformance();

}  // namespace easel::test
