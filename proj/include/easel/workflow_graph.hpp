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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "easel/asset_store.hpp"
#include "easel/canonical_json.hpp"

namespace easel {

// Reference to output `output` of node `node`; serialized as ["node", output].
struct Edge {
  std::string node;
  int output = 0;
  friend bool operator==(const Edge&, const Edge&) = default;
};

using Literal = std::variant<std::nullptr_t, bool, std::int64_t, std::uint64_t, double, std::string>;
using InputValue = std::variant<Literal, Edge>;

// Integers that fit in int64 are always stored as int64 so equality does not
// depend on how a value was produced.
Literal make_int(std::uint64_t v);
Literal make_int(std::int64_t v);
inline Literal make_int(int v) { return make_int(static_cast<std::int64_t>(v)); }

struct WorkflowNode {
  std::string class_type;
  std::map<std::string, InputValue> inputs;
  friend bool operator==(const WorkflowNode&, const WorkflowNode&) = default;
};

// Node graph in the backend's prompt-submission shape:
//   {"<id>": {"class_type": "...", "inputs": {"name": literal | ["id", n]}}}
class WorkflowGraph {
 public:
  std::map<std::string, WorkflowNode> nodes;

  // Nodes whose class is a known output (save/preview) class, in id order.
  std::vector<std::string> output_node_ids() const;

  json to_json() const;
  // Canonical bytes; byte equality of two serializations means the graphs
  // are identical.
  std::string serialize() const;
  std::string hash() const;

  static WorkflowGraph from_json(const json& j);
  static WorkflowGraph parse(std::string_view text);

  // Dangling edges, empty class types, cycles, missing output node.
  std::vector<std::string> schema_violations() const;
  // Throws InvalidGraph listing schema_violations().
  void require_valid() const;

  const WorkflowNode& node(const std::string& id) const;
  const Literal* literal(const std::string& node_id, const std::string& input) const;

  friend bool operator==(const WorkflowGraph&, const WorkflowGraph&) = default;
};

enum class OutputMedia { image, video, model3d, text };

bool is_output_class(std::string_view class_type);
std::optional<OutputMedia> output_media(std::string_view class_type);

json literal_to_json(const Literal& l);

}  // namespace easel
