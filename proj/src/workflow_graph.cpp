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

#include "easel/workflow_graph.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "easel/error.hpp"
#include "easel/hash.hpp"

namespace easel {

namespace {

struct OutputClass {
  std::string_view name;
  OutputMedia media;
};

constexpr OutputClass kOutputClasses[] = {
    {"SaveImage", OutputMedia::image},        {"PreviewImage", OutputMedia::image},
    {"SaveAnimatedWEBP", OutputMedia::video}, {"SaveWEBM", OutputMedia::video},
    {"SaveVideo", OutputMedia::video},        {"VHS_VideoCombine", OutputMedia::video},
    {"Hy3DExportMesh", OutputMedia::model3d}, {"ShowText|pysssss", OutputMedia::text},
};

}  // namespace

bool is_output_class(std::string_view class_type) { return output_media(class_type).has_value(); }

std::optional<OutputMedia> output_media(std::string_view class_type) {
  for (const auto& c : kOutputClasses) {
    if (c.name == class_type) return c.media;
  }
  return std::nullopt;
}

Literal make_int(std::uint64_t v) {
  if (v <= static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    return static_cast<std::int64_t>(v);
  }
  return v;
}

Literal make_int(std::int64_t v) { return v; }

json literal_to_json(const Literal& l) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::nullptr_t>) {
          return nullptr;
        } else {
          return json(v);
        }
      },
      l);
}

namespace {

InputValue input_from_json(const json& v) {
  if (v.is_array() && v.size() == 2 && v[0].is_string() && v[1].is_number_integer()) {
    return Edge{v[0].get<std::string>(), v[1].get<int>()};
  }
  switch (v.type()) {
    case json::value_t::null: return Literal{nullptr};
    case json::value_t::boolean: return Literal{v.get<bool>()};
    case json::value_t::number_integer: return Literal{v.get<std::int64_t>()};
    case json::value_t::number_unsigned: return make_int(v.get<std::uint64_t>());
    case json::value_t::number_float: return Literal{v.get<double>()};
    case json::value_t::string: return Literal{v.get<std::string>()};
    default: fail(ErrorCode::InvalidGraph, "unsupported input value " + v.dump());
  }
}

}  // namespace

json WorkflowGraph::to_json() const {
  json out = json::object();
  for (const auto& [id, node] : nodes) {
    json inputs = json::object();
    for (const auto& [name, value] : node.inputs) {
      if (const auto* e = std::get_if<Edge>(&value)) {
        inputs[name] = json::array({e->node, e->output});
      } else {
        inputs[name] = literal_to_json(std::get<Literal>(value));
      }
    }
    out[id] = json{{"class_type", node.class_type}, {"inputs", inputs}};
  }
  return out;
}

std::string WorkflowGraph::serialize() const { return canonical_dump(to_json()); }

std::string WorkflowGraph::hash() const { return sha256_hex(serialize()); }

WorkflowGraph WorkflowGraph::from_json(const json& j) {
  if (!j.is_object()) fail(ErrorCode::InvalidGraph, "workflow must be a JSON object");
  WorkflowGraph g;
  for (const auto& [id, body] : j.items()) {
    if (!body.is_object() || !body.contains("class_type") || !body.at("class_type").is_string()) {
      fail(ErrorCode::InvalidGraph, "node " + id + " lacks a class_type");
    }
    WorkflowNode node;
    node.class_type = body.at("class_type").get<std::string>();
    if (body.contains("inputs")) {
      if (!body.at("inputs").is_object()) fail(ErrorCode::InvalidGraph, "node " + id + " inputs must be an object");
      for (const auto& [name, value] : body.at("inputs").items()) node.inputs.emplace(name, input_from_json(value));
    }
    g.nodes.emplace(id, std::move(node));
  }
  return g;
}

WorkflowGraph WorkflowGraph::parse(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidGraph, e.what());
  }
  return from_json(j);
}

std::vector<std::string> WorkflowGraph::output_node_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, node] : nodes) {
    if (is_output_class(node.class_type)) out.push_back(id);
  }
  return out;
}

std::vector<std::string> WorkflowGraph::schema_violations() const {
  std::vector<std::string> v;
  if (nodes.empty()) v.push_back("graph has no nodes");
  for (const auto& [id, node] : nodes) {
    if (id.empty()) v.push_back("empty node id");
    if (node.class_type.empty()) v.push_back("node " + id + ": empty class_type");
    for (const auto& [name, value] : node.inputs) {
      if (const auto* e = std::get_if<Edge>(&value)) {
        if (!nodes.count(e->node)) v.push_back("node " + id + "." + name + ": edge to missing node " + e->node);
        if (e->output < 0) v.push_back("node " + id + "." + name + ": negative output index");
      } else if (const auto* d = std::get_if<double>(&std::get<Literal>(value)); d && !std::isfinite(*d)) {
        v.push_back("node " + id + "." + name + ": non-finite number");
      }
    }
  }
  if (output_node_ids().empty()) v.push_back("graph has no output node");

  // Iterative DFS cycle check.
  enum class Mark { none, active, done };
  std::map<std::string, Mark> mark;
  for (const auto& [start, _] : nodes) {
    if (mark[start] != Mark::none) continue;
    std::vector<std::pair<std::string, bool>> stack{{start, false}};
    while (!stack.empty()) {
      auto [id, leaving] = stack.back();
      stack.pop_back();
      if (leaving) {
        mark[id] = Mark::done;
        continue;
      }
      if (mark[id] == Mark::done) continue;
      if (mark[id] == Mark::active) continue;
      mark[id] = Mark::active;
      stack.emplace_back(id, true);
      for (const auto& [name, value] : nodes.at(id).inputs) {
        const auto* e = std::get_if<Edge>(&value);
        if (!e || !nodes.count(e->node)) continue;
        if (mark[e->node] == Mark::active) {
          v.push_back("cycle through node " + e->node);
        } else if (mark[e->node] == Mark::none) {
          stack.emplace_back(e->node, false);
        }
      }
    }
  }
  return v;
}

void WorkflowGraph::require_valid() const {
  auto v = schema_violations();
  if (!v.empty()) throw Error(ErrorCode::InvalidGraph, v.front(), v);
}

const WorkflowNode& WorkflowGraph::node(const std::string& id) const {
  auto it = nodes.find(id);
  if (it == nodes.end()) fail(ErrorCode::InvalidGraph, "no node " + id);
  return it->second;
}

const Literal* WorkflowGraph::literal(const std::string& node_id, const std::string& input) const {
  auto it = nodes.find(node_id);
  if (it == nodes.end()) return nullptr;
  auto in = it->second.inputs.find(input);
  if (in == it->second.inputs.end()) return nullptr;
  return std::get_if<Literal>(&in->second);
}

}  // namespace easel
