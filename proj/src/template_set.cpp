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

#include "easel/template_set.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "easel/error.hpp"

namespace easel {

namespace fs = std::filesystem;

std::optional<std::string> placeholder_name(const Literal& value) {
  const auto* s = std::get_if<std::string>(&value);
  if (!s || s->size() < 5 || s->compare(0, 2, "{{") != 0 || s->compare(s->size() - 2, 2, "}}") != 0) {
    return std::nullopt;
  }
  return s->substr(2, s->size() - 4);
}

namespace {

json read_json(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) fail(ErrorCode::InvalidTemplate, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidTemplate, p.filename().string() + ": " + e.what());
  }
}

}  // namespace

TemplateSet TemplateSet::load(const fs::path& dir) {
  const json manifest = read_json(dir / "manifest.json");
  TemplateSet set;
  if (!manifest.contains("version") || !manifest.at("version").is_string() || !manifest.contains("templates") ||
      !manifest.at("templates").is_object()) {
    fail(ErrorCode::InvalidTemplate, "manifest.json needs a version string and a templates object");
  }
  set.version_ = manifest.at("version").get<std::string>();
  for (const auto& [name, file] : manifest.at("templates").items()) {
    const json doc = read_json(dir / file.get<std::string>());
    if (!doc.contains("nodes")) fail(ErrorCode::InvalidTemplate, name + ": missing nodes");
    if (doc.value("version", std::string{}) != set.version_) {
      fail(ErrorCode::InvalidTemplate, name + ": version does not match the manifest");
    }
    WorkflowGraph g;
    try {
      g = WorkflowGraph::from_json(doc.at("nodes"));
    } catch (const Error& e) {
      fail(ErrorCode::InvalidTemplate, name + ": " + e.what());
    }
    if (auto v = g.schema_violations(); !v.empty()) {
      throw Error(ErrorCode::InvalidTemplate, name + ": " + v.front(), v);
    }
    std::set<std::string> holes;
    for (const auto& [id, node] : g.nodes) {
      for (const auto& [input, value] : node.inputs) {
        if (const auto* lit = std::get_if<Literal>(&value)) {
          if (auto p = placeholder_name(*lit)) holes.insert(*p);
        }
      }
    }
    set.placeholders_.emplace(name, std::move(holes));
    set.graphs_.emplace(name, std::move(g));
  }
  return set;
}

TemplateSet TemplateSet::load_default() {
  if (const char* env = std::getenv("EASEL_TEMPLATE_DIR"); env && *env) return load(env);
  return load(EASEL_TEMPLATE_DIR);
}

std::vector<std::string> TemplateSet::names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : graphs_) out.push_back(name);
  return out;
}

const WorkflowGraph& TemplateSet::raw(const std::string& name) const {
  auto it = graphs_.find(name);
  if (it == graphs_.end()) fail(ErrorCode::UnknownTemplate, "no template named '" + name + "'");
  return it->second;
}

const std::set<std::string>& TemplateSet::placeholders(const std::string& name) const {
  raw(name);
  return placeholders_.at(name);
}

WorkflowGraph TemplateSet::instantiate(const std::string& name, const std::map<std::string, Literal>& params) const {
  WorkflowGraph g = raw(name);
  const auto& holes = placeholders_.at(name);
  std::vector<std::string> problems;
  for (const auto& h : holes) {
    if (!params.count(h)) problems.push_back(name + ": missing parameter '" + h + "'");
  }
  for (const auto& [p, _] : params) {
    if (!holes.count(p)) problems.push_back(name + ": unused parameter '" + p + "'");
  }
  if (!problems.empty()) throw Error(ErrorCode::InvalidTemplate, problems.front(), problems);
  for (auto& [id, node] : g.nodes) {
    for (auto& [input, value] : node.inputs) {
      if (auto* lit = std::get_if<Literal>(&value)) {
        if (auto p = placeholder_name(*lit)) value = params.at(*p);
      }
    }
  }
  g.require_valid();
  return g;
}

}  // namespace easel
