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

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "easel/workflow_graph.hpp"

namespace easel {

// A placeholder is a string input whose whole value is "{{name}}"; it is
// replaced by a typed literal at instantiation time.
std::optional<std::string> placeholder_name(const Literal& value);

// Versioned set of workflow templates loaded from a directory containing
// manifest.json ({"version": "...", "templates": {"name": "file.json"}}).
class TemplateSet {
 public:
  static TemplateSet load(const std::filesystem::path& dir);
  // EASEL_TEMPLATE_DIR from the environment, else the build-time directory.
  static TemplateSet load_default();

  const std::string& version() const { return version_; }
  std::vector<std::string> names() const;
  bool contains(const std::string& name) const { return graphs_.count(name) != 0; }
  const WorkflowGraph& raw(const std::string& name) const;  // throws UnknownTemplate
  const std::set<std::string>& placeholders(const std::string& name) const;

  // Every placeholder must be bound and every binding must be used; either
  // mismatch throws InvalidTemplate.
  WorkflowGraph instantiate(const std::string& name, const std::map<std::string, Literal>& params) const;

 private:
  std::string version_;
  std::map<std::string, WorkflowGraph> graphs_;
  std::map<std::string, std::set<std::string>> placeholders_;
};

}  // namespace easel
