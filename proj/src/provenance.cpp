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

#include "easel/provenance.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "easel/error.hpp"

namespace easel {

namespace {

constexpr std::pair<NodeKind, std::string_view> kNodeKinds[] = {
    {NodeKind::original, "original"},
    {NodeKind::copy, "copy"},
    {NodeKind::generated, "generated"},
    {NodeKind::quick_op, "quick_op"},
};

constexpr std::pair<EdgeRole, std::string_view> kRoles[] = {
    {EdgeRole::reference_1, "reference_1"}, {EdgeRole::reference_2, "reference_2"},
    {EdgeRole::reference_3, "reference_3"}, {EdgeRole::style, "style"},
    {EdgeRole::structure, "structure"},     {EdgeRole::start_image, "start_image"},
    {EdgeRole::input_image, "input_image"}, {EdgeRole::first_frame, "first_frame"},
    {EdgeRole::last_frame, "last_frame"},   {EdgeRole::collage_layer, "collage_layer"},
    {EdgeRole::mask, "mask"},               {EdgeRole::source, "source"},
};

}  // namespace

std::string_view to_string(NodeKind k) {
  for (const auto& [v, s] : kNodeKinds) {
    if (v == k) return s;
  }
  return "original";
}

NodeKind node_kind_from_string(std::string_view s) {
  for (const auto& [v, name] : kNodeKinds) {
    if (name == s) return v;
  }
  fail(ErrorCode::MalformedPayload, "unknown node kind '" + std::string(s) + "'");
}

std::string_view to_string(EdgeRole r) {
  for (const auto& [v, s] : kRoles) {
    if (v == r) return s;
  }
  return "source";
}

EdgeRole edge_role_from_string(std::string_view s) {
  for (const auto& [v, name] : kRoles) {
    if (name == s) return v;
  }
  fail(ErrorCode::MalformedPayload, "unknown edge role '" + std::string(s) + "'");
}

void to_json(json& j, const ProvenanceNode& n) {
  json parents = json::array();
  for (const auto& p : n.parents) parents.push_back({{"node", p.parent}, {"role", to_string(p.role)}});
  j = json{{"id", n.id},
           {"item", n.item},
           {"asset", n.asset},
           {"kind", to_string(n.kind)},
           {"copy_of", n.copy_of},
           {"run_id", n.run_id},
           {"parents", parents},
           {"params", n.params ? run_spec_to_json(*n.params) : json(nullptr)},
           {"deleted", n.deleted},
           {"created_at", n.created_at},
           {"seq", n.seq}};
}

void from_json(const json& j, ProvenanceNode& n) {
  n.id = j.at("id").get<NodeId>();
  n.item = j.value("item", json(nullptr)).get<ItemId>();
  n.asset = j.at("asset").get<AssetId>();
  n.kind = node_kind_from_string(j.at("kind").get<std::string>());
  n.copy_of = j.value("copy_of", json(nullptr)).get<NodeId>();
  n.run_id = j.value("run_id", json(nullptr)).get<RunId>();
  n.parents.clear();
  for (const auto& p : j.at("parents")) {
    n.parents.push_back({p.at("node").get<NodeId>(), edge_role_from_string(p.at("role").get<std::string>())});
  }
  n.params.reset();
  if (j.contains("params") && !j.at("params").is_null()) n.params = run_spec_from_json(j.at("params"));
  n.deleted = j.value("deleted", false);
  n.created_at = j.at("created_at").get<Timestamp>();
  n.seq = j.value("seq", std::uint64_t{0});
}

json to_json(const Lineage& l) {
  auto edges = [](const std::vector<TypedEdge>& v) {
    json out = json::array();
    for (const auto& e : v) out.push_back({{"child", e.child}, {"parent", e.parent}, {"role", to_string(e.role)}});
    return out;
  };
  return json{{"ancestors", l.ancestors},
              {"descendants", l.descendants},
              {"ancestor_edges", edges(l.ancestor_edges)},
              {"descendant_edges", edges(l.descendant_edges)}};
}

void ProvenanceGraph::add_node(ProvenanceNode node) {
  if (node.id.empty()) fail(ErrorCode::UnknownNode, "node id required");
  if (nodes_.count(node.id)) fail(ErrorCode::ValidationError, "duplicate node " + node.id.str());
  for (const auto& p : node.parents) {
    const auto* parent = find(p.parent);
    if (!parent) fail(ErrorCode::UnknownNode, "parent " + p.parent.str() + " does not exist");
  }
  node.seq = nodes_.size() + 1;
  for (const auto& p : node.parents) children_[p.parent].push_back(node.id);
  if (!node.item.empty()) by_item_[node.item] = node.id;
  original_.emplace(node.asset, node.id);  // keeps the first
  const auto id = node.id;
  nodes_.emplace(id, std::move(node));
}

void ProvenanceGraph::set_deleted(const NodeId& id, bool deleted) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) fail(ErrorCode::UnknownNode, "unknown node " + id.str());
  it->second.deleted = deleted;
}

void ProvenanceGraph::attach_item(const NodeId& id, const ItemId& item) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) fail(ErrorCode::UnknownNode, "unknown node " + id.str());
  if (!it->second.item.empty()) fail(ErrorCode::ValidationError, "node " + id.str() + " already has an item");
  it->second.item = item;
  by_item_[item] = id;
}

const ProvenanceNode* ProvenanceGraph::find(const NodeId& id) const {
  auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const ProvenanceNode& ProvenanceGraph::node(const NodeId& id) const {
  const auto* n = find(id);
  if (!n) fail(ErrorCode::UnknownNode, "unknown node " + id.str());
  return *n;
}

const ProvenanceNode* ProvenanceGraph::node_for_item(const ItemId& item) const {
  auto it = by_item_.find(item);
  return it == by_item_.end() ? nullptr : find(it->second);
}

const ProvenanceNode* ProvenanceGraph::original_of(const AssetId& asset) const {
  auto it = original_.find(asset);
  return it == original_.end() ? nullptr : find(it->second);
}

std::vector<NodeId> ProvenanceGraph::children_of(const NodeId& id) const {
  auto it = children_.find(id);
  if (it == children_.end()) return {};
  return it->second;
}

Lineage ProvenanceGraph::lineage_of(const NodeId& id) const {
  node(id);
  auto order = [this](const NodeId& a, const NodeId& b) {
    const auto& na = nodes_.at(a);
    const auto& nb = nodes_.at(b);
    return na.created_at != nb.created_at ? na.created_at < nb.created_at : a < b;
  };
  auto edge_order = [&](const TypedEdge& a, const TypedEdge& b) {
    if (a.child != b.child) return order(a.child, b.child);
    if (a.parent != b.parent) return order(a.parent, b.parent);
    return a.role < b.role;
  };

  Lineage out;
  std::set<NodeId> seen{id};
  std::deque<NodeId> queue{id};
  while (!queue.empty()) {
    const NodeId cur = queue.front();
    queue.pop_front();
    for (const auto& p : nodes_.at(cur).parents) {
      out.ancestor_edges.push_back({cur, p.parent, p.role});
      if (seen.insert(p.parent).second) {
        out.ancestors.push_back(p.parent);
        queue.push_back(p.parent);
      }
    }
  }
  seen = {id};
  queue = {id};
  while (!queue.empty()) {
    const NodeId cur = queue.front();
    queue.pop_front();
    for (const auto& child : children_of(cur)) {
      for (const auto& p : nodes_.at(child).parents) {
        if (p.parent == cur) out.descendant_edges.push_back({child, cur, p.role});
      }
      if (seen.insert(child).second) {
        out.descendants.push_back(child);
        queue.push_back(child);
      }
    }
  }
  std::sort(out.ancestors.begin(), out.ancestors.end(), order);
  std::sort(out.descendants.begin(), out.descendants.end(), order);
  std::sort(out.ancestor_edges.begin(), out.ancestor_edges.end(), edge_order);
  std::sort(out.descendant_edges.begin(), out.descendant_edges.end(), edge_order);
  // A child that uses the same parent in two roles contributes two edges;
  // the same (child, parent, role) triple is never repeated.
  out.descendant_edges.erase(std::unique(out.descendant_edges.begin(), out.descendant_edges.end()),
                             out.descendant_edges.end());
  return out;
}

RunSpec ProvenanceGraph::recreate(const NodeId& id) const {
  const auto& n = node(id);
  if (!n.params) {
    fail(ErrorCode::NotAGeneratedNode, "node " + id.str() + " (" + std::string(to_string(n.kind)) +
                                           ") was not produced by a generation run");
  }
  return *n.params;
}

bool ProvenanceGraph::is_acyclic() const {
  enum class Mark { none, active, done };
  std::map<NodeId, Mark> mark;
  for (const auto& [start, _] : nodes_) {
    if (mark[start] != Mark::none) continue;
    std::vector<std::pair<NodeId, std::size_t>> stack{{start, 0}};
    mark[start] = Mark::active;
    while (!stack.empty()) {
      auto& [cur, next] = stack.back();
      const auto& parents = nodes_.at(cur).parents;
      if (next < parents.size()) {
        const NodeId p = parents[next++].parent;
        if (mark[p] == Mark::active) return false;
        if (mark[p] == Mark::none) {
          mark[p] = Mark::active;
          stack.emplace_back(p, 0);
        }
      } else {
        mark[cur] = Mark::done;
        stack.pop_back();
      }
    }
  }
  return true;
}

std::size_t ProvenanceGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& [_, node] : nodes_) n += node.parents.size();
  return n;
}

json ProvenanceGraph::export_json() const {
  std::vector<const ProvenanceNode*> ordered;
  for (const auto& [_, n] : nodes_) ordered.push_back(&n);
  std::sort(ordered.begin(), ordered.end(), [](auto* a, auto* b) { return a->seq < b->seq; });
  json nodes = json::array(), edges = json::array();
  for (const auto* n : ordered) {
    nodes.push_back(*n);
    for (const auto& p : n->parents) {
      edges.push_back({{"child", n->id}, {"parent", p.parent}, {"role", to_string(p.role)}});
    }
  }
  return json{{"nodes", nodes}, {"edges", edges}};
}

}  // namespace easel
