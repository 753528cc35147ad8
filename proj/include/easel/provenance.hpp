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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "easel/asset_store.hpp"
#include "easel/easel_spec.hpp"

namespace easel {

enum class NodeKind { original, copy, generated, quick_op };

enum class EdgeRole {
  reference_1,
  reference_2,
  reference_3,
  style,
  structure,
  start_image,
  input_image,
  first_frame,
  last_frame,
  collage_layer,
  mask,
  source,
};

std::string_view to_string(NodeKind k);
NodeKind node_kind_from_string(std::string_view s);
std::string_view to_string(EdgeRole r);
EdgeRole edge_role_from_string(std::string_view s);

struct ParentEdge {
  NodeId parent;
  EdgeRole role = EdgeRole::source;
  friend bool operator==(const ParentEdge&, const ParentEdge&) = default;
};

struct ProvenanceNode {
  NodeId id;
  ItemId item;  // empty for detached nodes recorded for inputs that were never placed
  AssetId asset;
  NodeKind kind = NodeKind::original;
  NodeId copy_of;
  RunId run_id;
  std::vector<ParentEdge> parents;
  std::optional<RunSpec> params;
  bool deleted = false;
  Timestamp created_at = 0;
  std::uint64_t seq = 0;  // insertion order; parents always have a smaller seq
  friend bool operator==(const ProvenanceNode&, const ProvenanceNode&) = default;
};

void to_json(json& j, const ProvenanceNode& n);
void from_json(const json& j, ProvenanceNode& n);

struct TypedEdge {
  NodeId child;
  NodeId parent;
  EdgeRole role = EdgeRole::source;
  friend bool operator==(const TypedEdge&, const TypedEdge&) = default;
};

struct Lineage {
  std::vector<NodeId> ancestors;    // ordered by (created_at, node_id)
  std::vector<NodeId> descendants;  // same order
  std::vector<TypedEdge> ancestor_edges;
  std::vector<TypedEdge> descendant_edges;
};

json to_json(const Lineage& l);

// Append-only DAG. Nodes can only reference already-present parents, which
// makes cycles impossible by construction; add_node still checks.
class ProvenanceGraph {
 public:
  // Throws UnknownNode for a missing parent.
  void add_node(ProvenanceNode node);
  void set_deleted(const NodeId& id, bool deleted);
  // Gives a detached node its first canvas item.
  void attach_item(const NodeId& id, const ItemId& item);

  const ProvenanceNode& node(const NodeId& id) const;  // throws UnknownNode
  const ProvenanceNode* find(const NodeId& id) const;
  const ProvenanceNode* node_for_item(const ItemId& item) const;
  // First node ever recorded for the asset; copies point here.
  const ProvenanceNode* original_of(const AssetId& asset) const;
  std::vector<NodeId> children_of(const NodeId& id) const;

  Lineage lineage_of(const NodeId& id) const;

  // Throws NotAGeneratedNode for imports and copies of imports.
  RunSpec recreate(const NodeId& id) const;

  bool is_acyclic() const;
  std::size_t edge_count() const;
  const std::map<NodeId, ProvenanceNode>& nodes() const { return nodes_; }

  // Adjacency export: {"nodes": [...], "edges": [{"child","parent","role"}]}.
  json export_json() const;

 private:
  std::map<NodeId, ProvenanceNode> nodes_;
  std::map<NodeId, std::vector<NodeId>> children_;
  std::map<ItemId, NodeId> by_item_;
  std::map<AssetId, NodeId> original_;
};

}  // namespace easel
