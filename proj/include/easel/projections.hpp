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
#include <vector>

#include "easel/asset_store.hpp"
#include "easel/provenance.hpp"

namespace easel {

// One unit of engagement: a selection click or use as an easel input.
struct Interaction {
  enum class Kind { click, easel_input };
  Timestamp at = 0;
  ItemId item;
  Kind kind = Kind::click;
  friend bool operator==(const Interaction&, const Interaction&) = default;
};

void to_json(json& j, const Interaction& i);
void from_json(const json& j, Interaction& i);

inline constexpr std::size_t kHistoryWindow = 5;
inline constexpr Timestamp kDefaultTrailBucket = 60'000'000;  // 60 s in microseconds

struct HistoryEntry {
  std::size_t position = 0;
  ItemId item;
  AssetId asset;
  NodeId node;
  PageId page;
  Timestamp created_at = 0;
  Vec2 canvas_position;
};

struct TrailPoint {
  Timestamp at = 0;  // bucket start
  Vec2 centroid;
  std::size_t events = 0;
};

struct RelatedItem {
  NodeId node;
  ItemId item;  // empty when the related node has no canvas item
  EdgeRole role = EdgeRole::source;
};

struct TimelineEntry {
  ItemId item;
  NodeId node;
  Timestamp created_at = 0;
  double x = 0;
  std::vector<RelatedItem> parents;
  std::vector<RelatedItem> children;
};

// Items visible on the canvas (not soft-deleted), ordered by (created_at, id).
std::vector<const CanvasItem*> live_items(const AssetRegistry& reg);

// Throws CursorOutOfRange unless cursor is in [0, n).
std::vector<HistoryEntry> history_window(const AssetRegistry& reg, const ProvenanceGraph& graph,
                                         std::int64_t cursor);

// Throws OutOfRange for a non-positive bucket.
std::vector<TrailPoint> trail_path(const AssetRegistry& reg, const std::vector<Interaction>& log,
                                   Timestamp bucket = kDefaultTrailBucket);

std::map<ItemId, double> activity_heatmap(const AssetRegistry& reg);

// Throws EmptyCanvas when nothing is visible, OutOfRange for a negative width.
std::vector<TimelineEntry> timeline_layout(const AssetRegistry& reg, const ProvenanceGraph& graph,
                                           double axis_width);

json to_json(const std::vector<HistoryEntry>& v);
json to_json(const std::vector<TrailPoint>& v);
json to_json(const std::vector<TimelineEntry>& v);

}  // namespace easel
