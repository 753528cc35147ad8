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

#include "easel/projections.hpp"

#include <algorithm>

#include "easel/error.hpp"

namespace easel {

void to_json(json& j, const Interaction& i) {
  j = json{{"at", i.at}, {"item", i.item}, {"kind", i.kind == Interaction::Kind::click ? "click" : "easel_input"}};
}

void from_json(const json& j, Interaction& i) {
  i.at = j.at("at").get<Timestamp>();
  i.item = j.at("item").get<ItemId>();
  i.kind = j.value("kind", std::string("click")) == "click" ? Interaction::Kind::click : Interaction::Kind::easel_input;
}

std::vector<const CanvasItem*> live_items(const AssetRegistry& reg) {
  std::vector<const CanvasItem*> out;
  for (const auto& [_, item] : reg.items()) {
    if (!item.hidden) out.push_back(&item);
  }
  std::sort(out.begin(), out.end(), [](const CanvasItem* a, const CanvasItem* b) {
    return a->created_at != b->created_at ? a->created_at < b->created_at : a->id < b->id;
  });
  return out;
}

std::vector<HistoryEntry> history_window(const AssetRegistry& reg, const ProvenanceGraph& graph,
                                         std::int64_t cursor) {
  const auto items = live_items(reg);
  const auto n = static_cast<std::int64_t>(items.size());
  if (cursor < 0 || cursor >= n) {
    fail(ErrorCode::CursorOutOfRange,
         "cursor " + std::to_string(cursor) + " outside [0, " + std::to_string(n) + ")");
  }
  std::vector<HistoryEntry> out;
  const auto end = std::min<std::int64_t>(n, cursor + static_cast<std::int64_t>(kHistoryWindow));
  for (auto i = cursor; i < end; ++i) {
    const auto* item = items[static_cast<std::size_t>(i)];
    const auto* node = graph.node_for_item(item->id);
    out.push_back({static_cast<std::size_t>(i), item->id, item->asset, node ? node->id : NodeId{}, item->page,
                   item->created_at, item->position});
  }
  return out;
}

std::vector<TrailPoint> trail_path(const AssetRegistry& reg, const std::vector<Interaction>& log,
                                   Timestamp bucket) {
  if (bucket <= 0) fail(ErrorCode::OutOfRange, "trail bucket must be positive");
  std::vector<std::pair<Timestamp, Vec2>> events;
  for (const auto& e : log) {
    const auto* item = reg.find_item(e.item);
    if (!item || item->hidden) continue;
    events.emplace_back(e.at, item->center());
  }
  std::stable_sort(events.begin(), events.end(), [](auto& a, auto& b) { return a.first < b.first; });

  std::vector<TrailPoint> out;
  if (events.empty()) return out;
  const Timestamp t0 = events.front().first;
  Vec2 sum;
  for (const auto& [at, center] : events) {
    const Timestamp start = t0 + (at - t0) / bucket * bucket;
    if (out.empty() || out.back().at != start) {
      if (!out.empty()) {
        out.back().centroid = {sum.x / out.back().events, sum.y / out.back().events};
      }
      out.push_back({start, {}, 0});
      sum = {};
    }
    sum.x += center.x;
    sum.y += center.y;
    ++out.back().events;
  }
  out.back().centroid = {sum.x / out.back().events, sum.y / out.back().events};
  return out;
}

std::map<ItemId, double> activity_heatmap(const AssetRegistry& reg) {
  std::uint64_t max_clicks = 0;
  for (const auto& [_, item] : reg.items()) {
    if (!item.hidden) max_clicks = std::max(max_clicks, item.click_count);
  }
  std::map<ItemId, double> out;
  for (const auto& [id, item] : reg.items()) {
    if (item.hidden) continue;
    out[id] = max_clicks == 0 ? 0.0 : static_cast<double>(item.click_count) / static_cast<double>(max_clicks);
  }
  return out;
}

std::vector<TimelineEntry> timeline_layout(const AssetRegistry& reg, const ProvenanceGraph& graph,
                                           double axis_width) {
  if (axis_width < 0) fail(ErrorCode::OutOfRange, "axis width must be non-negative");
  const auto items = live_items(reg);
  if (items.empty()) fail(ErrorCode::EmptyCanvas, "timeline needs at least one item");
  const Timestamp lo = items.front()->created_at;
  const Timestamp hi = items.back()->created_at;

  auto related = [&](const NodeId& id, EdgeRole role) {
    const auto& n = graph.node(id);
    return RelatedItem{id, n.item, role};
  };

  std::vector<TimelineEntry> out;
  for (const auto* item : items) {
    TimelineEntry e;
    e.item = item->id;
    e.created_at = item->created_at;
    e.x = hi == lo ? axis_width / 2
                   : axis_width * static_cast<double>(item->created_at - lo) / static_cast<double>(hi - lo);
    if (const auto* node = graph.node_for_item(item->id)) {
      e.node = node->id;
      for (const auto& p : node->parents) e.parents.push_back(related(p.parent, p.role));
      for (const auto& c : graph.children_of(node->id)) {
        for (const auto& p : graph.node(c).parents) {
          if (p.parent == node->id) e.children.push_back(related(c, p.role));
        }
      }
    }
    out.push_back(std::move(e));
  }
  return out;
}

namespace {

json related_json(const std::vector<RelatedItem>& v) {
  json out = json::array();
  for (const auto& r : v) out.push_back({{"node", r.node}, {"item", r.item}, {"role", to_string(r.role)}});
  return out;
}

}  // namespace

json to_json(const std::vector<HistoryEntry>& v) {
  json out = json::array();
  for (const auto& e : v) {
    out.push_back({{"position", e.position},
                   {"item", e.item},
                   {"asset", e.asset},
                   {"node", e.node},
                   {"page", e.page},
                   {"created_at", e.created_at},
                   {"canvas_position", e.canvas_position}});
  }
  return out;
}

json to_json(const std::vector<TrailPoint>& v) {
  json out = json::array();
  for (const auto& p : v) out.push_back({{"at", p.at}, {"centroid", p.centroid}, {"events", p.events}});
  return out;
}

json to_json(const std::vector<TimelineEntry>& v) {
  json out = json::array();
  for (const auto& e : v) {
    out.push_back({{"item", e.item},
                   {"node", e.node},
                   {"created_at", e.created_at},
                   {"x", e.x},
                   {"parents", related_json(e.parents)},
                   {"children", related_json(e.children)}});
  }
  return out;
}

}  // namespace easel
