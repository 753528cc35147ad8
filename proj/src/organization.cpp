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

#include "easel/organization.hpp"

#include <algorithm>
#include <cmath>

#include "easel/error.hpp"

namespace easel {

bool Collection::contains(const AssetId& a) const {
  return std::find(members.begin(), members.end(), a) != members.end();
}

void to_json(json& j, const Collection& c) {
  j = json{{"id", c.id}, {"name", c.name}, {"tags", c.tags}, {"members", c.members}};
}

void from_json(const json& j, Collection& c) {
  c.id = j.at("id").get<CollectionId>();
  c.name = j.at("name").get<std::string>();
  c.tags = j.value("tags", std::vector<std::string>{});
  c.members = j.value("members", std::vector<AssetId>{});
}

void to_json(json& j, const ExhibitEntry& e) {
  j = json{{"id", e.id}, {"asset", e.asset}, {"caption", e.caption}};
}

void from_json(const json& j, ExhibitEntry& e) {
  e.id = j.at("id").get<EntryId>();
  e.asset = j.at("asset").get<AssetId>();
  e.caption = j.value("caption", std::string{});
}

std::size_t Exhibit::index_of(const EntryId& id) const {
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].id == id) return i;
  }
  fail(ErrorCode::UnknownEntry, "unknown exhibit entry " + id.str());
}

void Exhibit::insert(ExhibitEntry entry, std::size_t index) {
  if (index > entries_.size()) {
    fail(ErrorCode::BadIndex, "index " + std::to_string(index) + " past end of exhibit (" +
                                  std::to_string(entries_.size()) + " entries)");
  }
  entries_.insert(entries_.begin() + static_cast<std::ptrdiff_t>(index), std::move(entry));
}

void Exhibit::reorder(const EntryId& id, std::size_t to) {
  const auto from = index_of(id);
  if (to >= entries_.size()) {
    fail(ErrorCode::BadIndex, "index " + std::to_string(to) + " outside [0, " +
                                  std::to_string(entries_.size()) + ")");
  }
  auto entry = std::move(entries_[from]);
  entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(from));
  entries_.insert(entries_.begin() + static_cast<std::ptrdiff_t>(to), std::move(entry));
}

void Exhibit::caption(const EntryId& id, std::string text) { entries_[index_of(id)].caption = std::move(text); }

void Exhibit::remove(const EntryId& id) {
  entries_.erase(entries_.begin() + static_cast<std::ptrdiff_t>(index_of(id)));
}

json Exhibit::manifest() const {
  json out = json::array();
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    out.push_back({{"index", i}, {"entry", entries_[i].id}, {"asset", entries_[i].asset},
                   {"caption", entries_[i].caption}});
  }
  return out;
}

std::map<ItemId, Vec2> pack_grid(const std::vector<PackInput>& items, double cell_gap) {
  if (cell_gap < 0) fail(ErrorCode::OutOfRange, "cell gap must be non-negative");
  std::map<ItemId, Vec2> out;
  if (items.empty()) return out;

  std::vector<const PackInput*> order;
  double x0 = items.front().position.x, y0 = items.front().position.y;
  double cw = 0, ch = 0;
  for (const auto& it : items) {
    order.push_back(&it);
    x0 = std::min(x0, it.position.x);
    y0 = std::min(y0, it.position.y);
    cw = std::max(cw, it.size.x);
    ch = std::max(ch, it.size.y);
  }
  std::sort(order.begin(), order.end(), [](const PackInput* a, const PackInput* b) {
    if (a->position.y != b->position.y) return a->position.y < b->position.y;
    if (a->position.x != b->position.x) return a->position.x < b->position.x;
    return a->id < b->id;
  });

  const auto n = order.size();
  const auto cols = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  for (std::size_t i = 0; i < n; ++i) {
    const double col = static_cast<double>(i % cols);
    const double row = static_cast<double>(i / cols);
    out[order[i]->id] = {x0 + col * (cw + cell_gap), y0 + row * (ch + cell_gap)};
  }
  return out;
}

}  // namespace easel
