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
#include <string>
#include <vector>

#include "easel/asset_store.hpp"

namespace easel {

struct Collection {
  CollectionId id;
  std::string name;
  std::vector<std::string> tags;
  std::vector<AssetId> members;

  bool contains(const AssetId& a) const;
  friend bool operator==(const Collection&, const Collection&) = default;
};

struct ExhibitEntry {
  EntryId id;
  AssetId asset;
  std::string caption;
  friend bool operator==(const ExhibitEntry&, const ExhibitEntry&) = default;
};

void to_json(json& j, const Collection& c);
void from_json(const json& j, Collection& c);
void to_json(json& j, const ExhibitEntry& e);
void from_json(const json& j, ExhibitEntry& e);

// The exhibit is an ordered list; an entry's order index is its position, so
// indices are a permutation of 0..n-1 by construction.
class Exhibit {
 public:
  // index == size() appends. Throws BadIndex past the end.
  void insert(ExhibitEntry entry, std::size_t index);
  void add(ExhibitEntry entry) { insert(std::move(entry), entries_.size()); }
  // Moves the entry to `to`, shifting the others. Throws UnknownEntry, BadIndex.
  void reorder(const EntryId& id, std::size_t to);
  void caption(const EntryId& id, std::string text);
  void remove(const EntryId& id);

  std::size_t index_of(const EntryId& id) const;  // throws UnknownEntry
  const std::vector<ExhibitEntry>& entries() const { return entries_; }

  // Ordered manifest: [{"index","entry","asset","caption"}].
  json manifest() const;

 private:
  std::vector<ExhibitEntry> entries_;
};

struct PackInput {
  ItemId id;
  Vec2 position;
  Vec2 size;
};

// Row-major grid with ceil(sqrt(n)) columns. Items keep their (y, x) reading
// order; every cell is the size of the largest item and the grid starts at the
// group's current top-left corner, so a single item does not move.
std::map<ItemId, Vec2> pack_grid(const std::vector<PackInput>& items, double cell_gap);

}  // namespace easel
