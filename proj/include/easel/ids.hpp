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

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace easel {

// Opaque string identifier tagged by the entity it names, so an AssetId can
// never be passed where a NodeId is expected.
template <class Tag>
struct Id {
  std::string value;

  Id() = default;
  explicit Id(std::string v) : value(std::move(v)) {}

  bool empty() const noexcept { return value.empty(); }
  const std::string& str() const noexcept { return value; }

  friend auto operator<=>(const Id&, const Id&) = default;
  friend bool operator==(const Id&, const Id&) = default;
};

template <class Tag>
void to_json(nlohmann::json& j, const Id<Tag>& id) {
  if (id.empty()) {
    j = nullptr;
  } else {
    j = id.value;
  }
}

template <class Tag>
void from_json(const nlohmann::json& j, Id<Tag>& id) {
  id.value = j.is_null() ? std::string{} : j.get<std::string>();
}

using AssetId = Id<struct AssetTag>;
using ItemId = Id<struct ItemTag>;
using NodeId = Id<struct NodeTag>;
using RunId = Id<struct RunTag>;
using JobId = Id<struct JobTag>;
using PageId = Id<struct PageTag>;
using CollectionId = Id<struct CollectionTag>;
using EntryId = Id<struct EntryTag>;
using EaselId = Id<struct EaselTag>;

// Hex SHA-256 of a payload.
using BlobHash = std::string;

using Bytes = std::vector<std::uint8_t>;

// Microseconds since the Unix epoch.
using Timestamp = std::int64_t;

// Allocates "<prefix>-<zero padded counter>" ids. Counters are part of the
// persisted document state so ids stay unique across reloads.
std::string make_id(std::string_view prefix, std::uint64_t counter);

}  // namespace easel

template <class Tag>
struct std::hash<easel::Id<Tag>> {
  std::size_t operator()(const easel::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.value);
  }
};
