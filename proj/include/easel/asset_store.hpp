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
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "easel/canonical_json.hpp"
#include "easel/ids.hpp"
#include "easel/media.hpp"

namespace easel {

enum class AssetKind { image, video, text, audio, model3d, sketch };
enum class ControlKind { pose, depth, scribble, lineart };

inline constexpr ControlKind kAllControlKinds[] = {ControlKind::pose, ControlKind::depth, ControlKind::scribble,
                                                    ControlKind::lineart};

std::string_view to_string(AssetKind k);
AssetKind asset_kind_from_string(std::string_view s);
std::string_view to_string(ControlKind k);
ControlKind control_kind_from_string(std::string_view s);

// Image-like assets carry decodable pixels (sketches are rasterized PNGs).
inline bool is_raster_kind(AssetKind k) { return k == AssetKind::image || k == AssetKind::sketch; }

struct Origin {
  enum class Type { imported, generated, quick_op };
  Type type = Type::imported;
  RunId run_id;           // generated and quick_op
  std::string quick_op;   // quick_op only
  AssetId parent;         // quick_op only

  static Origin imported() { return {}; }
  static Origin generated(RunId run) { return {Type::generated, std::move(run), {}, {}}; }
  static Origin quick(std::string op, AssetId parent, RunId run = {}) {
    return {Type::quick_op, std::move(run), std::move(op), std::move(parent)};
  }
  friend bool operator==(const Origin&, const Origin&) = default;
};

struct Dims {
  int width = 0;
  int height = 0;
  friend bool operator==(const Dims&, const Dims&) = default;
};

struct Asset {
  AssetId id;
  AssetKind kind = AssetKind::image;
  BlobHash blob;
  std::optional<MediaFormat> format;
  std::optional<Dims> dims;
  std::optional<double> duration;
  std::optional<std::string> caption;
  std::map<ControlKind, BlobHash> control_maps;
  Origin origin;
  Timestamp created_at = 0;

  bool metadata_complete() const;
  friend bool operator==(const Asset&, const Asset&) = default;
};

struct Vec2 {
  double x = 0;
  double y = 0;
  friend bool operator==(const Vec2&, const Vec2&) = default;
};

struct CanvasItem {
  ItemId id;
  PageId page;
  AssetId asset;  // empty for text/sketch shapes not yet rasterized
  Vec2 position;
  Vec2 size;
  std::int64_t z_order = 0;
  double emphasis = 1.0;
  std::uint64_t click_count = 0;
  Timestamp last_interaction_at = 0;
  Timestamp created_at = 0;
  bool hidden = false;  // mirrors the provenance node's deleted flag

  Vec2 center() const { return {position.x + size.x / 2, position.y + size.y / 2}; }
  friend bool operator==(const CanvasItem&, const CanvasItem&) = default;
};

void to_json(json& j, const Origin& o);
void from_json(const json& j, Origin& o);
void to_json(json& j, const Asset& a);
void from_json(const json& j, Asset& a);
void to_json(json& j, const Vec2& v);
void from_json(const json& j, Vec2& v);
void to_json(json& j, const CanvasItem& i);
void from_json(const json& j, CanvasItem& i);

// Content-addressed blob storage. Blobs live at <root>/<h[0:2]>/<h[2:4]>/<h>;
// with no root the store is purely in memory. Writes are idempotent and safe
// to run concurrently.
class BlobStore {
 public:
  BlobStore() = default;
  explicit BlobStore(std::filesystem::path root);

  BlobHash put(std::span<const std::uint8_t> bytes);
  Bytes get(const BlobHash& hash) const;
  bool contains(const BlobHash& hash) const;
  std::size_t count() const;
  std::optional<std::filesystem::path> path_for(const BlobHash& hash) const;

 private:
  std::optional<std::filesystem::path> root_;
  mutable std::mutex mu_;
  std::unordered_map<BlobHash, Bytes> memory_;
  mutable std::unordered_map<BlobHash, bool> known_;
};

// What payload inspection learns about a candidate asset before it has an id.
struct PayloadInfo {
  std::optional<MediaFormat> format;
  std::optional<Dims> dims;
  std::optional<double> duration;
  std::optional<std::string> text;
};

// Validates that `payload` really is media of `kind`. Throws
// UndecodablePayload or UnsupportedKind.
PayloadInfo inspect_payload(std::span<const std::uint8_t> payload, AssetKind kind);

// In-memory registry of assets and canvas items. Mutators assume the caller
// already validated the change; they are what journal replay calls.
class AssetRegistry {
 public:
  void add_asset(Asset asset);
  void set_metadata(const AssetId& id, std::optional<std::string> caption,
                    std::map<ControlKind, BlobHash> control_maps);
  void add_item(CanvasItem item);
  CanvasItem& item_mut(const ItemId& id);

  const Asset* find_asset(const AssetId& id) const;
  const Asset& asset(const AssetId& id) const;  // throws UnknownAsset
  const CanvasItem* find_item(const ItemId& id) const;
  const CanvasItem& item(const ItemId& id) const;  // throws UnknownItem

  std::vector<const CanvasItem*> items_of_asset(const AssetId& id) const;
  std::int64_t next_z(const PageId& page) const;

  const std::map<AssetId, Asset>& assets() const { return assets_; }
  const std::map<ItemId, CanvasItem>& items() const { return items_; }

 private:
  std::map<AssetId, Asset> assets_;
  std::map<ItemId, CanvasItem> items_;
};

}  // namespace easel
