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

#include "easel/asset_store.hpp"

#include <atomic>
#include <fstream>

#include "easel/error.hpp"
#include "easel/hash.hpp"

namespace easel {

namespace fs = std::filesystem;

std::string_view to_string(AssetKind k) {
  switch (k) {
    case AssetKind::image: return "image";
    case AssetKind::video: return "video";
    case AssetKind::text: return "text";
    case AssetKind::audio: return "audio";
    case AssetKind::model3d: return "model3d";
    case AssetKind::sketch: return "sketch";
  }
  return "unknown";
}

AssetKind asset_kind_from_string(std::string_view s) {
  if (s == "image") return AssetKind::image;
  if (s == "video") return AssetKind::video;
  if (s == "text") return AssetKind::text;
  if (s == "audio") return AssetKind::audio;
  if (s == "model3d") return AssetKind::model3d;
  if (s == "sketch") return AssetKind::sketch;
  fail(ErrorCode::UnsupportedKind, "unsupported asset kind '" + std::string(s) + "'");
}

std::string_view to_string(ControlKind k) {
  switch (k) {
    case ControlKind::pose: return "pose";
    case ControlKind::depth: return "depth";
    case ControlKind::scribble: return "scribble";
    case ControlKind::lineart: return "lineart";
  }
  return "unknown";
}

ControlKind control_kind_from_string(std::string_view s) {
  if (s == "pose") return ControlKind::pose;
  if (s == "depth") return ControlKind::depth;
  if (s == "scribble") return ControlKind::scribble;
  if (s == "lineart") return ControlKind::lineart;
  fail(ErrorCode::UnknownKind, "unknown control map kind '" + std::string(s) + "'");
}

bool Asset::metadata_complete() const {
  if (!caption) return false;
  if (is_raster_kind(kind)) return control_maps.size() == std::size(kAllControlKinds);
  return true;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

std::string_view origin_type_name(Origin::Type t) {
  switch (t) {
    case Origin::Type::imported: return "imported";
    case Origin::Type::generated: return "generated";
    case Origin::Type::quick_op: return "quick_op";
  }
  return "imported";
}

}  // namespace

void to_json(json& j, const Origin& o) {
  j = json{{"type", origin_type_name(o.type)}};
  if (o.type != Origin::Type::imported) j["run_id"] = o.run_id;
  if (o.type == Origin::Type::quick_op) {
    j["quick_op"] = o.quick_op;
    j["parent"] = o.parent;
  }
}

void from_json(const json& j, Origin& o) {
  const auto type = j.at("type").get<std::string>();
  o = Origin{};
  if (type == "generated") {
    o.type = Origin::Type::generated;
  } else if (type == "quick_op") {
    o.type = Origin::Type::quick_op;
    o.quick_op = j.at("quick_op").get<std::string>();
    o.parent = j.at("parent").get<AssetId>();
  } else if (type != "imported") {
    fail(ErrorCode::MalformedPayload, "unknown origin type '" + type + "'");
  }
  if (j.contains("run_id")) o.run_id = j.at("run_id").get<RunId>();
}

void to_json(json& j, const Asset& a) {
  j = json{{"asset_id", a.id},
           {"kind", to_string(a.kind)},
           {"blob", a.blob},
           {"origin", a.origin},
           {"created_at", a.created_at}};
  j["format"] = a.format ? json(to_string(*a.format)) : json(nullptr);
  j["dims"] = a.dims ? json::array({a.dims->width, a.dims->height}) : json(nullptr);
  j["duration"] = a.duration ? json(*a.duration) : json(nullptr);
  j["caption"] = a.caption ? json(*a.caption) : json(nullptr);
  json maps = json::object();
  for (const auto& [k, h] : a.control_maps) maps[std::string(to_string(k))] = h;
  j["control_maps"] = maps;
}

void from_json(const json& j, Asset& a) {
  a = Asset{};
  a.id = j.at("asset_id").get<AssetId>();
  a.kind = asset_kind_from_string(j.at("kind").get<std::string>());
  a.blob = j.at("blob").get<std::string>();
  a.origin = j.at("origin").get<Origin>();
  a.created_at = j.at("created_at").get<Timestamp>();
  if (const auto& f = j.value("format", json()); !f.is_null()) {
    const auto s = f.get<std::string>();
    for (auto fmt : {MediaFormat::png, MediaFormat::jpeg, MediaFormat::webp, MediaFormat::mp4, MediaFormat::glb}) {
      if (to_string(fmt) == s) a.format = fmt;
    }
  }
  if (const auto& d = j.value("dims", json()); !d.is_null()) a.dims = Dims{d.at(0).get<int>(), d.at(1).get<int>()};
  if (const auto& d = j.value("duration", json()); !d.is_null()) a.duration = d.get<double>();
  if (const auto& c = j.value("caption", json()); !c.is_null()) a.caption = c.get<std::string>();
  for (const auto& [k, v] : j.value("control_maps", json::object()).items()) {
    a.control_maps[control_kind_from_string(k)] = v.get<std::string>();
  }
}

void to_json(json& j, const Vec2& v) { j = json::array({v.x, v.y}); }
// Accepts [x, y] or {"x": .., "y": ..}.
void from_json(const json& j, Vec2& v) {
  if (j.is_object()) {
    v = {j.at("x").get<double>(), j.at("y").get<double>()};
  } else {
    v = {j.at(0).get<double>(), j.at(1).get<double>()};
  }
}

void to_json(json& j, const CanvasItem& i) {
  j = json{{"item_id", i.id},
           {"page_id", i.page},
           {"asset_id", i.asset},
           {"position", i.position},
           {"size", i.size},
           {"z_order", i.z_order},
           {"emphasis", i.emphasis},
           {"click_count", i.click_count},
           {"last_interaction_at", i.last_interaction_at},
           {"created_at", i.created_at},
           {"hidden", i.hidden}};
}

void from_json(const json& j, CanvasItem& i) {
  i.id = j.at("item_id").get<ItemId>();
  i.page = j.at("page_id").get<PageId>();
  i.asset = j.at("asset_id").get<AssetId>();
  i.position = j.at("position").get<Vec2>();
  i.size = j.at("size").get<Vec2>();
  i.z_order = j.at("z_order").get<std::int64_t>();
  i.emphasis = j.at("emphasis").get<double>();
  i.click_count = j.at("click_count").get<std::uint64_t>();
  i.last_interaction_at = j.at("last_interaction_at").get<Timestamp>();
  i.created_at = j.at("created_at").get<Timestamp>();
  i.hidden = j.value("hidden", false);
}

// ---------------------------------------------------------------------------
// BlobStore

BlobStore::BlobStore(fs::path root) : root_(std::move(root)) { fs::create_directories(*root_); }

std::optional<fs::path> BlobStore::path_for(const BlobHash& hash) const {
  if (!root_) return std::nullopt;
  return *root_ / hash.substr(0, 2) / hash.substr(2, 2) / hash;
}

BlobHash BlobStore::put(std::span<const std::uint8_t> bytes) {
  BlobHash hash = sha256_hex(bytes);
  if (!root_) {
    std::lock_guard lock(mu_);
    memory_.try_emplace(hash, bytes.begin(), bytes.end());
    return hash;
  }
  const fs::path target = *path_for(hash);
  {
    std::lock_guard lock(mu_);
    if (known_.count(hash)) return hash;
  }
  if (!fs::exists(target)) {
    fs::create_directories(target.parent_path());
    // Unique temp name per writer; rename is atomic so concurrent writers of
    // the same payload all end with one identical file.
    static std::atomic<std::uint64_t> counter{0};
    const fs::path tmp = target.string() + ".tmp" + std::to_string(counter.fetch_add(1));
    {
      std::ofstream out(tmp, std::ios::binary);
      out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
      if (!out) fail(ErrorCode::Io, "failed writing blob " + hash);
    }
    fs::rename(tmp, target);
  }
  std::lock_guard lock(mu_);
  known_[hash] = true;
  return hash;
}

Bytes BlobStore::get(const BlobHash& hash) const {
  if (!root_) {
    std::lock_guard lock(mu_);
    auto it = memory_.find(hash);
    if (it == memory_.end()) fail(ErrorCode::UnknownAsset, "no blob " + hash);
    return it->second;
  }
  std::ifstream in(*path_for(hash), std::ios::binary);
  if (!in) fail(ErrorCode::UnknownAsset, "no blob " + hash);
  return Bytes(std::istreambuf_iterator<char>(in), {});
}

bool BlobStore::contains(const BlobHash& hash) const {
  std::lock_guard lock(mu_);
  if (!root_) return memory_.count(hash) > 0;
  if (known_.count(hash)) return true;
  if (fs::exists(*path_for(hash))) {
    known_[hash] = true;
    return true;
  }
  return false;
}

std::size_t BlobStore::count() const {
  std::lock_guard lock(mu_);
  if (!root_) return memory_.size();
  std::size_t n = 0;
  for (const auto& e : fs::recursive_directory_iterator(*root_)) {
    if (e.is_regular_file() && e.path().filename().string().find(".tmp") == std::string::npos) ++n;
  }
  return n;
}

// ---------------------------------------------------------------------------
// Payload inspection

namespace {

bool valid_utf8(std::span<const std::uint8_t> b) {
  std::size_t i = 0;
  while (i < b.size()) {
    const std::uint8_t c = b[i];
    std::size_t extra = 0;
    std::uint32_t cp = 0;
    if (c < 0x80) {
      ++i;
      continue;
    } else if ((c & 0xE0) == 0xC0) {
      extra = 1;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      extra = 2;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      extra = 3;
      cp = c & 0x07;
    } else {
      return false;
    }
    if (i + extra >= b.size()) return false;
    for (std::size_t k = 1; k <= extra; ++k) {
      if ((b[i + k] & 0xC0) != 0x80) return false;
      cp = (cp << 6) | (b[i + k] & 0x3F);
    }
    static constexpr std::uint32_t min_for_len[] = {0, 0x80, 0x800, 0x10000};
    if (cp < min_for_len[extra] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return false;
    i += extra + 1;
  }
  return true;
}

bool starts_with(std::span<const std::uint8_t> b, std::string_view magic, std::size_t at = 0) {
  return b.size() >= at + magic.size() && std::equal(magic.begin(), magic.end(), b.begin() + at);
}

std::optional<double> wav_duration(std::span<const std::uint8_t> b) {
  if (!starts_with(b, "RIFF") || !starts_with(b, "WAVE", 8)) return std::nullopt;
  auto le32 = [&](std::size_t at) {
    return std::uint32_t{b[at]} | (std::uint32_t{b[at + 1]} << 8) | (std::uint32_t{b[at + 2]} << 16) |
           (std::uint32_t{b[at + 3]} << 24);
  };
  std::uint32_t byte_rate = 0;
  std::size_t at = 12;
  while (at + 8 <= b.size()) {
    const std::uint32_t len = le32(at + 4);
    if (starts_with(b, "fmt ", at) && at + 20 <= b.size()) byte_rate = le32(at + 16);
    if (starts_with(b, "data", at) && byte_rate > 0) return static_cast<double>(len) / byte_rate;
    at += 8 + len + (len & 1);
  }
  return std::nullopt;
}

bool is_audio(std::span<const std::uint8_t> b) {
  if (starts_with(b, "RIFF") && starts_with(b, "WAVE", 8)) return true;
  if (starts_with(b, "ID3") || starts_with(b, "OggS") || starts_with(b, "fLaC")) return true;
  return b.size() >= 2 && b[0] == 0xFF && (b[1] & 0xE0) == 0xE0;  // MPEG frame sync
}

}  // namespace

PayloadInfo inspect_payload(std::span<const std::uint8_t> payload, AssetKind kind) {
  if (payload.empty()) fail(ErrorCode::UndecodablePayload, "empty payload");
  PayloadInfo info;
  const auto media = sniff_media(payload);
  auto require = [&](std::initializer_list<MediaFormat> allowed, std::string_view what) {
    if (media) {
      for (auto f : allowed) {
        if (media->format == f) return;
      }
    }
    fail(ErrorCode::UndecodablePayload, "payload is not a supported " + std::string(what));
  };
  switch (kind) {
    case AssetKind::image:
      require({MediaFormat::png, MediaFormat::jpeg, MediaFormat::webp}, "image (PNG, JPEG, WebP)");
      break;
    case AssetKind::sketch:
      require({MediaFormat::png}, "sketch raster (PNG)");
      break;
    case AssetKind::video:
      require({MediaFormat::mp4}, "video (MP4)");
      break;
    case AssetKind::model3d:
      require({MediaFormat::glb}, "3D model (GLB)");
      break;
    case AssetKind::text:
      if (!valid_utf8(payload)) fail(ErrorCode::UndecodablePayload, "text payload is not UTF-8");
      info.text = std::string(payload.begin(), payload.end());
      return info;
    case AssetKind::audio:
      if (!is_audio(payload)) fail(ErrorCode::UndecodablePayload, "payload is not WAV, MP3, OGG or FLAC audio");
      info.duration = wav_duration(payload);
      return info;
  }
  info.format = media->format;
  if (media->dims) info.dims = Dims{media->dims->first, media->dims->second};
  info.duration = media->duration_seconds;
  if (is_raster_kind(kind) && !info.dims) fail(ErrorCode::UndecodablePayload, "image header has no dimensions");
  return info;
}

// ---------------------------------------------------------------------------
// Registry

void AssetRegistry::add_asset(Asset asset) {
  auto id = asset.id;
  assets_.insert_or_assign(std::move(id), std::move(asset));
}

void AssetRegistry::set_metadata(const AssetId& id, std::optional<std::string> caption,
                                 std::map<ControlKind, BlobHash> control_maps) {
  auto it = assets_.find(id);
  if (it == assets_.end()) fail(ErrorCode::UnknownAsset, id.str());
  it->second.caption = std::move(caption);
  it->second.control_maps = std::move(control_maps);
}

void AssetRegistry::add_item(CanvasItem item) {
  auto id = item.id;
  items_.insert_or_assign(std::move(id), std::move(item));
}

CanvasItem& AssetRegistry::item_mut(const ItemId& id) {
  auto it = items_.find(id);
  if (it == items_.end()) fail(ErrorCode::UnknownItem, "unknown item " + id.str());
  return it->second;
}

const Asset* AssetRegistry::find_asset(const AssetId& id) const {
  auto it = assets_.find(id);
  return it == assets_.end() ? nullptr : &it->second;
}

const Asset& AssetRegistry::asset(const AssetId& id) const {
  if (const auto* a = find_asset(id)) return *a;
  fail(ErrorCode::UnknownAsset, "unknown asset " + id.str());
}

const CanvasItem* AssetRegistry::find_item(const ItemId& id) const {
  auto it = items_.find(id);
  return it == items_.end() ? nullptr : &it->second;
}

const CanvasItem& AssetRegistry::item(const ItemId& id) const {
  if (const auto* i = find_item(id)) return *i;
  fail(ErrorCode::UnknownItem, "unknown item " + id.str());
}

std::vector<const CanvasItem*> AssetRegistry::items_of_asset(const AssetId& id) const {
  std::vector<const CanvasItem*> out;
  for (const auto& [_, item] : items_) {
    if (item.asset == id) out.push_back(&item);
  }
  return out;
}

std::int64_t AssetRegistry::next_z(const PageId& page) const {
  std::int64_t top = -1;
  for (const auto& [_, item] : items_) {
    if (item.page == page) top = std::max(top, item.z_order);
  }
  return top + 1;
}

}  // namespace easel
