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

#include "easel/metadata.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

#include "easel/error.hpp"

namespace easel {

GrayImage luma(const Raster& img) {
  GrayImage g{img.width(), img.height(), {}};
  g.pixels.resize(static_cast<std::size_t>(img.width()) * img.height());
  const auto px = img.data();
  for (std::size_t i = 0; i < g.pixels.size(); ++i) {
    const unsigned r = px[i * 4], gr = px[i * 4 + 1], b = px[i * 4 + 2];
    g.pixels[i] = static_cast<std::uint8_t>((77 * r + 150 * gr + 29 * b + 128) >> 8);
  }
  return g;
}

namespace {

// Sobel L1 magnitude / 4 with replicated borders.
GrayImage edges(const GrayImage& y) {
  GrayImage out{y.width, y.height, std::vector<std::uint8_t>(y.pixels.size())};
  auto at = [&](int x, int yy) {
    x = std::clamp(x, 0, y.width - 1);
    yy = std::clamp(yy, 0, y.height - 1);
    return static_cast<int>(y.pixels[static_cast<std::size_t>(yy) * y.width + x]);
  };
  for (int r = 0; r < y.height; ++r) {
    for (int c = 0; c < y.width; ++c) {
      const int gx = at(c + 1, r - 1) + 2 * at(c + 1, r) + at(c + 1, r + 1) - at(c - 1, r - 1) -
                     2 * at(c - 1, r) - at(c - 1, r + 1);
      const int gy = at(c - 1, r + 1) + 2 * at(c, r + 1) + at(c + 1, r + 1) - at(c - 1, r - 1) -
                     2 * at(c, r - 1) - at(c + 1, r - 1);
      out.pixels[static_cast<std::size_t>(r) * y.width + c] =
          static_cast<std::uint8_t>(std::min(255, (std::abs(gx) + std::abs(gy)) / 4));
    }
  }
  return out;
}

constexpr std::uint8_t kLineartThreshold = 32;

}  // namespace

GrayImage mock_control_map(const Raster& img, ControlKind kind) {
  auto y = luma(img);
  switch (kind) {
    case ControlKind::pose:
      return y;
    case ControlKind::depth:
      for (auto& p : y.pixels) p = static_cast<std::uint8_t>(255 - p);
      return y;
    case ControlKind::scribble:
      return edges(y);
    case ControlKind::lineart: {
      auto e = edges(y);
      for (auto& p : e.pixels) p = p >= kLineartThreshold ? 255 : 0;
      return e;
    }
  }
  return y;
}

std::string mock_caption(const BlobHash& blob) { return "mock caption " + blob.substr(0, 8); }

bool wants_metadata(AssetKind kind) { return is_raster_kind(kind) || kind == AssetKind::video; }

MetadataResult MockPreprocessor::run(const Asset& asset, BlobStore& blobs) {
  if (!wants_metadata(asset.kind)) {
    fail(ErrorCode::WrongAssetKind,
         "asset " + asset.id.str() + " is " + std::string(to_string(asset.kind)) + "; nothing to preprocess");
  }
  MetadataResult out{asset.caption, asset.control_maps};
  if (asset.metadata_complete()) return out;
  if (!out.caption) out.caption = mock_caption(asset.blob);
  if (!is_raster_kind(asset.kind)) return out;  // video: the caption stands in for the poster frame's

  Raster img;
  if (asset.format && can_decode_pixels(*asset.format)) {
    img = decode_image(blobs.get(asset.blob));
  } else {
    // No pixel decoder for this format: flat mid-gray at the stored dims.
    const auto d = asset.dims.value_or(Dims{1, 1});
    img = Raster(d.width, d.height, Rgba{128, 128, 128, 255});
  }
  for (auto kind : kAllControlKinds) {
    if (out.control_maps.count(kind)) continue;
    out.control_maps[kind] = blobs.put(encode_png_gray(mock_control_map(img, kind)));
  }
  return out;
}

MetadataPipeline::MetadataPipeline(std::shared_ptr<Preprocessor> pre, std::shared_ptr<BlobStore> blobs,
                                   Sink sink, ErrorSink on_error)
    : pre_(std::move(pre)), blobs_(std::move(blobs)), sink_(std::move(sink)), on_error_(std::move(on_error)) {
  worker_ = std::thread([this] { loop(); });
}

MetadataPipeline::~MetadataPipeline() { stop(); }

void MetadataPipeline::stop() {
  {
    std::lock_guard lk(mu_);
    if (stopping_) return;
    stopping_ = true;
  }
  cv_.notify_all();
  if (worker_.joinable()) worker_.join();
}

void MetadataPipeline::enqueue(const Asset& asset) {
  if (!wants_metadata(asset.kind) || asset.metadata_complete()) return;
  {
    std::lock_guard lk(mu_);
    queue_.push_back(asset);
  }
  cv_.notify_one();
}

void MetadataPipeline::quiesce() {
  std::unique_lock lk(mu_);
  idle_cv_.wait(lk, [&] { return (queue_.empty() && !busy_) || stopping_; });
}

std::size_t MetadataPipeline::processed() const {
  std::lock_guard lk(mu_);
  return processed_;
}

void MetadataPipeline::loop() {
  for (;;) {
    Asset asset;
    {
      std::unique_lock lk(mu_);
      cv_.wait(lk, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) {
        queue_.clear();
        idle_cv_.notify_all();
        return;
      }
      asset = std::move(queue_.front());
      queue_.pop_front();
      busy_ = true;
    }
    try {
      const auto result = pre_->run(asset, *blobs_);
      sink_(asset.id, result);
    } catch (const std::exception& e) {
      if (on_error_) on_error_(asset.id, e.what());
    }
    {
      std::lock_guard lk(mu_);
      busy_ = false;
      ++processed_;
    }
    idle_cv_.notify_all();
  }
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c) || c >= 0x80) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

void SearchIndex::set(const AssetId& asset, std::string_view text) {
  auto tokens = tokenize(text);
  if (tokens.empty()) {
    docs_.erase(asset);
  } else {
    docs_[asset] = std::move(tokens);
  }
}

void SearchIndex::remove(const AssetId& asset) { docs_.erase(asset); }

const std::vector<std::string>* SearchIndex::tokens_of(const AssetId& asset) const {
  auto it = docs_.find(asset);
  return it == docs_.end() ? nullptr : &it->second;
}

std::vector<SearchHit> SearchIndex::query(std::string_view q, std::size_t limit) const {
  auto terms = tokenize(q);
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
  std::vector<SearchHit> hits;
  if (terms.empty()) return hits;
  for (const auto& [asset, tokens] : docs_) {
    double score = 0;
    for (const auto& term : terms) {
      for (const auto& tok : tokens) {
        if (tok.compare(0, term.size(), term) == 0) score += 1;
      }
    }
    if (score > 0) hits.push_back({asset, score});
  }
  std::sort(hits.begin(), hits.end(), [](const SearchHit& a, const SearchHit& b) {
    return a.score != b.score ? a.score > b.score : a.asset < b.asset;
  });
  if (hits.size() > limit) hits.resize(limit);
  return hits;
}

}  // namespace easel
