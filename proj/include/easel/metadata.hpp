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

#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "easel/asset_store.hpp"

namespace easel {

struct MetadataResult {
  std::optional<std::string> caption;
  std::map<ControlKind, BlobHash> control_maps;
  friend bool operator==(const MetadataResult&, const MetadataResult&) = default;
};

// Deterministic grayscale stand-ins for the four control preprocessors.
GrayImage luma(const Raster& img);
GrayImage mock_control_map(const Raster& img, ControlKind kind);
std::string mock_caption(const BlobHash& blob);

class Preprocessor {
 public:
  virtual ~Preprocessor() = default;
  // Throws WrongAssetKind for assets that carry no pixels to describe.
  virtual MetadataResult run(const Asset& asset, BlobStore& blobs) = 0;
};

// Local transforms; no backend involved.
class MockPreprocessor final : public Preprocessor {
 public:
  MetadataResult run(const Asset& asset, BlobStore& blobs) override;
};

// Which assets get metadata at all.
bool wants_metadata(AssetKind kind);

// Background worker: assets are queued on ingest and described one at a
// time; results are handed to `sink`, which commits them to the document.
class MetadataPipeline {
 public:
  using Sink = std::function<void(const AssetId&, const MetadataResult&)>;
  using ErrorSink = std::function<void(const AssetId&, const std::string&)>;

  MetadataPipeline(std::shared_ptr<Preprocessor> pre, std::shared_ptr<BlobStore> blobs, Sink sink,
                   ErrorSink on_error = {});
  ~MetadataPipeline();
  MetadataPipeline(const MetadataPipeline&) = delete;
  MetadataPipeline& operator=(const MetadataPipeline&) = delete;

  // Complete assets are skipped, so re-enqueueing is harmless.
  void enqueue(const Asset& asset);
  // Blocks until the queue is empty and no job is running.
  void quiesce();
  void stop();
  std::size_t processed() const;

 private:
  void loop();

  std::shared_ptr<Preprocessor> pre_;
  std::shared_ptr<BlobStore> blobs_;
  Sink sink_;
  ErrorSink on_error_;
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable idle_cv_;
  std::deque<Asset> queue_;
  bool busy_ = false;
  bool stopping_ = false;
  std::size_t processed_ = 0;
  std::thread worker_;
};

// Case-insensitive token-prefix search with term-frequency ranking.
std::vector<std::string> tokenize(std::string_view text);

struct SearchHit {
  AssetId asset;
  double score = 0;
  friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

class SearchIndex {
 public:
  void set(const AssetId& asset, std::string_view text);
  void remove(const AssetId& asset);
  // Hits contain at least one query token as a prefix of an indexed token;
  // ordered by score descending, then asset id.
  std::vector<SearchHit> query(std::string_view q, std::size_t limit = 50) const;
  const std::vector<std::string>* tokens_of(const AssetId& asset) const;
  std::size_t size() const { return docs_.size(); }

 private:
  std::map<AssetId, std::vector<std::string>> docs_;
};

}  // namespace easel
