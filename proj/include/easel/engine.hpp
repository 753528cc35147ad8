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

#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "easel/compiler.hpp"
#include "easel/config.hpp"
#include "easel/document.hpp"
#include "easel/gateway.hpp"
#include "easel/metadata.hpp"

namespace easel {

struct ItemPatch {
  std::optional<Vec2> position;
  std::optional<Vec2> size;
  std::optional<PageId> page;
  std::optional<std::int64_t> z_order;
};

struct EaselDraft {
  EaselId id;  // empty: create
  PageId page;
  Vec2 position;
  Vec2 size{320, 480};
  EaselSpec spec;
};

// Where a run's outputs land on the canvas. Defaults are derived from the
// easel or the source item.
struct Placement {
  PageId page;
  std::optional<Vec2> anchor;
};

struct AssetBlob {
  Bytes bytes;
  std::string mime;
  std::string filename;
};

// Everything the service exposes, wired together: one document, its blobs,
// the compiler, the generation queue and the metadata worker. All methods are
// safe to call from many threads; mutations are serialized by the document.
// Mutating methods take an optional idempotency key: repeating a key returns
// the first result without applying the mutation again.
class Engine {
 public:
  explicit Engine(EngineConfig cfg, std::shared_ptr<Clock> clock = nullptr,
                  std::shared_ptr<Backend> backend = nullptr);
  ~Engine();
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  // Pages.
  Page create_page(const std::string& name, const std::string& key = "");
  std::vector<Page> pages() const;

  // Assets and canvas items.
  Asset ingest(const Bytes& payload, AssetKind kind, const std::string& key = "");
  Asset asset(const AssetId& id) const;
  std::vector<Asset> assets() const;
  AssetBlob asset_blob(const AssetId& id) const;
  AssetBlob control_map_blob(const AssetId& id, ControlKind kind) const;
  CanvasItem place_item(const AssetId& asset, const PageId& page, Vec2 position, Vec2 size,
                        const std::string& key = "");
  CanvasItem item(const ItemId& id) const;
  std::vector<CanvasItem> items(const std::optional<PageId>& page = std::nullopt, bool include_hidden = false) const;
  CanvasItem update_item(const ItemId& id, const ItemPatch& patch, const std::string& key = "");
  CanvasItem touch(const ItemId& id, const std::string& key = "");
  CanvasItem set_emphasis(const ItemId& id, double level, const std::string& key = "");
  ProvenanceNode set_deleted(const NodeId& id, bool deleted, const std::string& key = "");
  ProvenanceNode delete_item(const ItemId& id, const std::string& key = "");

  // Local generations: finished synchronously, recorded as runs.
  RunRecord flatten_collage(const CollageRequest& req, const Placement& where, const std::string& key = "");
  RunRecord rasterize_sketch(const SketchRequest& req, const PageId& page, const std::string& key = "");

  // Easels.
  Easel save_easel(const EaselDraft& draft, const std::string& key = "");
  void delete_easel(const EaselId& id, const std::string& key = "");
  Easel easel(const EaselId& id) const;
  std::vector<Easel> easels() const;
  WorkflowGraph compile(const EaselSpec& spec) const;
  WorkflowGraph compile_easel(const EaselId& id) const;
  RunRecord generate_easel(const EaselId& id, const std::string& key = "");
  RunRecord generate(const EaselSpec& spec, const Placement& where, const std::string& key = "");
  RunRecord quick_op(const QuickOpRequest& req, const Placement& where = {}, const std::string& key = "");

  // Runs and jobs.
  RunRecord run(const RunId& id) const;
  std::vector<RunRecord> runs() const;
  JobStatus job(const JobId& id) const;
  std::vector<JobEvent> watch(const JobId& id, std::size_t from, std::chrono::milliseconds timeout) const;
  std::vector<Asset> fetch_outputs(const JobId& id);
  JobStatus cancel(const JobId& id);
  RunRecord wait_run(const RunId& id, std::chrono::milliseconds timeout = std::chrono::seconds(30));

  // Provenance.
  ProvenanceNode node(const NodeId& id) const;
  std::optional<ProvenanceNode> node_for_item(const ItemId& id) const;
  Lineage lineage(const NodeId& id) const;
  RunSpec recreate(const NodeId& id) const;
  // Graph a stored run spec compiles to now; nullopt for local operations.
  std::optional<WorkflowGraph> compile_run_spec(const RunSpec& spec) const;
  // Places a new easel holding the spec that produced the node.
  Easel recreate_easel(const NodeId& id, const PageId& page, Vec2 position, const std::string& key = "");
  std::vector<HistoryEntry> history(std::int64_t cursor) const;
  std::vector<TrailPoint> trail(std::optional<Timestamp> bucket = std::nullopt) const;
  std::map<ItemId, double> heatmap() const;
  std::vector<TimelineEntry> timeline(double axis_width) const;
  json provenance_export() const;

  // Organization.
  Collection create_collection(const std::string& name, const std::vector<AssetId>& members,
                               const std::vector<std::string>& tags, const std::string& key = "");
  Collection add_to_collection(const CollectionId& id, const std::vector<AssetId>& members, const std::string& key = "");
  Collection collection(const CollectionId& id) const;
  std::vector<Collection> collections() const;
  CanvasItem pull_from_collection(const CollectionId& id, const AssetId& asset, const PageId& page, Vec2 position,
                                  std::optional<Vec2> size = std::nullopt, const std::string& key = "");
  std::map<ItemId, Vec2> pack_grid(const std::vector<ItemId>& items, double gap, const std::string& key = "");
  ExhibitEntry exhibit_add(const AssetId& asset, const std::string& caption, std::optional<std::size_t> index = {},
                           const std::string& key = "");
  void exhibit_reorder(const EntryId& id, std::size_t to, const std::string& key = "");
  void exhibit_caption(const EntryId& id, const std::string& caption, const std::string& key = "");
  void exhibit_remove(const EntryId& id, const std::string& key = "");
  json exhibit_manifest() const;
  // Writes manifest.json plus one file per entry into `dir`.
  void export_exhibit(const std::filesystem::path& dir) const;

  std::vector<SearchHit> search(const std::string& query, std::size_t limit = 50) const;

  // Blocks until no generation or metadata work is pending.
  void quiesce();

  json state_json() const;
  std::uint64_t seq() const;
  Document& document() { return *doc_; }
  EventBus& bus() { return *bus_; }
  Gateway& gateway() { return *gateway_; }
  const Compiler& compiler() const { return compiler_; }
  BlobStore& blobs() { return *blobs_; }
  const EngineConfig& config() const { return cfg_; }

 private:
  template <class T, class F>
  T mutate(const std::string& key, F&& f);
  void on_job_event(const JobStatus& s, const JobEvent& e);
  void complete_run(const JobStatus& s);
  void enqueue_metadata(const std::vector<Asset>& assets);
  RunRecord submit_run(WriteTx& tx, RunKind kind, RunSpec spec, WorkflowGraph graph, const EaselId& easel,
                       const PageId& page, Vec2 anchor);
  void notify_runs();
  // Waits (bounded) until the assets' control maps exist, so graphs that
  // read them compile the same way now and on recreate.
  void await_metadata(const std::vector<AssetId>& assets);

  EngineConfig cfg_;
  std::shared_ptr<Clock> clock_;
  std::shared_ptr<EventBus> bus_;
  std::shared_ptr<BlobStore> blobs_;
  Compiler compiler_;
  std::unique_ptr<Document> doc_;
  std::shared_ptr<Backend> backend_;
  std::unique_ptr<Gateway> gateway_;
  std::unique_ptr<MetadataPipeline> metadata_;

  mutable std::mutex runs_mu_;
  std::condition_variable runs_cv_;
  std::uint64_t runs_epoch_ = 0;

  mutable std::mutex search_mu_;
  mutable std::uint64_t search_seq_ = ~std::uint64_t{0};
  mutable SearchIndex search_;
};

}  // namespace easel
