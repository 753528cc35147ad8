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

#include "easel/engine.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

#include "easel/comfy_backend.hpp"
#include "easel/error.hpp"
#include "easel/palette.hpp"
#include "easel/raster_ops.hpp"

namespace easel {
namespace {

constexpr double kOutputGap = 32;
constexpr double kStackGap = 16;
constexpr double kOutputSide = 256;

bool run_finished(const std::string& status) {
  return status == "done" || status == "failed" || status == "cancelled";
}

AssetLookup lookup_in(const DocState& st) {
  return [&st](const AssetId& id) { return st.registry.find_asset(id); };
}

const PageId& first_page(const DocState& st) {
  if (st.pages.empty()) fail(ErrorCode::UnknownPage, "document has no pages");
  return st.pages.begin()->first;
}

Vec2 display_size(const std::optional<Dims>& dims) {
  if (!dims || dims->width <= 0 || dims->height <= 0) return {kOutputSide, kOutputSide};
  const double w = dims->width, h = dims->height;
  if (w >= h) return {kOutputSide, kOutputSide * h / w};
  return {kOutputSide * w / h, kOutputSide};
}

void require_positive(Vec2 size) {
  if (!(size.x > 0) || !(size.y > 0)) fail(ErrorCode::NonPositiveSize, "item size must be positive");
}

// The canvas item that stands for an asset: the original node's item if it is
// visible, else the oldest visible item showing the asset.
const CanvasItem* primary_item(const DocState& st, const AssetId& asset) {
  if (const auto* n = st.graph.original_of(asset); n && !n->item.empty()) {
    const auto* it = st.registry.find_item(n->item);
    if (it && !it->hidden) return it;
  }
  const CanvasItem* best = nullptr;
  for (const auto* it : st.registry.items_of_asset(asset)) {
    if (it->hidden) continue;
    if (!best || std::tie(it->created_at, it->id) < std::tie(best->created_at, best->id)) best = it;
  }
  return best;
}

NodeKind node_kind_for(const Origin& o) {
  switch (o.type) {
    case Origin::Type::generated:
      return NodeKind::generated;
    case Origin::Type::quick_op:
      return NodeKind::quick_op;
    default:
      return NodeKind::original;
  }
}

// Node for an asset used as an input. Inputs that were never placed get a
// detached node so the edge has somewhere to point.
NodeId ensure_node(WriteTx& tx, const AssetId& asset) {
  if (const auto* n = tx.state().graph.original_of(asset)) return n->id;
  const auto& a = tx.state().registry.asset(asset);
  ProvenanceNode node;
  node.id = NodeId(tx.alloc("n"));
  node.asset = asset;
  node.kind = node_kind_for(a.origin);
  node.run_id = a.origin.run_id;
  node.created_at = tx.now();
  tx.emit("node_added", {{"node", node}});
  return node.id;
}

Asset add_asset(WriteTx& tx, AssetKind kind, const BlobHash& blob, const PayloadInfo& info, Origin origin) {
  Asset a;
  a.id = AssetId(tx.alloc("a"));
  a.kind = kind;
  a.blob = blob;
  a.format = info.format;
  a.dims = info.dims;
  a.duration = info.duration;
  if (info.text) a.caption = info.text;
  a.origin = std::move(origin);
  a.created_at = tx.now();
  tx.emit("asset_added", {{"asset", a}});
  return a;
}

CanvasItem new_item(WriteTx& tx, const AssetId& asset, const PageId& page, Vec2 pos, Vec2 size) {
  require_positive(size);
  tx.state().page(page);
  tx.state().registry.asset(asset);
  CanvasItem item;
  item.id = ItemId(tx.alloc("i"));
  item.page = page;
  item.asset = asset;
  item.position = pos;
  item.size = size;
  item.z_order = tx.state().registry.next_z(page);
  item.created_at = tx.now();
  item.last_interaction_at = tx.now();
  tx.emit("item_added", {{"item", item}});
  return item;
}

// Places an existing asset. The first placement becomes (or attaches to) the
// original node; later ones are copies pointing back at it.
CanvasItem place(WriteTx& tx, const AssetId& asset, const PageId& page, Vec2 pos, Vec2 size) {
  auto item = new_item(tx, asset, page, pos, size);
  const auto* orig = tx.state().graph.original_of(asset);
  if (orig && orig->item.empty()) {
    tx.emit("node_attached", {{"node", orig->id}, {"item", item.id}});
    return item;
  }
  ProvenanceNode node;
  node.id = NodeId(tx.alloc("n"));
  node.item = item.id;
  node.asset = asset;
  node.created_at = tx.now();
  if (orig) {
    node.kind = NodeKind::copy;
    node.copy_of = orig->id;
    node.run_id = orig->run_id;
    node.parents = {{orig->id, EdgeRole::source}};
    node.params = orig->params;
  } else {
    const auto& a = tx.state().registry.asset(asset);
    node.kind = node_kind_for(a.origin);
    node.run_id = a.origin.run_id;
  }
  tx.emit("node_added", {{"node", node}});
  return item;
}

void touch_as_input(WriteTx& tx, const std::vector<AssetId>& assets) {
  std::set<AssetId> seen;
  for (const auto& a : assets) {
    if (!seen.insert(a).second) continue;
    if (const auto* it = primary_item(tx.state(), a)) {
      tx.emit("item_touched", Interaction{tx.now(), it->id, Interaction::Kind::easel_input});
    }
  }
}

struct PreparedOutput {
  AssetKind kind = AssetKind::image;
  BlobHash blob;
  PayloadInfo info;
};

PreparedOutput prepare(BlobStore& blobs, const Bytes& bytes, AssetKind kind) {
  PreparedOutput p;
  p.kind = kind;
  p.info = inspect_payload(bytes, kind);
  p.blob = blobs.put(bytes);
  return p;
}

// Typed parent edges of whatever a run spec consumed.
std::vector<std::pair<AssetId, EdgeRole>> run_inputs(const RunSpec& spec) {
  std::vector<std::pair<AssetId, EdgeRole>> out;
  auto push = [&](const AssetId& a, EdgeRole r) {
    if (a.empty()) return;
    for (const auto& [x, y] : out) {
      if (x == a && y == r) return;
    }
    out.emplace_back(a, r);
  };
  if (const auto* e = std::get_if<EaselSpec>(&spec)) {
    for (const auto& [a, role] : e->input_assets()) push(a, edge_role_from_string(role));
  } else if (const auto* q = std::get_if<QuickOpRequest>(&spec)) {
    push(q->asset, EdgeRole::input_image);
  } else if (const auto* c = std::get_if<CollageRequest>(&spec)) {
    for (const auto& l : c->layers) push(l.asset, EdgeRole::collage_layer);
  }
  return out;
}

// Turns prepared outputs into assets, provenance nodes and canvas items
// stacked below the run's anchor.
std::vector<AssetId> record_outputs(WriteTx& tx, const RunRecord& run, const std::vector<PreparedOutput>& outs,
                                    std::optional<Vec2> fixed_size = std::nullopt) {
  std::vector<ParentEdge> parents;
  for (const auto& [asset, role] : run_inputs(run.spec)) parents.push_back({ensure_node(tx, asset), role});

  Origin origin = Origin::generated(run.id);
  NodeKind kind = NodeKind::generated;
  if (const auto* q = std::get_if<QuickOpRequest>(&run.spec)) {
    origin = Origin::quick(std::string(to_string(q->op)), q->asset, run.id);
    kind = NodeKind::quick_op;
  }

  std::vector<AssetId> ids;
  Vec2 pos = run.anchor;
  for (const auto& o : outs) {
    auto a = add_asset(tx, o.kind, o.blob, o.info, origin);
    const Vec2 size = fixed_size.value_or(display_size(a.dims));
    auto item = new_item(tx, a.id, run.page, pos, size);
    pos.y += size.y + kStackGap;
    ProvenanceNode node;
    node.id = NodeId(tx.alloc("n"));
    node.item = item.id;
    node.asset = a.id;
    node.kind = kind;
    node.run_id = run.id;
    node.parents = parents;
    node.params = run.spec;
    node.created_at = tx.now();
    tx.emit("node_added", {{"node", node}});
    ids.push_back(a.id);
  }
  return ids;
}

AssetKind kind_for(OutputMedia m) {
  switch (m) {
    case OutputMedia::video:
      return AssetKind::video;
    case OutputMedia::model3d:
      return AssetKind::model3d;
    case OutputMedia::text:
      return AssetKind::text;
    default:
      return AssetKind::image;
  }
}

std::string search_text(const RunSpec& spec) {
  std::string s;
  auto add = [&](const std::string& t) {
    if (t.empty()) return;
    s += ' ';
    s += t;
  };
  if (const auto* e = std::get_if<EaselSpec>(&spec)) {
    add(e->prompt);
    add(e->negative_prompt);
    add(e->trace_source_prompt);
    add(e->trace_target_prompt);
    for (const auto& p : e->prompt_pills) add(p);
  } else if (const auto* q = std::get_if<QuickOpRequest>(&spec)) {
    add(q->prompt);
  }
  return s;
}

std::uint64_t job_number(const JobId& id) {
  const auto pos = id.str().rfind('-');
  if (pos == std::string::npos) return 0;
  try {
    return std::stoull(id.str().substr(pos + 1));
  } catch (const std::exception&) {
    return 0;
  }
}

std::string mime_for(const Asset& a) {
  if (a.format) return std::string(mime_type(*a.format));
  if (a.kind == AssetKind::text) return "text/plain; charset=utf-8";
  return "application/octet-stream";
}

std::string extension_for(const Asset& a) {
  if (a.format) return std::string(file_extension(*a.format));
  if (a.kind == AssetKind::text) return ".txt";
  return ".bin";
}

// Preprocessing through the generation backend: the preprocess workflow
// returns the caption as text and one image per control map.
class GatewayPreprocessor final : public Preprocessor {
 public:
  GatewayPreprocessor(Gateway& gw, const Compiler& compiler) : gw_(gw), compiler_(compiler) {}

  MetadataResult run(const Asset& asset, BlobStore& blobs) override {
    if (!wants_metadata(asset.kind)) fail(ErrorCode::WrongAssetKind, "nothing to preprocess for " + asset.id.str());
    MetadataResult out{asset.caption, asset.control_maps};
    if (asset.metadata_complete() || !is_raster_kind(asset.kind)) return out;
    const auto graph = compiler_.compile_preprocess(asset);
    const auto job = gw_.submit(graph, RunId{});
    const auto st = gw_.wait(job, std::chrono::hours(1));
    if (st.state != JobState::done) {
      throw Error(ErrorCode::BackendUnavailable, "preprocessing " + asset.id.str() + " " +
                                                     std::string(to_string(st.state)) + ": " + st.error);
    }
    for (const auto& o : gw_.outputs(job)) {
      if (o.media == OutputMedia::text) {
        if (!out.caption && !o.text.empty()) out.caption = o.text;
        continue;
      }
      const auto* prefix = graph.literal(o.node_id, "filename_prefix");
      if (!prefix || !std::holds_alternative<std::string>(*prefix)) continue;
      const auto& name = std::get<std::string>(*prefix);
      for (auto k : kAllControlKinds) {
        const std::string tag = "control_" + std::string(to_string(k));
        if (name.size() >= tag.size() && name.compare(name.size() - tag.size(), tag.size(), tag) == 0) {
          out.control_maps.try_emplace(k, blobs.put(o.bytes));
        }
      }
    }
    return out;
  }

 private:
  Gateway& gw_;
  const Compiler& compiler_;
};

std::shared_ptr<const TemplateSet> load_templates(const EngineConfig& cfg) {
  if (cfg.template_dir) return std::make_shared<TemplateSet>(TemplateSet::load(*cfg.template_dir));
  return std::make_shared<TemplateSet>(TemplateSet::load_default());
}

}  // namespace

template <class T, class F>
T Engine::mutate(const std::string& key, F&& f) {
  if (key.empty()) return doc_->write([&](WriteTx& tx) -> T { return f(tx); });
  const json r = doc_->write_idempotent(key, [&](WriteTx& tx) { return json(f(tx)); });
  return r.get<T>();
}

Engine::Engine(EngineConfig cfg, std::shared_ptr<Clock> clock, std::shared_ptr<Backend> backend)
    : cfg_(std::move(cfg)),
      clock_(clock ? std::move(clock) : std::make_shared<SystemClock>()),
      bus_(std::make_shared<EventBus>()),
      compiler_(load_templates(cfg_)) {
  validate_config(cfg_);
  DocumentOptions dopts;
  if (cfg_.data_dir) {
    std::filesystem::create_directories(*cfg_.data_dir);
    blobs_ = std::make_shared<BlobStore>(*cfg_.data_dir / "blobs");
    dopts.dir = *cfg_.data_dir / "doc";
  } else {
    blobs_ = std::make_shared<BlobStore>();
  }
  dopts.snapshot_every = cfg_.snapshot_every;
  dopts.fsync = cfg_.fsync;
  doc_ = std::make_unique<Document>(dopts, clock_, bus_);

  if (backend) {
    backend_ = std::move(backend);
  } else if (cfg_.backend_mode == "remote") {
    backend_ = std::make_shared<ComfyBackend>(cfg_.remote);
  } else {
    MockOptions mo;
    mo.ticks = cfg_.mock_ticks;
    mo.tick = std::chrono::milliseconds(cfg_.mock_tick_ms);
    backend_ = std::make_shared<MockBackend>(mo);
  }
  auto blobs = blobs_;
  gateway_ = std::make_unique<Gateway>(backend_, clock_, cfg_.max_inflight, [blobs](const std::string& name) {
    return blobs->get(name.substr(0, name.find('.')));
  });

  // Work left behind by a previous process cannot be resumed: the backend
  // queue did not survive, so those runs are closed as failed.
  std::uint64_t max_job = 0;
  std::vector<RunId> stale;
  std::vector<Asset> pending;
  bool no_pages = false;
  doc_->read([&](const DocState& st) {
    for (const auto& [id, r] : st.runs) {
      max_job = std::max(max_job, job_number(r.job));
      if (!run_finished(r.status)) stale.push_back(id);
    }
    for (const auto& [_, a] : st.registry.assets()) {
      if (wants_metadata(a.kind) && !a.metadata_complete()) pending.push_back(a);
    }
    no_pages = st.pages.empty();
    return 0;
  });
  gateway_->reserve_job_ids(max_job);
  if (!stale.empty()) {
    doc_->write([&](WriteTx& tx) {
      for (const auto& id : stale) {
        tx.emit("run_updated",
                {{"run", id}, {"status", "failed"}, {"error", "engine restarted"}, {"finished_at", tx.now()}});
      }
    });
  }
  if (no_pages) create_page("Page 1");

  gateway_->set_listener([this](const JobStatus& s, const JobEvent& e) { on_job_event(s, e); });

  std::shared_ptr<Preprocessor> pre;
  if (cfg_.backend_mode == "remote" && !backend) {
    pre = std::make_shared<GatewayPreprocessor>(*gateway_, compiler_);
  } else {
    pre = std::make_shared<MockPreprocessor>();
  }
  metadata_ = std::make_unique<MetadataPipeline>(
      pre, blobs_,
      [this](const AssetId& id, const MetadataResult& r) {
        doc_->write([&](WriteTx& tx) {
          const auto* a = tx.state().registry.find_asset(id);
          if (!a || a->metadata_complete()) return;
          auto maps = a->control_maps;
          for (const auto& [k, v] : r.control_maps) maps.try_emplace(k, v);
          json jm = json::object();
          for (const auto& [k, v] : maps) jm[std::string(to_string(k))] = v;
          const auto caption = a->caption ? a->caption : r.caption;
          tx.emit("metadata_set", {{"asset", id}, {"caption", caption ? json(*caption) : json(nullptr)},
                                   {"control_maps", jm}});
        });
        notify_runs();
      },
      [this](const AssetId& id, const std::string& msg) {
        std::cerr << "metadata for " << id.str() << " failed: " << msg << "\n";
        bus_->publish({0, "metadata_failed", {{"asset", id}, {"message", msg}}, clock_->now()});
      });
  enqueue_metadata(pending);
}

Engine::~Engine() {
  if (metadata_) metadata_->stop();
  if (gateway_) {
    gateway_->set_listener({});
    gateway_->shutdown();
  }
  bus_->close();
}

void Engine::enqueue_metadata(const std::vector<Asset>& assets) {
  for (const auto& a : assets) metadata_->enqueue(a);
}

void Engine::notify_runs() {
  {
    std::lock_guard lk(runs_mu_);
    ++runs_epoch_;
  }
  runs_cv_.notify_all();
}

void Engine::await_metadata(const std::vector<AssetId>& ids) {
  std::vector<Asset> missing;
  auto scan = [&] {
    missing = doc_->read([&](const DocState& st) {
      std::vector<Asset> out;
      for (const auto& id : ids) {
        const auto* a = st.registry.find_asset(id);
        if (a && wants_metadata(a->kind) && is_raster_kind(a->kind) && !a->metadata_complete()) out.push_back(*a);
      }
      return out;
    });
    return missing.empty();
  };
  if (scan()) return;
  enqueue_metadata(missing);
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::minutes(2);
  std::unique_lock lk(runs_mu_);
  while (!scan() && std::chrono::steady_clock::now() < deadline) {
    runs_cv_.wait_for(lk, std::chrono::milliseconds(20));
  }
}

void Engine::quiesce() {
  for (;;) {
    gateway_->drain();
    metadata_->quiesce();
    bool busy = false;
    for (const auto& j : gateway_->jobs()) busy = busy || !is_terminal(j.state);
    if (!busy) return;
  }
}

json Engine::state_json() const { return doc_->state_json(); }
std::uint64_t Engine::seq() const { return doc_->seq(); }

// Pages.

Page Engine::create_page(const std::string& name, const std::string& key) {
  return mutate<Page>(key, [&](WriteTx& tx) {
    Page p{PageId(tx.alloc("p")), name, tx.now()};
    tx.emit("page_created", {{"page", p}});
    return p;
  });
}

std::vector<Page> Engine::pages() const {
  return doc_->read([](const DocState& st) {
    std::vector<Page> out;
    for (const auto& [_, p] : st.pages) out.push_back(p);
    return out;
  });
}

// Assets and items.

Asset Engine::ingest(const Bytes& payload, AssetKind kind, const std::string& key) {
  const auto info = inspect_payload(payload, kind);
  const auto blob = blobs_->put(payload);
  auto a = mutate<Asset>(key, [&](WriteTx& tx) { return add_asset(tx, kind, blob, info, Origin::imported()); });
  enqueue_metadata({a});
  return a;
}

Asset Engine::asset(const AssetId& id) const {
  return doc_->read([&](const DocState& st) { return st.registry.asset(id); });
}

std::vector<Asset> Engine::assets() const {
  return doc_->read([](const DocState& st) {
    std::vector<Asset> out;
    for (const auto& [_, a] : st.registry.assets()) out.push_back(a);
    return out;
  });
}

AssetBlob Engine::asset_blob(const AssetId& id) const {
  const auto a = asset(id);
  return {blobs_->get(a.blob), mime_for(a), a.id.str() + extension_for(a)};
}

AssetBlob Engine::control_map_blob(const AssetId& id, ControlKind kind) const {
  const auto a = asset(id);
  auto it = a.control_maps.find(kind);
  if (it == a.control_maps.end()) {
    fail(ErrorCode::UnknownAsset, "asset " + id.str() + " has no " + std::string(to_string(kind)) + " map yet");
  }
  return {blobs_->get(it->second), "image/png", id.str() + "_" + std::string(to_string(kind)) + ".png"};
}

CanvasItem Engine::place_item(const AssetId& asset, const PageId& page, Vec2 position, Vec2 size,
                              const std::string& key) {
  return mutate<CanvasItem>(key, [&](WriteTx& tx) {
    return place(tx, asset, page.empty() ? first_page(tx.state()) : page, position, size);
  });
}

CanvasItem Engine::item(const ItemId& id) const {
  return doc_->read([&](const DocState& st) { return st.registry.item(id); });
}

std::vector<CanvasItem> Engine::items(const std::optional<PageId>& page, bool include_hidden) const {
  return doc_->read([&](const DocState& st) {
    if (page) st.page(*page);
    std::vector<CanvasItem> out;
    for (const auto& [_, it] : st.registry.items()) {
      if (page && it.page != *page) continue;
      if (it.hidden && !include_hidden) continue;
      out.push_back(it);
    }
    return out;
  });
}

CanvasItem Engine::update_item(const ItemId& id, const ItemPatch& patch, const std::string& key) {
  return mutate<CanvasItem>(key, [&](WriteTx& tx) {
    tx.state().registry.item(id);
    json d{{"item", id}};
    if (patch.position) d["position"] = *patch.position;
    if (patch.size) {
      require_positive(*patch.size);
      d["size"] = *patch.size;
    }
    if (patch.page) {
      tx.state().page(*patch.page);
      d["page"] = *patch.page;
    }
    if (patch.z_order) d["z_order"] = *patch.z_order;
    if (d.size() > 1) tx.emit("item_updated", d);
    return tx.state().registry.item(id);
  });
}

CanvasItem Engine::touch(const ItemId& id, const std::string& key) {
  return mutate<CanvasItem>(key, [&](WriteTx& tx) {
    tx.state().registry.item(id);
    tx.emit("item_touched", Interaction{tx.now(), id, Interaction::Kind::click});
    return tx.state().registry.item(id);
  });
}

CanvasItem Engine::set_emphasis(const ItemId& id, double level, const std::string& key) {
  return mutate<CanvasItem>(key, [&](WriteTx& tx) {
    tx.state().registry.item(id);
    if (!(level >= 0.0 && level <= 1.0)) fail(ErrorCode::OutOfRange, "emphasis must be within [0, 1]");
    tx.emit("item_updated", {{"item", id}, {"emphasis", level}});
    return tx.state().registry.item(id);
  });
}

ProvenanceNode Engine::set_deleted(const NodeId& id, bool deleted, const std::string& key) {
  return mutate<ProvenanceNode>(key, [&](WriteTx& tx) {
    if (tx.state().graph.node(id).deleted != deleted) tx.emit("node_deleted", {{"node", id}, {"deleted", deleted}});
    return tx.state().graph.node(id);
  });
}

ProvenanceNode Engine::delete_item(const ItemId& id, const std::string& key) {
  const auto node = doc_->read([&](const DocState& st) {
    st.registry.item(id);
    const auto* n = st.graph.node_for_item(id);
    if (!n) fail(ErrorCode::UnknownNode, "item " + id.str() + " has no provenance node");
    return n->id;
  });
  return set_deleted(node, true, key);
}

// Local generations.

RunRecord Engine::flatten_collage(const CollageRequest& req, const Placement& where, const std::string& key) {
  return mutate<RunRecord>(key, [&](WriteTx& tx) {
    const auto& st = tx.state();
    if (req.layers.empty()) fail(ErrorCode::EmptyLayerList, "collage needs at least one layer");
    std::vector<CollageLayer> layers;
    for (const auto& l : req.layers) {
      const auto& a = st.registry.asset(l.asset);
      if (!is_raster_kind(a.kind) || !a.format || !can_decode_pixels(*a.format)) {
        fail(ErrorCode::NonImageLayer, "layer " + l.asset.str() + " is not a decodable image");
      }
      layers.push_back({l.asset, l.transform, decode_image(blobs_->get(a.blob))});
    }
    const auto png = encode_png(easel::flatten_collage(std::move(layers), req.canvas));
    RunRecord r;
    r.id = RunId(tx.alloc("r"));
    r.kind = RunKind::collage;
    r.spec = req;
    r.page = where.page.empty() ? first_page(st) : st.page(where.page).id;
    r.anchor = where.anchor.value_or(Vec2{req.canvas.x, req.canvas.y});
    r.status = "running";
    r.created_at = tx.now();
    tx.emit("run_created", {{"run", r}});
    r.outputs = record_outputs(tx, r, {prepare(*blobs_, png, AssetKind::image)}, Vec2{req.canvas.w, req.canvas.h});
    r.status = "done";
    r.finished_at = tx.now();
    tx.emit("run_updated", {{"run", r.id}, {"status", r.status}, {"outputs", r.outputs}, {"finished_at", tx.now()}});
    return r;
  });
}

RunRecord Engine::rasterize_sketch(const SketchRequest& req, const PageId& page, const std::string& key) {
  return mutate<RunRecord>(key, [&](WriteTx& tx) {
    const auto& st = tx.state();
    const auto png = encode_png(rasterize_strokes(req.strokes, req.rect));
    RunRecord r;
    r.id = RunId(tx.alloc("r"));
    r.kind = RunKind::sketch;
    r.spec = req;
    r.page = page.empty() ? first_page(st) : st.page(page).id;
    r.anchor = {req.rect.x, req.rect.y};
    r.status = "running";
    r.created_at = tx.now();
    tx.emit("run_created", {{"run", r}});
    r.outputs = record_outputs(tx, r, {prepare(*blobs_, png, AssetKind::image)}, Vec2{req.rect.w, req.rect.h});
    r.status = "done";
    r.finished_at = tx.now();
    tx.emit("run_updated", {{"run", r.id}, {"status", r.status}, {"outputs", r.outputs}, {"finished_at", tx.now()}});
    return r;
  });
}

// Easels.

Easel Engine::save_easel(const EaselDraft& draft, const std::string& key) {
  return mutate<Easel>(key, [&](WriteTx& tx) {
    const auto& st = tx.state();
    require_positive(draft.size);
    Easel e;
    if (!draft.id.empty()) {
      e = st.easel(draft.id);
    } else {
      e.id = EaselId(tx.alloc("e"));
      e.created_at = tx.now();
    }
    e.page = draft.page.empty() ? first_page(st) : st.page(draft.page).id;
    e.position = draft.position;
    e.size = draft.size;
    e.spec = draft.spec;
    e.updated_at = tx.now();
    tx.emit("easel_saved", {{"easel", e}});
    return e;
  });
}

void Engine::delete_easel(const EaselId& id, const std::string& key) {
  mutate<bool>(key, [&](WriteTx& tx) {
    tx.state().easel(id);
    tx.emit("easel_deleted", {{"easel", id}});
    return true;
  });
}

Easel Engine::easel(const EaselId& id) const {
  return doc_->read([&](const DocState& st) { return st.easel(id); });
}

std::vector<Easel> Engine::easels() const {
  return doc_->read([](const DocState& st) {
    std::vector<Easel> out;
    for (const auto& [_, e] : st.easels) out.push_back(e);
    return out;
  });
}

WorkflowGraph Engine::compile(const EaselSpec& spec) const {
  return doc_->read([&](const DocState& st) { return compiler_.compile(spec, lookup_in(st)); });
}

WorkflowGraph Engine::compile_easel(const EaselId& id) const {
  return doc_->read([&](const DocState& st) { return compiler_.compile(st.easel(id).spec, lookup_in(st)); });
}

RunRecord Engine::submit_run(WriteTx& tx, RunKind kind, RunSpec spec, WorkflowGraph graph, const EaselId& easel,
                             const PageId& page, Vec2 anchor) {
  RunRecord r;
  r.id = RunId(tx.alloc("r"));
  r.kind = kind;
  r.spec = std::move(spec);
  r.easel = easel;
  r.page = page;
  r.anchor = anchor;
  r.graph = graph.serialize();
  r.created_at = tx.now();
  r.job = gateway_->submit(std::move(graph), r.id);
  tx.emit("run_created", {{"run", r}});
  return r;
}

namespace {

void check_inputs(const DocState& st, const EaselSpec& spec) {
  for (const auto& [a, role] : spec.input_assets()) {
    if (!st.registry.find_asset(a)) {
      throw Error(ErrorCode::UnknownInputAsset, "input asset " + a.str() + " (" + role + ") does not exist",
                  {role + ": unknown asset " + a.str()});
    }
  }
}

std::vector<AssetId> structure_inputs(const EaselSpec& spec) {
  if (!spec.structure) return {};
  return {spec.structure->asset};
}

std::vector<AssetId> input_ids(const EaselSpec& spec) {
  std::vector<AssetId> out;
  for (const auto& [a, _] : spec.input_assets()) out.push_back(a);
  return out;
}

}  // namespace

RunRecord Engine::generate_easel(const EaselId& id, const std::string& key) {
  await_metadata(structure_inputs(easel(id).spec));
  return mutate<RunRecord>(key, [&](WriteTx& tx) {
    const auto e = tx.state().easel(id);
    check_inputs(tx.state(), e.spec);
    auto graph = compiler_.compile(e.spec, lookup_in(tx.state()));
    touch_as_input(tx, input_ids(e.spec));
    const Vec2 anchor{e.position.x + e.size.x + kOutputGap, e.position.y};
    return submit_run(tx, RunKind::easel, e.spec, std::move(graph), e.id, e.page, anchor);
  });
}

RunRecord Engine::generate(const EaselSpec& spec, const Placement& where, const std::string& key) {
  await_metadata(structure_inputs(spec));
  return mutate<RunRecord>(key, [&](WriteTx& tx) {
    const auto& st = tx.state();
    const PageId page = where.page.empty() ? first_page(st) : st.page(where.page).id;
    check_inputs(st, spec);
    auto graph = compiler_.compile(spec, lookup_in(st));
    touch_as_input(tx, input_ids(spec));
    return submit_run(tx, RunKind::easel, spec, std::move(graph), {}, page, where.anchor.value_or(Vec2{}));
  });
}

RunRecord Engine::quick_op(const QuickOpRequest& req, const Placement& where, const std::string& key) {
  if (req.op == QuickOpKind::stencil) await_metadata({req.asset});
  std::vector<Asset> made;
  auto run = mutate<RunRecord>(key, [&](WriteTx& tx) {
    const auto& st = tx.state();
    const Asset src = st.registry.asset(req.asset);
    const auto plan = compiler_.plan_quick_op(req, lookup_in(st));

    const CanvasItem* item = primary_item(st, req.asset);
    PageId page;
    if (!where.page.empty()) {
      page = st.page(where.page).id;
    } else {
      page = item ? item->page : first_page(st);
    }
    Vec2 anchor;
    if (where.anchor) {
      anchor = *where.anchor;
    } else if (item && item->page == page) {
      anchor = {item->position.x + item->size.x + kOutputGap, item->position.y};
    }
    touch_as_input(tx, {req.asset});

    if (plan.mode == QuickOpPlan::Mode::workflow || plan.mode == QuickOpPlan::Mode::easel) {
      WorkflowGraph graph = plan.graph ? *plan.graph : compiler_.compile(*plan.easel, lookup_in(st));
      return submit_run(tx, RunKind::quick_op, req, std::move(graph), {}, page, anchor);
    }

    std::vector<PreparedOutput> outs;
    if (plan.mode == QuickOpPlan::Mode::local_palette) {
      const auto colors = extract_palette(decode_image(blobs_->get(src.blob)));
      outs.push_back(prepare(*blobs_, encode_png(render_palette(colors)), AssetKind::image));
    } else {
      for (auto k : kAllControlKinds) outs.push_back(prepare(*blobs_, blobs_->get(src.control_maps.at(k)), AssetKind::image));
    }
    RunRecord r;
    r.id = RunId(tx.alloc("r"));
    r.kind = RunKind::quick_op;
    r.spec = req;
    r.page = page;
    r.anchor = anchor;
    r.status = "running";
    r.created_at = tx.now();
    tx.emit("run_created", {{"run", r}});
    r.outputs = record_outputs(tx, r, outs);
    r.status = "done";
    r.finished_at = tx.now();
    tx.emit("run_updated", {{"run", r.id}, {"status", r.status}, {"outputs", r.outputs}, {"finished_at", tx.now()}});
    for (const auto& id : r.outputs) made.push_back(st.registry.asset(id));
    return r;
  });
  enqueue_metadata(made);
  return run;
}

// Runs and jobs.

void Engine::on_job_event(const JobStatus& s, const JobEvent& e) {
  bus_->publish({0, "job", {{"job", to_json(s)}, {"event", to_json(e)}}, e.at});
  if (is_terminal(e.state) && !s.run.empty()) complete_run(s);
}

void Engine::complete_run(const JobStatus& s) {
  std::vector<PreparedOutput> outs;
  std::string error = s.error;
  JobState state = s.state;
  if (state == JobState::done) {
    try {
      for (const auto& o : gateway_->outputs(s.id)) {
        if (o.media == OutputMedia::text || o.bytes.empty()) continue;
        outs.push_back(prepare(*blobs_, o.bytes, kind_for(o.media)));
      }
      if (outs.empty()) throw Error(ErrorCode::GenerationFailed, "backend returned no media outputs");
    } catch (const std::exception& ex) {
      state = JobState::failed;
      error = ex.what();
    }
  }
  std::vector<Asset> made;
  try {
    doc_->write([&](WriteTx& tx) {
      const auto* found = tx.state().run_for_job(s.id);
      if (!found || run_finished(found->status)) return;
      const RunRecord run = *found;
      json d{{"run", run.id}, {"status", std::string(to_string(state))}, {"finished_at", tx.now()}};
      if (state == JobState::done) {
        const auto ids = record_outputs(tx, run, outs);
        d["outputs"] = ids;
        for (const auto& id : ids) made.push_back(tx.state().registry.asset(id));
      } else {
        d["error"] = error;
      }
      tx.emit("run_updated", d);
    });
  } catch (const std::exception& ex) {
    std::cerr << "recording run for job " << s.id.str() << " failed: " << ex.what() << "\n";
  }
  enqueue_metadata(made);
  notify_runs();
}

RunRecord Engine::run(const RunId& id) const {
  return doc_->read([&](const DocState& st) { return st.run(id); });
}

std::vector<RunRecord> Engine::runs() const {
  return doc_->read([](const DocState& st) {
    std::vector<RunRecord> out;
    for (const auto& [_, r] : st.runs) out.push_back(r);
    return out;
  });
}

JobStatus Engine::job(const JobId& id) const {
  try {
    return gateway_->status(id);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::UnknownJob) throw;
  }
  // Jobs from an earlier process only survive as their run record.
  return doc_->read([&](const DocState& st) {
    const auto* r = st.run_for_job(id);
    if (!r) fail(ErrorCode::UnknownJob, "unknown job " + id.str());
    JobStatus s;
    s.id = id;
    s.run = r->id;
    s.state = r->status == "done" ? JobState::done : r->status == "cancelled" ? JobState::cancelled : JobState::failed;
    s.progress = s.state == JobState::done ? 1.0 : 0.0;
    s.error = r->error;
    s.submitted_at = r->created_at;
    s.finished_at = r->finished_at;
    s.output_count = r->outputs.size();
    return s;
  });
}

std::vector<JobEvent> Engine::watch(const JobId& id, std::size_t from, std::chrono::milliseconds timeout) const {
  return gateway_->watch(id, from, timeout);
}

RunRecord Engine::wait_run(const RunId& id, std::chrono::milliseconds timeout) {
  const auto deadline = std::chrono::steady_clock::now() + timeout;
  std::unique_lock lk(runs_mu_);
  for (;;) {
    auto r = run(id);
    if (run_finished(r.status) || std::chrono::steady_clock::now() >= deadline) return r;
    runs_cv_.wait_until(lk, std::min(deadline, std::chrono::steady_clock::now() + std::chrono::milliseconds(50)));
  }
}

std::vector<Asset> Engine::fetch_outputs(const JobId& id) {
  const auto st = job(id);
  if (st.state != JobState::done) {
    fail(ErrorCode::NotDone, "job " + id.str() + " is " + std::string(to_string(st.state)));
  }
  if (st.run.empty()) return {};
  const auto r = wait_run(st.run);
  if (r.status != "done") fail(ErrorCode::NotDone, "run " + r.id.str() + " is " + r.status);
  return doc_->read([&](const DocState& s) {
    std::vector<Asset> out;
    for (const auto& a : r.outputs) out.push_back(s.registry.asset(a));
    return out;
  });
}

JobStatus Engine::cancel(const JobId& id) {
  job(id);
  return gateway_->cancel(id);
}

// Provenance.

ProvenanceNode Engine::node(const NodeId& id) const {
  return doc_->read([&](const DocState& st) { return st.graph.node(id); });
}

std::optional<ProvenanceNode> Engine::node_for_item(const ItemId& id) const {
  return doc_->read([&](const DocState& st) -> std::optional<ProvenanceNode> {
    st.registry.item(id);
    if (const auto* n = st.graph.node_for_item(id)) return *n;
    return std::nullopt;
  });
}

Lineage Engine::lineage(const NodeId& id) const {
  return doc_->read([&](const DocState& st) { return st.graph.lineage_of(id); });
}

RunSpec Engine::recreate(const NodeId& id) const {
  return doc_->read([&](const DocState& st) { return st.graph.recreate(id); });
}

std::optional<WorkflowGraph> Engine::compile_run_spec(const RunSpec& spec) const {
  return doc_->read([&](const DocState& st) -> std::optional<WorkflowGraph> {
    if (const auto* e = std::get_if<EaselSpec>(&spec)) return compiler_.compile(*e, lookup_in(st));
    if (const auto* q = std::get_if<QuickOpRequest>(&spec)) {
      auto plan = compiler_.plan_quick_op(*q, lookup_in(st));
      if (plan.graph) return plan.graph;
      if (plan.easel) return compiler_.compile(*plan.easel, lookup_in(st));
    }
    return std::nullopt;
  });
}

Easel Engine::recreate_easel(const NodeId& id, const PageId& page, Vec2 position, const std::string& key) {
  const auto spec = recreate(id);
  EaselDraft d;
  d.page = page;
  d.position = position;
  if (const auto* e = std::get_if<EaselSpec>(&spec)) {
    d.spec = *e;
  } else if (const auto* q = std::get_if<QuickOpRequest>(&spec)) {
    const auto plan = doc_->read([&](const DocState& st) { return compiler_.plan_quick_op(*q, lookup_in(st)); });
    if (!plan.easel) fail(ErrorCode::NotAGeneratedNode, "node " + id.str() + " was not produced by an easel");
    d.spec = *plan.easel;
  } else {
    fail(ErrorCode::NotAGeneratedNode, "node " + id.str() + " was not produced by an easel");
  }
  return save_easel(d, key);
}

std::vector<HistoryEntry> Engine::history(std::int64_t cursor) const {
  return doc_->read([&](const DocState& st) { return history_window(st.registry, st.graph, cursor); });
}

std::vector<TrailPoint> Engine::trail(std::optional<Timestamp> bucket) const {
  return doc_->read(
      [&](const DocState& st) { return trail_path(st.registry, st.interactions, bucket.value_or(cfg_.trail_bucket)); });
}

std::map<ItemId, double> Engine::heatmap() const {
  return doc_->read([](const DocState& st) { return activity_heatmap(st.registry); });
}

std::vector<TimelineEntry> Engine::timeline(double axis_width) const {
  return doc_->read([&](const DocState& st) { return timeline_layout(st.registry, st.graph, axis_width); });
}

json Engine::provenance_export() const {
  return doc_->read([](const DocState& st) { return st.graph.export_json(); });
}

// Organization.

Collection Engine::create_collection(const std::string& name, const std::vector<AssetId>& members,
                                     const std::vector<std::string>& tags, const std::string& key) {
  return mutate<Collection>(key, [&](WriteTx& tx) {
    Collection c;
    c.id = CollectionId(tx.alloc("c"));
    c.name = name;
    c.tags = tags;
    for (const auto& a : members) {
      tx.state().registry.asset(a);
      if (!c.contains(a)) c.members.push_back(a);
    }
    tx.emit("collection_saved", {{"collection", c}});
    return c;
  });
}

Collection Engine::add_to_collection(const CollectionId& id, const std::vector<AssetId>& members,
                                     const std::string& key) {
  return mutate<Collection>(key, [&](WriteTx& tx) {
    auto c = tx.state().collection(id);
    for (const auto& a : members) {
      tx.state().registry.asset(a);
      if (!c.contains(a)) c.members.push_back(a);
    }
    tx.emit("collection_saved", {{"collection", c}});
    return c;
  });
}

Collection Engine::collection(const CollectionId& id) const {
  return doc_->read([&](const DocState& st) { return st.collection(id); });
}

std::vector<Collection> Engine::collections() const {
  return doc_->read([](const DocState& st) {
    std::vector<Collection> out;
    for (const auto& [_, c] : st.collections) out.push_back(c);
    return out;
  });
}

CanvasItem Engine::pull_from_collection(const CollectionId& id, const AssetId& asset, const PageId& page,
                                        Vec2 position, std::optional<Vec2> size, const std::string& key) {
  return mutate<CanvasItem>(key, [&](WriteTx& tx) {
    const auto& c = tx.state().collection(id);
    if (!c.contains(asset)) fail(ErrorCode::NotAMember, "asset " + asset.str() + " is not in " + c.name);
    const auto& a = tx.state().registry.asset(asset);
    return place(tx, asset, page.empty() ? first_page(tx.state()) : page, position,
                 size.value_or(display_size(a.dims)));
  });
}

std::map<ItemId, Vec2> Engine::pack_grid(const std::vector<ItemId>& items, double gap, const std::string& key) {
  return mutate<std::map<ItemId, Vec2>>(key, [&](WriteTx& tx) {
    std::vector<PackInput> in;
    for (const auto& id : items) {
      const auto& it = tx.state().registry.item(id);
      in.push_back({id, it.position, it.size});
    }
    auto out = easel::pack_grid(in, gap);
    for (const auto& [id, pos] : out) {
      if (tx.state().registry.item(id).position != pos) tx.emit("item_updated", {{"item", id}, {"position", pos}});
    }
    return out;
  });
}

ExhibitEntry Engine::exhibit_add(const AssetId& asset, const std::string& caption, std::optional<std::size_t> index,
                                 const std::string& key) {
  return mutate<ExhibitEntry>(key, [&](WriteTx& tx) {
    tx.state().registry.asset(asset);
    const auto n = tx.state().exhibit.entries().size();
    const auto at = index.value_or(n);
    if (at > n) fail(ErrorCode::BadIndex, "exhibit index " + std::to_string(at) + " is past the end");
    ExhibitEntry e{EntryId(tx.alloc("x")), asset, caption};
    tx.emit("exhibit_inserted", {{"entry", e}, {"index", at}});
    return e;
  });
}

void Engine::exhibit_reorder(const EntryId& id, std::size_t to, const std::string& key) {
  mutate<bool>(key, [&](WriteTx& tx) {
    tx.state().exhibit.index_of(id);
    if (to >= tx.state().exhibit.entries().size()) {
      fail(ErrorCode::BadIndex, "exhibit index " + std::to_string(to) + " is out of range");
    }
    tx.emit("exhibit_reordered", {{"entry", id}, {"index", to}});
    return true;
  });
}

void Engine::exhibit_caption(const EntryId& id, const std::string& caption, const std::string& key) {
  mutate<bool>(key, [&](WriteTx& tx) {
    tx.state().exhibit.index_of(id);
    tx.emit("exhibit_captioned", {{"entry", id}, {"caption", caption}});
    return true;
  });
}

void Engine::exhibit_remove(const EntryId& id, const std::string& key) {
  mutate<bool>(key, [&](WriteTx& tx) {
    tx.state().exhibit.index_of(id);
    tx.emit("exhibit_removed", {{"entry", id}});
    return true;
  });
}

json Engine::exhibit_manifest() const {
  return doc_->read([](const DocState& st) { return st.exhibit.manifest(); });
}

void Engine::export_exhibit(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  auto manifest = exhibit_manifest();
  for (auto& e : manifest) {
    const auto a = asset(e.at("asset").get<AssetId>());
    char prefix[16];
    std::snprintf(prefix, sizeof(prefix), "%03zu_", e.at("index").get<std::size_t>());
    const std::string file = prefix + a.id.str() + extension_for(a);
    const auto bytes = blobs_->get(a.blob);
    std::ofstream out(dir / file, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorCode::Io, "cannot write " + (dir / file).string());
    e["file"] = file;
  }
  std::ofstream out(dir / "manifest.json");
  out << canonical_dump(json{{"entries", manifest}}) << "\n";
  if (!out) fail(ErrorCode::Io, "cannot write exhibit manifest");
}

std::vector<SearchHit> Engine::search(const std::string& query, std::size_t limit) const {
  std::lock_guard lk(search_mu_);
  doc_->read([&](const DocState& st) {
    if (st.seq == search_seq_) return 0;
    SearchIndex idx;
    for (const auto& [id, a] : st.registry.assets()) {
      std::string text = a.caption.value_or("");
      if (const auto* n = st.graph.original_of(id); n && n->params) text += search_text(*n->params);
      if (!text.empty()) idx.set(id, text);
    }
    search_ = std::move(idx);
    search_seq_ = st.seq;
    return 0;
  });
  return search_.query(query, limit);
}

}  // namespace easel
