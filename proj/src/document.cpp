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

#include "easel/document.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <sstream>

#include "easel/error.hpp"

namespace easel {

namespace fs = std::filesystem;

std::string_view to_string(RunKind k) {
  switch (k) {
    case RunKind::easel: return "easel";
    case RunKind::quick_op: return "quick_op";
    case RunKind::collage: return "collage";
    case RunKind::sketch: return "sketch";
  }
  return "easel";
}

namespace {

RunKind run_kind_from_string(std::string_view s) {
  for (auto k : {RunKind::easel, RunKind::quick_op, RunKind::collage, RunKind::sketch}) {
    if (to_string(k) == s) return k;
  }
  fail(ErrorCode::MalformedPayload, "unknown run kind '" + std::string(s) + "'");
}

}  // namespace

void to_json(json& j, const Page& p) { j = json{{"id", p.id}, {"name", p.name}, {"created_at", p.created_at}}; }

void from_json(const json& j, Page& p) {
  p.id = j.at("id").get<PageId>();
  p.name = j.value("name", std::string{});
  p.created_at = j.value("created_at", Timestamp{0});
}

void to_json(json& j, const Easel& e) {
  j = json{{"id", e.id},       {"page", e.page},         {"position", e.position},
           {"size", e.size},   {"spec", e.spec},         {"created_at", e.created_at},
           {"updated_at", e.updated_at}};
}

void from_json(const json& j, Easel& e) {
  e.id = j.at("id").get<EaselId>();
  e.page = j.at("page").get<PageId>();
  e.position = j.at("position").get<Vec2>();
  e.size = j.at("size").get<Vec2>();
  e.spec = j.at("spec").get<EaselSpec>();
  e.created_at = j.value("created_at", Timestamp{0});
  e.updated_at = j.value("updated_at", Timestamp{0});
}

void to_json(json& j, const RunRecord& r) {
  j = json{{"id", r.id},
           {"kind", to_string(r.kind)},
           {"spec", run_spec_to_json(r.spec)},
           {"easel", r.easel},
           {"page", r.page},
           {"anchor", r.anchor},
           {"graph", r.graph},
           {"job", r.job},
           {"status", r.status},
           {"error", r.error},
           {"outputs", r.outputs},
           {"created_at", r.created_at},
           {"finished_at", r.finished_at ? json(*r.finished_at) : json(nullptr)}};
}

void from_json(const json& j, RunRecord& r) {
  r.id = j.at("id").get<RunId>();
  r.kind = run_kind_from_string(j.at("kind").get<std::string>());
  r.spec = run_spec_from_json(j.at("spec"));
  r.easel = j.value("easel", json(nullptr)).get<EaselId>();
  r.page = j.value("page", json(nullptr)).get<PageId>();
  r.anchor = j.value("anchor", json{{"x", 0.0}, {"y", 0.0}}).get<Vec2>();
  r.graph = j.value("graph", std::string{});
  r.job = j.value("job", json(nullptr)).get<JobId>();
  r.status = j.value("status", std::string("queued"));
  r.error = j.value("error", std::string{});
  r.outputs = j.value("outputs", std::vector<AssetId>{});
  r.created_at = j.value("created_at", Timestamp{0});
  if (j.contains("finished_at") && !j["finished_at"].is_null()) r.finished_at = j["finished_at"].get<Timestamp>();
}

const Page& DocState::page(const PageId& id) const {
  auto it = pages.find(id);
  if (it == pages.end()) fail(ErrorCode::UnknownPage, "unknown page " + id.str());
  return it->second;
}

const Easel& DocState::easel(const EaselId& id) const {
  auto it = easels.find(id);
  if (it == easels.end()) fail(ErrorCode::UnknownEasel, "unknown easel " + id.str());
  return it->second;
}

const RunRecord& DocState::run(const RunId& id) const {
  auto it = runs.find(id);
  if (it == runs.end()) fail(ErrorCode::UnknownRun, "unknown run " + id.str());
  return it->second;
}

const Collection& DocState::collection(const CollectionId& id) const {
  auto it = collections.find(id);
  if (it == collections.end()) fail(ErrorCode::UnknownCollection, "unknown collection " + id.str());
  return it->second;
}

const RunRecord* DocState::run_for_job(const JobId& id) const {
  for (const auto& [_, r] : runs) {
    if (r.job == id) return &r;
  }
  return nullptr;
}

json DocState::to_json() const {
  json assets = json::array(), items = json::array(), easel_list = json::array(), run_list = json::array(),
       colls = json::array(), pages_j = json::array();
  for (const auto& [_, a] : registry.assets()) assets.push_back(a);
  for (const auto& [_, i] : registry.items()) items.push_back(i);
  for (const auto& [_, e] : easels) easel_list.push_back(e);
  for (const auto& [_, r] : runs) run_list.push_back(r);
  for (const auto& [_, c] : collections) colls.push_back(c);
  for (const auto& [_, p] : pages) pages_j.push_back(p);
  json idem = json::object();
  for (const auto& [k, v] : idempotency) idem[k] = v;
  return json{{"seq", seq},
              {"pages", pages_j},
              {"assets", assets},
              {"items", items},
              {"nodes", graph.export_json()["nodes"]},
              {"easels", easel_list},
              {"runs", run_list},
              {"collections", colls},
              {"exhibit", exhibit.entries()},
              {"interactions", interactions},
              {"idempotency", idem},
              {"counters", counters}};
}

DocState DocState::from_json(const json& j) {
  DocState s;
  s.seq = j.at("seq").get<std::uint64_t>();
  for (const auto& p : j.at("pages")) {
    auto page = p.get<Page>();
    s.pages.emplace(page.id, page);
  }
  for (const auto& a : j.at("assets")) s.registry.add_asset(a.get<Asset>());
  for (const auto& i : j.at("items")) s.registry.add_item(i.get<CanvasItem>());
  for (const auto& n : j.at("nodes")) s.graph.add_node(n.get<ProvenanceNode>());
  for (const auto& e : j.at("easels")) {
    auto easel = e.get<Easel>();
    s.easels.emplace(easel.id, easel);
  }
  for (const auto& r : j.at("runs")) {
    auto run = r.get<RunRecord>();
    s.runs.emplace(run.id, run);
  }
  for (const auto& c : j.at("collections")) {
    auto coll = c.get<Collection>();
    s.collections.emplace(coll.id, coll);
  }
  for (const auto& e : j.at("exhibit")) s.exhibit.add(e.get<ExhibitEntry>());
  s.interactions = j.at("interactions").get<std::vector<Interaction>>();
  for (const auto& [k, v] : j.at("idempotency").items()) s.idempotency[k] = v;
  s.counters = j.at("counters").get<std::map<std::string, std::uint64_t>>();
  return s;
}

void apply_record(DocState& s, const std::string& type, const json& d) {
  auto& reg = s.registry;
  if (type == "page_created") {
    auto p = d.at("page").get<Page>();
    s.pages[p.id] = p;
  } else if (type == "asset_added") {
    reg.add_asset(d.at("asset").get<Asset>());
  } else if (type == "metadata_set") {
    std::map<ControlKind, BlobHash> maps;
    for (const auto& [k, v] : d.at("control_maps").items()) maps[control_kind_from_string(k)] = v.get<BlobHash>();
    std::optional<std::string> caption;
    if (!d.at("caption").is_null()) caption = d.at("caption").get<std::string>();
    reg.set_metadata(d.at("asset").get<AssetId>(), caption, maps);
  } else if (type == "node_added") {
    s.graph.add_node(d.at("node").get<ProvenanceNode>());
  } else if (type == "node_attached") {
    s.graph.attach_item(d.at("node").get<NodeId>(), d.at("item").get<ItemId>());
  } else if (type == "item_added") {
    auto item = d.at("item").get<CanvasItem>();
    s.page(item.page);
    reg.add_item(item);
  } else if (type == "item_updated") {
    auto& item = reg.item_mut(d.at("item").get<ItemId>());
    if (d.contains("position")) item.position = d["position"].get<Vec2>();
    if (d.contains("size")) item.size = d["size"].get<Vec2>();
    if (d.contains("z_order")) item.z_order = d["z_order"].get<std::int64_t>();
    if (d.contains("emphasis")) item.emphasis = d["emphasis"].get<double>();
    if (d.contains("page")) item.page = s.page(d["page"].get<PageId>()).id;
  } else if (type == "item_touched") {
    auto ev = d.get<Interaction>();
    auto& item = reg.item_mut(ev.item);
    ++item.click_count;
    item.last_interaction_at = ev.at;
    s.interactions.push_back(ev);
  } else if (type == "node_deleted") {
    const auto id = d.at("node").get<NodeId>();
    const bool deleted = d.at("deleted").get<bool>();
    s.graph.set_deleted(id, deleted);
    const auto& node = s.graph.node(id);
    if (!node.item.empty()) reg.item_mut(node.item).hidden = deleted;
  } else if (type == "easel_saved") {
    auto e = d.at("easel").get<Easel>();
    s.page(e.page);
    s.easels[e.id] = e;
  } else if (type == "easel_deleted") {
    s.easel(d.at("easel").get<EaselId>());
    s.easels.erase(d.at("easel").get<EaselId>());
  } else if (type == "run_created") {
    auto r = d.at("run").get<RunRecord>();
    s.runs[r.id] = r;
  } else if (type == "run_updated") {
    const auto id = d.at("run").get<RunId>();
    s.run(id);
    auto& r = s.runs[id];
    if (d.contains("status")) r.status = d["status"].get<std::string>();
    if (d.contains("error")) r.error = d["error"].get<std::string>();
    if (d.contains("job")) r.job = d["job"].get<JobId>();
    if (d.contains("graph")) r.graph = d["graph"].get<std::string>();
    if (d.contains("outputs")) r.outputs = d["outputs"].get<std::vector<AssetId>>();
    if (d.contains("finished_at")) r.finished_at = d["finished_at"].get<Timestamp>();
  } else if (type == "collection_saved") {
    auto c = d.at("collection").get<Collection>();
    s.collections[c.id] = c;
  } else if (type == "exhibit_inserted") {
    s.exhibit.insert(d.at("entry").get<ExhibitEntry>(), d.at("index").get<std::size_t>());
  } else if (type == "exhibit_reordered") {
    s.exhibit.reorder(d.at("entry").get<EntryId>(), d.at("index").get<std::size_t>());
  } else if (type == "exhibit_captioned") {
    s.exhibit.caption(d.at("entry").get<EntryId>(), d.at("caption").get<std::string>());
  } else if (type == "exhibit_removed") {
    s.exhibit.remove(d.at("entry").get<EntryId>());
  } else if (type == "idempotency") {
    s.idempotency[d.at("key").get<std::string>()] = d.at("result");
  } else {
    fail(ErrorCode::CorruptJournal, "unknown record type '" + type + "'");
  }
}

std::string WriteTx::alloc(const std::string& prefix) {
  auto it = state_->counters.find(prefix);
  const std::uint64_t base = it == state_->counters.end() ? 0 : it->second;
  auto& mine = ids_[prefix];
  mine = std::max(mine, base) + 1;
  return make_id(prefix, mine);
}

void WriteTx::emit(const std::string& type, json data) {
  apply_record(*state_, type, data);
  records_.push_back(json{{"type", type}, {"data", std::move(data)}});
}

namespace {

void apply_line(DocState& s, const json& line) {
  for (const auto& r : line.at("records")) apply_record(s, r.at("type").get<std::string>(), r.at("data"));
  for (const auto& [k, v] : line.at("ids").items()) {
    auto& c = s.counters[k];
    c = std::max(c, v.get<std::uint64_t>());
  }
  s.seq = line.at("seq").get<std::uint64_t>();
}

fs::path journal_path(const fs::path& dir) { return dir / "journal.jsonl"; }
fs::path snapshot_path(const fs::path& dir) { return dir / "snapshot.json"; }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

Document::Document(DocumentOptions opts, std::shared_ptr<Clock> clock, std::shared_ptr<EventBus> bus)
    : opts_(std::move(opts)), clock_(std::move(clock)), bus_(bus ? std::move(bus) : std::make_shared<EventBus>()) {
  if (opts_.dir) fs::create_directories(*opts_.dir);
  std::unique_lock lk(mu_);
  reload_locked();
}

Document::~Document() = default;

void Document::check_alive() const {
  if (dead_) fail(ErrorCode::Io, "document stopped after a simulated crash");
}

void Document::reload_locked() {
  DocState fresh;
  std::vector<std::string> lines;
  std::optional<json> snap;
  std::size_t good_bytes = 0;
  discarded_ = 0;

  if (opts_.dir) {
    if (fs::exists(snapshot_path(*opts_.dir))) {
      try {
        snap = json::parse(slurp(snapshot_path(*opts_.dir)));
      } catch (const json::exception& e) {
        fail(ErrorCode::CorruptJournal, std::string("unreadable snapshot: ") + e.what());
      }
    }
    const auto text = fs::exists(journal_path(*opts_.dir)) ? slurp(journal_path(*opts_.dir)) : std::string{};
    std::size_t pos = 0;
    while (pos < text.size()) {
      const auto nl = text.find('\n', pos);
      if (nl == std::string::npos) {
        ++discarded_;  // torn tail: no terminator
        break;
      }
      lines.push_back(text.substr(pos, nl - pos));
      pos = nl + 1;
      good_bytes = pos;
    }
  } else {
    snap = memory_snapshot_;
    for (auto& l : memory_journal_) {
      if (l.empty() || l.back() != '\n') {
        ++discarded_;
        break;
      }
      lines.push_back(l.substr(0, l.size() - 1));
    }
  }

  if (snap) {
    try {
      fresh = DocState::from_json(*snap);
    } catch (const std::exception& e) {
      fail(ErrorCode::CorruptJournal, std::string("bad snapshot: ") + e.what());
    }
  }
  DocState base = fresh;
  std::vector<json> tail;
  std::size_t applied_lines = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    json line;
    try {
      line = json::parse(lines[i]);
    } catch (const json::exception&) {
      if (i + 1 == lines.size()) {
        ++discarded_;
        if (opts_.dir) good_bytes -= lines[i].size() + 1;
        lines.pop_back();
        break;
      }
      fail(ErrorCode::CorruptJournal, "journal line " + std::to_string(i + 1) + " is not valid JSON");
    }
    const auto seq = line.at("seq").get<std::uint64_t>();
    if (seq <= fresh.seq) continue;  // already in the snapshot
    if (seq != fresh.seq + 1) {
      fail(ErrorCode::CorruptJournal, "journal gap: expected seq " + std::to_string(fresh.seq + 1) + ", found " +
                                          std::to_string(seq));
    }
    try {
      apply_line(fresh, line);
    } catch (const Error& e) {
      fail(ErrorCode::CorruptJournal, "journal line " + std::to_string(i + 1) + ": " + e.what());
    }
    clock_.observe(line.value("at", Timestamp{0}));
    tail.push_back(std::move(line));
    ++applied_lines;
  }
  state_ = std::move(fresh);
  base_ = std::move(base);
  tail_ = std::move(tail);
  lines_since_snapshot_ = applied_lines;

  if (opts_.dir) {
    // Drop any torn tail so later appends start on a clean line.
    if (fs::exists(journal_path(*opts_.dir)) && fs::file_size(journal_path(*opts_.dir)) != good_bytes) {
      fs::resize_file(journal_path(*opts_.dir), good_bytes);
    }
  } else {
    memory_journal_.resize(lines.size());
  }
}

void Document::rollback_locked() {
  if (!base_) return reload_locked();
  DocState s = *base_;
  for (const auto& line : tail_) apply_line(s, line);
  state_ = std::move(s);
}

void Document::append_line(std::uint64_t seq, const std::string& line) {
  std::optional<std::size_t> crash_at;
  if (fault_) crash_at = fault_(seq, line);
  const std::size_t n = crash_at ? std::min(*crash_at, line.size()) : line.size();
  if (opts_.dir) {
    const auto path = journal_path(*opts_.dir);
    const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND, 0644);
    if (fd < 0) fail(ErrorCode::Io, "cannot open journal " + path.string());
    std::size_t off = 0;
    while (off < n) {
      const auto w = ::write(fd, line.data() + off, n - off);
      if (w < 0) {
        ::close(fd);
        fail(ErrorCode::Io, "journal write failed");
      }
      off += static_cast<std::size_t>(w);
    }
    if (opts_.fsync) ::fsync(fd);
    ::close(fd);
  } else {
    memory_journal_.push_back(line.substr(0, n));
  }
  if (crash_at) {
    dead_ = true;
    throw SimulatedCrash("simulated crash after " + std::to_string(n) + " of " + std::to_string(line.size()) +
                         " bytes");
  }
}

void Document::write_snapshot_locked() {
  const auto snap = state_.to_json();
  if (opts_.dir) {
    const auto tmp = *opts_.dir / "snapshot.json.tmp";
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      out << canonical_dump(snap);
      if (!out) fail(ErrorCode::Io, "snapshot write failed");
    }
    if (opts_.fsync) {
      const int fd = ::open(tmp.c_str(), O_RDONLY);
      if (fd >= 0) {
        ::fsync(fd);
        ::close(fd);
      }
    }
    fs::rename(tmp, snapshot_path(*opts_.dir));
    // The snapshot now covers every journaled line. A crash before this
    // truncation is harmless: replay skips lines at or below its seq.
    if (fs::exists(journal_path(*opts_.dir))) fs::resize_file(journal_path(*opts_.dir), 0);
  } else {
    memory_snapshot_ = snap;
    memory_journal_.clear();
  }
  base_ = state_;
  tail_.clear();
  ++snapshots_;
  lines_since_snapshot_ = 0;
}

void Document::snapshot_now() {
  std::unique_lock lk(mu_);
  check_alive();
  write_snapshot_locked();
}

void Document::commit(WriteTx& tx) {
  if (tx.empty()) return;
  const auto seq = state_.seq + 1;
  json ids = json::object();
  for (const auto& [k, v] : tx.ids_) ids[k] = v;
  const json line{{"seq", seq}, {"at", tx.now()}, {"records", tx.records_}, {"ids", ids}};
  append_line(seq, canonical_dump(line) + "\n");
  tail_.push_back(line);
  for (const auto& [k, v] : tx.ids_) {
    auto& c = state_.counters[k];
    c = std::max(c, v);
  }
  state_.seq = seq;
  for (const auto& r : tx.records_) bus_->publish({seq, r["type"].get<std::string>(), r["data"], tx.now()});
  if (opts_.snapshot_every > 0 && ++lines_since_snapshot_ >= opts_.snapshot_every) write_snapshot_locked();
}

void Document::run_tx(WriteTx& tx, const std::function<void()>& body) {
  try {
    body();
  } catch (...) {
    // Records already applied in memory were never journaled; rebuild.
    if (!tx.empty()) rollback_locked();
    throw;
  }
  try {
    commit(tx);
  } catch (const SimulatedCrash&) {
    throw;
  } catch (...) {
    reload_locked();
    throw;
  }
}

json Document::write_idempotent(const std::string& key, const std::function<json(WriteTx&)>& f) {
  return write([&](WriteTx& tx) -> json {
    if (!key.empty()) {
      auto it = tx.state().idempotency.find(key);
      if (it != tx.state().idempotency.end()) return it->second;
    }
    json result = f(tx);
    if (!key.empty()) tx.emit("idempotency", {{"key", key}, {"result", result}});
    return result;
  });
}

void Document::set_fault_hook(FaultHook h) {
  std::unique_lock lk(mu_);
  fault_ = std::move(h);
}

json Document::state_json() const {
  std::shared_lock lk(mu_);
  return state_.to_json();
}

std::uint64_t Document::seq() const {
  std::shared_lock lk(mu_);
  return state_.seq;
}

}  // namespace easel
