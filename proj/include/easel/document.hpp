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
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "easel/asset_store.hpp"
#include "easel/clock.hpp"
#include "easel/easel_spec.hpp"
#include "easel/event_bus.hpp"
#include "easel/organization.hpp"
#include "easel/projections.hpp"
#include "easel/provenance.hpp"

namespace easel {

struct Page {
  PageId id;
  std::string name;
  Timestamp created_at = 0;
  friend bool operator==(const Page&, const Page&) = default;
};

// A placed easel widget and the spec it currently holds.
struct Easel {
  EaselId id;
  PageId page;
  Vec2 position;
  Vec2 size;
  EaselSpec spec;
  Timestamp created_at = 0;
  Timestamp updated_at = 0;
  friend bool operator==(const Easel&, const Easel&) = default;
};

enum class RunKind { easel, quick_op, collage, sketch };
std::string_view to_string(RunKind k);

struct RunRecord {
  RunId id;
  RunKind kind = RunKind::easel;
  RunSpec spec;
  EaselId easel;
  PageId page;
  Vec2 anchor;            // where outputs get placed
  std::string graph;      // canonical bytes as submitted; empty for local runs
  JobId job;
  std::string status = "queued";
  std::string error;
  std::vector<AssetId> outputs;
  Timestamp created_at = 0;
  std::optional<Timestamp> finished_at;
  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

void to_json(json& j, const Page& p);
void from_json(const json& j, Page& p);
void to_json(json& j, const Easel& e);
void from_json(const json& j, Easel& e);
void to_json(json& j, const RunRecord& r);
void from_json(const json& j, RunRecord& r);

// Everything the journal reconstructs.
struct DocState {
  std::uint64_t seq = 0;
  std::map<PageId, Page> pages;
  AssetRegistry registry;
  ProvenanceGraph graph;
  std::map<EaselId, Easel> easels;
  std::map<RunId, RunRecord> runs;
  std::map<CollectionId, Collection> collections;
  Exhibit exhibit;
  std::vector<Interaction> interactions;
  std::map<std::string, json> idempotency;
  std::map<std::string, std::uint64_t> counters;

  const Page& page(const PageId& id) const;             // UnknownPage
  const Easel& easel(const EaselId& id) const;          // UnknownEasel
  const RunRecord& run(const RunId& id) const;          // UnknownRun
  const Collection& collection(const CollectionId& id) const;  // UnknownCollection
  const RunRecord* run_for_job(const JobId& id) const;

  json to_json() const;
  static DocState from_json(const json& j);
};

// Applies one journal record. Pure function of (state, record); replay and
// live writes go through the same code.
void apply_record(DocState& s, const std::string& type, const json& data);

// Thrown by the crash-injection hook; simulates the process dying mid-write.
struct SimulatedCrash : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DocumentOptions {
  std::optional<std::filesystem::path> dir;  // none: memory only
  std::size_t snapshot_every = 256;          // journal lines between snapshots; 0 disables
  bool fsync = false;
};

class Document;

// Handle for one serialized mutation. Records are applied as they are emitted
// and written to the journal as a single line when the mutation commits.
class WriteTx {
 public:
  const DocState& state() const { return *state_; }
  Timestamp now() const { return now_; }
  std::string alloc(const std::string& prefix);
  void emit(const std::string& type, json data);
  bool empty() const { return records_.empty(); }

 private:
  friend class Document;
  WriteTx(DocState* s, Timestamp now) : state_(s), now_(now) {}
  DocState* state_;
  Timestamp now_;
  json records_ = json::array();
  std::map<std::string, std::uint64_t> ids_;
};

class Document {
 public:
  // Loads the latest snapshot and replays the journal after it; a torn final
  // line is discarded. Throws CorruptJournal for damage anywhere else.
  Document(DocumentOptions opts, std::shared_ptr<Clock> clock, std::shared_ptr<EventBus> bus = nullptr);
  ~Document();

  template <class F>
  auto read(F&& f) const {
    std::shared_lock lk(mu_);
    return f(static_cast<const DocState&>(state_));
  }

  // Runs f(WriteTx&) under the writer lock and commits what it emitted.
  template <class F>
  auto write(F&& f) {
    std::unique_lock lk(mu_);
    check_alive();
    WriteTx tx(&state_, clock_.next());
    if constexpr (std::is_void_v<decltype(f(tx))>) {
      run_tx(tx, [&] { f(tx); });
    } else {
      decltype(f(tx)) result{};
      run_tx(tx, [&] { result = f(tx); });
      return result;
    }
  }

  // Like write(), but a repeated key returns the stored result instead of
  // running f again. f must return json.
  json write_idempotent(const std::string& key, const std::function<json(WriteTx&)>& f);

  // Called with (seq, line) before each journal append. Returning a byte
  // count writes only that prefix and throws SimulatedCrash.
  using FaultHook = std::function<std::optional<std::size_t>(std::uint64_t, const std::string&)>;
  void set_fault_hook(FaultHook h);

  json state_json() const;
  std::uint64_t seq() const;
  std::shared_ptr<EventBus> bus() const { return bus_; }
  std::size_t snapshots_written() const { return snapshots_; }
  void snapshot_now();
  // Lines discarded as a torn tail during load.
  std::size_t discarded_on_load() const { return discarded_; }

 private:
  void run_tx(WriteTx& tx, const std::function<void()>& body);
  void commit(WriteTx& tx);
  void reload_locked();
  void rollback_locked();
  void append_line(std::uint64_t seq, const std::string& line);
  void write_snapshot_locked();
  void check_alive() const;

  DocumentOptions opts_;
  MonotonicClock clock_;
  std::shared_ptr<EventBus> bus_;
  mutable std::shared_mutex mu_;
  DocState state_;
  std::ofstream journal_;
  std::vector<std::string> memory_journal_;  // memory-only mode
  std::optional<json> memory_snapshot_;
  // State as of the last snapshot plus the lines committed since; aborted
  // transactions rebuild from these instead of re-reading storage.
  std::optional<DocState> base_;
  std::vector<json> tail_;
  std::uint64_t lines_since_snapshot_ = 0;
  std::size_t snapshots_ = 0;
  std::size_t discarded_ = 0;
  FaultHook fault_;
  bool dead_ = false;
};

}  // namespace easel
