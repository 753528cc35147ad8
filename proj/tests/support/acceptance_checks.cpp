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

#include "support/acceptance_checks.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "easel/compiler.hpp"
#include "easel/document.hpp"
#include "easel/engine.hpp"
#include "easel/error.hpp"
#include "easel/projections.hpp"
#include "support/doc_fuzz.hpp"
#include "support/golden_cases.hpp"
#include "support/graph_query.hpp"
#include "support/scenario.hpp"
#include "support/spec_gen.hpp"
#include "support/test_support.hpp"
#include "support/wire_harness.hpp"

namespace easel::test {
namespace {

// Collects failures for one criterion and times it.
class Run {
 public:
  Run(std::string name, double budget) : start_(std::chrono::steady_clock::now()) {
    r_.name = std::move(name);
    r_.budget = budget;
  }

  void expect(bool cond, const std::string& what) {
    if (cond) return;
    ++failures_;
    if (failures_ <= 5) notes_.push_back(what);
  }
  void note(const std::string& s) { info_.push_back(s); }

  CriterionResult finish() {
    r_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    const bool in_time = r_.budget <= 0 || r_.seconds < r_.budget;
    r_.ok = failures_ == 0 && in_time;
    std::ostringstream d;
    for (std::size_t i = 0; i < info_.size(); ++i) d << (i ? "; " : "") << info_[i];
    if (failures_) {
      d << (info_.empty() ? "" : "; ") << failures_ << " failure(s): ";
      for (std::size_t i = 0; i < notes_.size(); ++i) d << (i ? " | " : "") << notes_[i];
    }
    if (!in_time) d << (d.tellp() > 0 ? "; " : "") << "over time budget";
    r_.detail = d.str();
    return r_;
  }

  template <class F>
  void guarded(const std::string& what, F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      expect(false, what + ": " + e.what());
    }
  }

 private:
  CriterionResult r_;
  std::chrono::steady_clock::time_point start_;
  int failures_ = 0;
  std::vector<std::string> notes_;
  std::vector<std::string> info_;
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

}  // namespace

CriterionResult check_slider_maps(int samples, std::uint64_t seed) {
  Run run("slider maps", 1.0);
  run.guarded("map_details", [&] {
    const double d0 = map_details(0.0), d1 = map_details(1.0);
    run.expect(d0 == 0.0 && !std::signbit(d0), "map_details(0) = " + num(d0));
    run.expect(d1 == -0.05, "map_details(1) = " + num(d1));
  });
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> ps{0.0, 1.0};
  while (static_cast<int>(ps.size()) < samples) ps.push_back(unit(rng));
  int exact = 0;
  run.guarded("map_preserve", [&] {
    for (double p : ps) {
      const double want = 1.0 - p;
      const double got = map_preserve(p);
      run.expect(got == want, "map_preserve(" + num(p) + ") = " + num(got));
      exact += got == want;
    }
  });
  run.note(std::to_string(exact) + "/" + std::to_string(ps.size()) + " preserve values exact");
  return run.finish();
}

CriterionResult check_structure_ends() {
  Run run("structure end-percentages", 0);
  const std::pair<ControlKind, double> expected[] = {
      {ControlKind::pose, 0.9}, {ControlKind::depth, 0.7}, {ControlKind::lineart, 0.4}};
  AssetTable table;
  table.add("a-structure", AssetKind::image, 768, 768);
  const Compiler compiler(shipped_templates());
  for (const auto& [kind, want] : expected) {
    const std::string name(to_string(kind));
    run.guarded(name, [&] {
      const double got = map_structure_end(kind);
      run.expect(got == want, name + " maps to " + num(got));
      // And the value reaches the compiled graph on every template that
      // carries a structure slot.
      for (auto [k, m] : {std::pair{EaselKind::paint, BackendModel::flux}, std::pair{EaselKind::paint, BackendModel::sdxl},
                          std::pair{EaselKind::trace, BackendModel::flux}, std::pair{EaselKind::trace, BackendModel::wan22}}) {
        EaselSpec s;
        s.kind = k;
        s.backend_model = m;
        if (k == EaselKind::paint) s.prompt = "a tower";
        if (k == EaselKind::trace) {
          s.start_image = AssetId("a-structure");
          s.trace_source_prompt = "a tower";
          s.trace_target_prompt = "a lighthouse";
        }
        s.structure = StructureSlot{AssetId("a-structure"), kind, 0.8};
        const auto g = compiler.compile(s, table.lookup());
        const auto cn = nodes_of(g, "ControlNetApplyAdvanced");
        run.expect(cn.size() == 1, name + ": one ControlNet apply node on " + std::string(to_string(k)) + "/" +
                                       std::string(to_string(m)));
        if (cn.size() == 1) {
          const double in_graph = input_number(g, cn[0], "end_percent");
          run.expect(in_graph == want, name + ": graph end_percent " + num(in_graph));
        }
      }
    });
  }
  return run.finish();
}

CriterionResult check_golden_graphs() {
  Run run("compiler golden files", 5.0);
  const auto table = golden_assets();
  const Compiler compiler(shipped_templates());
  std::set<std::string> names;
  for (const auto& c : golden_cases()) {
    names.insert(c.name);
    run.guarded(c.name, [&] {
      const auto path = fixture("golden/" + c.name + ".json");
      const auto expected = canonical_dump(json::parse(read_text(path)));
      const auto got = c.build(compiler, table.lookup()).serialize();
      run.expect(got == expected, c.name + " differs from its golden file");
    });
  }
  // Coverage: each easel kind on each backend variant, plus every quick op
  // that has a workflow (palette is computed locally and has none).
  for (const char* n : {"draw_flux", "draw_sdxl", "draw_wan22", "paint_flux", "paint_sdxl", "paint_wan22",
                        "paint_flux_uso", "trace_flux", "trace_wan22", "trace_flux_uso", "modify_flux",
                        "animate_wan22"}) {
    run.expect(names.count(n) == 1, std::string("no golden case ") + n);
  }
  for (QuickOpKind k : {QuickOpKind::quick_sketch, QuickOpKind::remove_background, QuickOpKind::extract_element,
                        QuickOpKind::stencil, QuickOpKind::revision, QuickOpKind::upscale, QuickOpKind::blend,
                        QuickOpKind::extend, QuickOpKind::view, QuickOpKind::quick_animate, QuickOpKind::sculpt}) {
    run.expect(names.count("quick_" + std::string(to_string(k))) == 1, "no golden quick op " + std::string(to_string(k)));
  }
  run.guarded("palette", [&] {
    const auto plan = compiler.plan_quick_op({QuickOpKind::palette, AssetId("a-000001"), "", 0}, table.lookup());
    run.expect(!plan.graph, "palette should run locally");
  });

  // Constants read straight from the checked-in files.
  auto read_graph = [&](const std::string& name) { return WorkflowGraph::parse(read_text(fixture("golden/" + name + ".json"))); };
  run.guarded("draw_flux constants", [&] {
    const auto g = read_graph("draw_flux");
    run.expect(input_number(g, nodes_of(g, "BasicScheduler").at(0), "steps") == 8, "draw_flux steps != 8");
    run.expect(input_number(g, nodes_of(g, "NAGCFGGuider").at(0), "nag_scale") == 9.0, "draw_flux NAG != 9.0");
  });
  run.guarded("draw_wan22 constants", [&] {
    const auto g = read_graph("draw_wan22");
    run.expect(input_number(g, nodes_of(g, "BasicScheduler").at(0), "steps") == 20, "draw_wan22 steps != 20");
    run.expect(input_number(g, nodes_of(g, "NAGCFGGuider").at(0), "nag_scale") == 11.0, "draw_wan22 NAG != 11.0");
  });
  run.note(std::to_string(names.size()) + " golden graphs");
  return run.finish();
}

CriterionResult check_switch_strategy(int specs, std::uint64_t seed) {
  Run run("switch strategy", 0);
  AssetTable table;
  table.add("a-land", AssetKind::image, 1536, 1024);
  table.add("a-port", AssetKind::image, 768, 1152, MediaFormat::jpeg);
  table.add("a-square", AssetKind::image, 512, 512, MediaFormat::webp);
  auto& mapped = table.add("a-mapped", AssetKind::image, 1024, 1024);
  for (ControlKind k : kAllControlKinds) mapped.control_maps[k] = "map-" + std::string(to_string(k));
  table.add("a-mask", AssetKind::sketch, 512, 512);
  const SpecPool pool{{AssetId("a-land"), AssetId("a-port"), AssetId("a-square"), AssetId("a-mapped")},
                      {AssetId("a-mask")}};
  const Compiler compiler(shipped_templates());
  std::mt19937_64 rng(seed);

  int accepted = 0, rejected = 0, pairs = 0, switched = 0;
  std::map<std::string, int> per_slot;
  while (accepted < specs) {
    const auto spec = random_spec(rng, pool);
    try {
      compiler.compile(spec, table.lookup());
    } catch (const Error&) {
      ++rejected;
      if (rejected > specs * 10) {
        run.expect(false, "generator produces too many invalid specs");
        break;
      }
      continue;
    }
    ++accepted;
    for (const auto& t : slot_toggles(spec, rng, pool)) {
      run.guarded(t.slot, [&] {
        const auto with = compiler.compile(t.with, table.lookup());
        const auto without = compiler.compile(t.without, table.lookup());
        const auto diff = structural_difference(with, without);
        run.expect(diff.empty(), t.slot + " on " + std::string(to_string(spec.kind)) + "/" +
                                     std::string(to_string(spec.backend_model)) + ": " + diff);
        const auto lits = literal_differences(with, without);
        const bool flips = std::any_of(lits.begin(), lits.end(), [](const std::string& s) { return s[0] == '!'; });
        if (t.with == t.without) return;  // slot already in the wanted state both ways
        run.expect(!lits.empty(), t.slot + ": toggling changed nothing");
        if (t.uses_switch) run.expect(flips, t.slot + ": no switch integer changed");
        ++pairs;
        switched += flips;
        ++per_slot[t.slot];
      });
    }
  }
  run.expect(accepted >= specs, "only " + std::to_string(accepted) + " valid specs");
  std::string slots;
  for (const auto& [s, n] : per_slot) slots += (slots.empty() ? "" : ",") + s + "=" + std::to_string(n);
  run.note(std::to_string(accepted) + " specs, " + std::to_string(pairs) + " present/absent pairs (" +
           std::to_string(switched) + " via switch), " + std::to_string(rejected) + " invalid draws skipped");
  run.note("slots " + slots);
  return run.finish();
}

CriterionResult check_recreate_round_trip(int runs, std::uint64_t seed) {
  Run run("recreate round-trip", 30.0);
  auto cfg = memory_config();
  cfg.mock_ticks = 1;
  cfg.mock_tick_ms = 0;
  Engine engine(cfg);
  SpecPool pool;
  const std::pair<int, int> sizes[] = {{640, 448}, {448, 640}, {512, 512}, {800, 600}, {384, 704}};
  for (std::size_t i = 0; i < std::size(sizes); ++i) {
    const auto c = static_cast<std::uint8_t>(40 * i + 20);
    const auto a = engine.ingest(solid_png(sizes[i].first, sizes[i].second, {c, 90, 200, 255}), AssetKind::image);
    engine.place_item(a.id, {}, {double(600 * i), 0}, {200, 200});
    pool.images.push_back(a.id);
  }
  const auto mask = engine.ingest(solid_png(256, 256, {255, 255, 255, 255}), AssetKind::sketch);
  pool.masks.push_back(mask.id);
  engine.quiesce();

  std::mt19937_64 rng(seed);
  int done = 0, rejected = 0, compared = 0, via_easel = 0;
  while (done < runs) {
    const auto spec = random_spec(rng, pool);
    const bool use_easel = rng() % 2 == 0;
    RunRecord r;
    EaselId easel_id;
    try {
      if (use_easel) {
        EaselDraft d;
        d.position = {0, 1000};
        d.spec = spec;
        easel_id = engine.save_easel(d).id;
        r = engine.generate_easel(easel_id);
      } else {
        r = engine.generate(spec, {});
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::ValidationError && e.code() != ErrorCode::WrongAssetKind) {
        run.expect(false, std::string("generate: ") + e.what());
      }
      if (++rejected > runs * 10) break;
      continue;
    }
    r = engine.wait_run(r.id, std::chrono::seconds(10));
    run.expect(r.status == "done", r.id.str() + " ended " + r.status + " " + r.error);
    if (r.status != "done") {
      ++done;
      continue;
    }
    if (use_easel) {
      // Later edits to the easel must not leak into the frozen parameters.
      auto e = engine.easel(easel_id);
      EaselDraft d{e.id, e.page, e.position, e.size, e.spec};
      d.spec.prompt += " (edited)";
      d.spec.seed ^= 0x5a5a;
      engine.save_easel(d);
      ++via_easel;
    }
    for (const auto& out : r.outputs) {
      run.guarded("recreate " + out.str(), [&] {
        const auto node = engine.document().read([&](const DocState& st) { return st.graph.original_of(out)->id; });
        const auto again = engine.compile_run_spec(engine.recreate(node));
        run.expect(again && again->serialize() == r.graph, "recreated graph differs for run " + r.id.str());
        const auto recreated = engine.recreate_easel(node, {}, {0, 2000});
        run.expect(engine.compile_easel(recreated.id).serialize() == r.graph,
                   "recreated easel compiles differently for run " + r.id.str());
        engine.delete_easel(recreated.id);
        ++compared;
      });
    }
    ++done;
  }
  run.expect(done >= runs, "only " + std::to_string(done) + " runs");
  run.note(std::to_string(done) + " runs (" + std::to_string(via_easel) + " through saved easels, later edited), " +
           std::to_string(compared) + " outputs recreated, " + std::to_string(rejected) + " invalid draws skipped");
  return run.finish();
}

namespace {

// Ancestor and descendant closures by plain BFS over parent lists.
struct BfsOracle {
  std::map<NodeId, std::vector<NodeId>> parents, children;

  explicit BfsOracle(const json& exported) {
    for (const auto& n : exported.at("nodes")) {
      parents[n.at("id").get<NodeId>()];
      children[n.at("id").get<NodeId>()];
    }
    for (const auto& e : exported.at("edges")) {
      const auto c = e.at("child").get<NodeId>(), p = e.at("parent").get<NodeId>();
      parents[c].push_back(p);
      children[p].push_back(c);
    }
  }

  static std::set<NodeId> closure(const std::map<NodeId, std::vector<NodeId>>& adj, const NodeId& start) {
    std::set<NodeId> seen;
    std::deque<NodeId> q{start};
    while (!q.empty()) {
      const auto cur = q.front();
      q.pop_front();
      for (const auto& n : adj.at(cur)) {
        if (seen.insert(n).second) q.push_back(n);
      }
    }
    return seen;
  }

  // Kahn's algorithm; true when every node can be ordered.
  bool acyclic() const {
    std::map<NodeId, std::size_t> indeg;
    for (const auto& [n, ps] : parents) indeg[n] = ps.size();
    std::deque<NodeId> q;
    for (const auto& [n, d] : indeg) {
      if (d == 0) q.push_back(n);
    }
    std::size_t seen = 0;
    while (!q.empty()) {
      const auto cur = q.front();
      q.pop_front();
      ++seen;
      for (const auto& c : children.at(cur)) {
        if (--indeg[c] == 0) q.push_back(c);
      }
    }
    return seen == parents.size();
  }
};

std::set<NodeId> as_set(const std::vector<NodeId>& v) { return {v.begin(), v.end()}; }

bool ordered_by_creation(const ProvenanceGraph& g, const std::vector<NodeId>& v) {
  for (std::size_t i = 1; i < v.size(); ++i) {
    const auto& a = *g.find(v[i - 1]);
    const auto& b = *g.find(v[i]);
    if (std::tie(b.created_at, b.id) < std::tie(a.created_at, a.id)) return false;
  }
  return true;
}

}  // namespace

CriterionResult check_provenance_invariants(int operations, int fixtures, std::uint64_t seed) {
  Run run("provenance invariants", 60.0);

  // Fuzzed document history.
  Document doc(DocumentOptions{}, std::make_shared<ManualClock>());
  std::mt19937_64 rng(seed);
  int applied = 0;
  for (int i = 0; i < operations; ++i) {
    run.guarded("mutation " + std::to_string(i), [&] {
      random_mutation(doc, rng, true);
      ++applied;
    });
  }
  doc.read([&](const DocState& st) {
    const auto& g = st.graph;
    const BfsOracle oracle(g.export_json());
    run.expect(oracle.acyclic(), "fuzzed graph has a cycle");
    run.expect(g.is_acyclic(), "graph reports a cycle");

    std::size_t deleted = 0, copies = 0, checked = 0;
    std::vector<NodeId> sample;
    for (const auto& [id, n] : g.nodes()) {
      if (n.kind == NodeKind::copy) {
        ++copies;
        const auto* orig = g.find(n.copy_of);
        run.expect(orig != nullptr, id.str() + ": copy_of missing");
        if (orig) run.expect(n.params == orig->params, id.str() + ": copy params differ from original");
        run.expect(n.parents.size() == 1 && n.parents[0].parent == n.copy_of && n.parents[0].role == EdgeRole::source,
                   id.str() + ": copy must point back at its original");
      }
      if (n.deleted) {
        ++deleted;
        sample.push_back(id);
      } else if (rng() % 16 == 0) {
        sample.push_back(id);
      }
    }
    for (const auto& id : sample) {
      const auto lin = g.lineage_of(id);
      run.expect(as_set(lin.ancestors) == BfsOracle::closure(oracle.parents, id), id.str() + ": ancestors differ");
      run.expect(as_set(lin.descendants) == BfsOracle::closure(oracle.children, id), id.str() + ": descendants differ");
      run.expect(ordered_by_creation(g, lin.ancestors) && ordered_by_creation(g, lin.descendants),
                 id.str() + ": lineage order");
      // A deleted node stays visible from its neighbours.
      if (g.find(id)->deleted) {
        for (const auto& p : oracle.parents.at(id)) {
          const auto d = g.lineage_of(p).descendants;
          run.expect(std::find(d.begin(), d.end(), id) != d.end(), id.str() + " missing from parent's lineage");
        }
      }
      ++checked;
    }
    run.expect(deleted > 0 && copies > 0, "fuzz produced no deleted or no copy nodes");
    run.note(std::to_string(applied) + " operations, " + std::to_string(g.nodes().size()) + " nodes, " +
             std::to_string(copies) + " copies, " + std::to_string(deleted) + " deleted, " + std::to_string(checked) +
             " lineages checked");
  });

  // 50-node fixtures: random DAGs with shuffled timestamps, every node's
  // closure against BFS.
  for (int f = 0; f < fixtures; ++f) {
    std::mt19937_64 frng(seed * 1000 + f);
    ProvenanceGraph g;
    std::vector<Timestamp> times(50);
    for (int i = 0; i < 50; ++i) times[i] = 1000 + i;
    std::shuffle(times.begin(), times.end(), frng);
    for (int i = 0; i < 50; ++i) {
      ProvenanceNode n;
      n.id = NodeId("n" + std::to_string(100 + i));
      n.asset = AssetId("a" + std::to_string(i));
      n.created_at = times[i];
      n.deleted = frng() % 5 == 0;
      if (i > 0) {
        std::set<int> ps;
        for (int k = 0, m = static_cast<int>(frng() % 4); k < m; ++k) ps.insert(static_cast<int>(frng() % i));
        for (int p : ps) n.parents.push_back({NodeId("n" + std::to_string(100 + p)), EdgeRole::source});
      }
      n.kind = n.parents.empty() ? NodeKind::original : NodeKind::generated;
      g.add_node(n);
    }
    const BfsOracle oracle(g.export_json());
    for (const auto& [id, _] : g.nodes()) {
      const auto lin = g.lineage_of(id);
      run.expect(as_set(lin.ancestors) == BfsOracle::closure(oracle.parents, id),
                 "fixture " + std::to_string(f) + " " + id.str() + ": ancestors");
      run.expect(as_set(lin.descendants) == BfsOracle::closure(oracle.children, id),
                 "fixture " + std::to_string(f) + " " + id.str() + ": descendants");
    }
  }
  run.note(std::to_string(fixtures) + " fifty-node fixtures");
  return run.finish();
}

CriterionResult check_history_window() {
  Run run("history window", 0);
  AssetRegistry reg;
  ProvenanceGraph graph;
  // Twelve items inserted out of creation order, some sharing a timestamp.
  const Timestamp created[12] = {50, 10, 90, 30, 30, 70, 20, 110, 60, 100, 80, 40};
  std::vector<std::pair<Timestamp, ItemId>> oracle;
  for (int i = 0; i < 12; ++i) {
    CanvasItem it;
    it.id = ItemId("i-" + std::to_string(200 + i));
    it.page = PageId("p-1");
    it.asset = AssetId("a-" + std::to_string(i));
    it.position = {double(i * 40), double(i % 3) * 50};
    it.size = {30, 30};
    it.created_at = created[i];
    reg.add_item(it);
    oracle.emplace_back(created[i], it.id);
  }
  std::sort(oracle.begin(), oracle.end());
  for (int c = 0; c < 12; ++c) {
    run.guarded("cursor " + std::to_string(c), [&] {
      const auto w = history_window(reg, graph, c);
      const std::size_t want = std::min<std::size_t>(5, 12 - c);
      run.expect(w.size() == want, "cursor " + std::to_string(c) + ": " + std::to_string(w.size()) + " items");
      for (std::size_t k = 0; k < std::min(w.size(), want); ++k) {
        run.expect(w[k].item == oracle[c + k].second, "cursor " + std::to_string(c) + " position " + std::to_string(k));
        run.expect(w[k].created_at == oracle[c + k].first, "cursor " + std::to_string(c) + " timestamp order");
      }
    });
  }
  for (int bad : {-1, 12}) {
    bool threw = false;
    try {
      history_window(reg, graph, bad);
    } catch (const Error& e) {
      threw = e.code() == ErrorCode::CursorOutOfRange;
    }
    run.expect(threw, "cursor " + std::to_string(bad) + " accepted");
  }
  return run.finish();
}

CriterionResult check_heatmap_and_trails(std::uint64_t seed) {
  Run run("heatmap and trails", 0);
  constexpr double kTol = 1e-12;

  // Hand-computed fixtures: weight = clicks / max clicks.
  struct Fixture {
    std::vector<std::uint64_t> clicks;
    std::vector<double> weights;
  };
  const Fixture fixtures[] = {
      {{0, 1, 2, 3, 5, 7, 10}, {0.0, 0.1, 0.2, 0.3, 0.5, 0.7, 1.0}},
      {{3, 9, 6}, {0.3333333333333333, 1.0, 0.6666666666666666}},
      {{4}, {1.0}},
      {{0, 0}, {0.0, 0.0}},
      {{12, 7, 1, 12}, {1.0, 0.5833333333333334, 0.08333333333333333, 1.0}},
  };
  for (std::size_t f = 0; f < std::size(fixtures); ++f) {
    AssetRegistry reg;
    for (std::size_t i = 0; i < fixtures[f].clicks.size(); ++i) {
      CanvasItem it;
      it.id = ItemId("h" + std::to_string(i));
      it.page = PageId("p");
      it.asset = AssetId("a");
      it.size = {1, 1};
      it.click_count = fixtures[f].clicks[i];
      reg.add_item(it);
    }
    // A hidden item with more clicks must not change the normalization.
    CanvasItem hidden;
    hidden.id = ItemId("hz");
    hidden.page = PageId("p");
    hidden.asset = AssetId("a");
    hidden.size = {1, 1};
    hidden.click_count = 1000;
    hidden.hidden = true;
    reg.add_item(hidden);
    const auto h = activity_heatmap(reg);
    run.expect(h.size() == fixtures[f].clicks.size(), "fixture " + std::to_string(f) + ": weight count");
    for (std::size_t i = 0; i < fixtures[f].weights.size(); ++i) {
      const auto it = h.find(ItemId("h" + std::to_string(i)));
      const double got = it == h.end() ? -1 : it->second;
      run.expect(std::abs(got - fixtures[f].weights[i]) <= kTol,
                 "fixture " + std::to_string(f) + " item " + std::to_string(i) + ": " + num(got));
    }
  }

  // Trails over a 100-event log against a group-by-bucket oracle.
  std::mt19937_64 rng(seed);
  AssetRegistry reg;
  for (int i = 0; i < 10; ++i) {
    CanvasItem it;
    it.id = ItemId("t" + std::to_string(i));
    it.page = PageId("p");
    it.asset = AssetId("a");
    it.position = {double(rng() % 2000) - 1000, double(rng() % 2000) - 1000};
    it.size = {double(20 + rng() % 300), double(20 + rng() % 300)};
    reg.add_item(it);
  }
  std::vector<Interaction> log;
  Timestamp t = 1'700'000'000'000'000;
  for (int i = 0; i < 100; ++i) {
    t += static_cast<Timestamp>(rng() % 30'000'000);
    log.push_back({t, ItemId("t" + std::to_string(rng() % 10))});
  }
  std::shuffle(log.begin(), log.end(), rng);
  for (Timestamp bucket : {Timestamp(60'000'000), Timestamp(17'000'000), Timestamp(1'000'000'000)}) {
    Timestamp t0 = log.front().at;
    for (const auto& e : log) t0 = std::min(t0, e.at);
    std::map<Timestamp, std::tuple<double, double, std::size_t>> groups;
    for (const auto& e : log) {
      const auto& it = reg.item(e.item);
      auto& [sx, sy, n] = groups[(e.at - t0) / bucket];
      sx += it.position.x + it.size.x / 2;
      sy += it.position.y + it.size.y / 2;
      ++n;
    }
    const auto trail = trail_path(reg, log, bucket);
    run.expect(trail.size() == groups.size(), "bucket " + std::to_string(bucket) + ": point count");
    std::size_t k = 0;
    for (const auto& [idx, g] : groups) {
      if (k >= trail.size()) break;
      const auto& [sx, sy, n] = g;
      const auto& p = trail[k++];
      run.expect(p.at == t0 + idx * bucket, "bucket start");
      run.expect(p.events == n, "bucket event count");
      run.expect(std::abs(p.centroid.x - sx / n) <= 1e-9 && std::abs(p.centroid.y - sy / n) <= 1e-9,
                 "centroid " + num(p.centroid.x) + "," + num(p.centroid.y));
    }
  }
  run.note(std::to_string(std::size(fixtures)) + " heatmap fixtures, 100-event log in 3 bucket sizes");
  return run.finish();
}

CriterionResult check_end_to_end() {
  Run run("end-to-end storyboard", 20.0);
  run.guarded("scenario", [&] {
    Engine engine(memory_config());
    const auto r = run_storyboard_scenario(engine);
    for (const auto& c : r.checks) run.expect(c.ok, c.name + (c.detail.empty() ? "" : ": " + c.detail));
    run.note(std::to_string(r.checks.size()) + " checks");
  });
  return run.finish();
}

CriterionResult check_crash_recovery(int trials, std::uint64_t seed) {
  Run run("crash recovery", 0);
  int torn = 0;
  std::size_t acked = 0;
  for (int i = 0; i < trials; ++i) {
    run.guarded("trial " + std::to_string(i), [&] {
      TempDir dir;
      const auto t = run_crash_trial(seed + static_cast<std::uint64_t>(i), dir.path());
      run.expect(t.ok, "trial " + std::to_string(i) + ": " + t.detail);
      torn += t.torn;
      acked += t.acknowledged;
    });
  }
  run.note(std::to_string(trials) + " trials, " + std::to_string(torn) + " torn appends, " + std::to_string(acked) +
           " acknowledged mutations");
  return run.finish();
}

CriterionResult check_wire_conformance() {
  Run run("wire conformance", 0);
  run.guarded("exchange", [&] {
    const auto w = run_wire_exchange("wire/ws_messages.jsonl");
    run.expect(w.status.state == JobState::done, "job ended " + std::string(to_string(w.status.state)) + " " +
                                                     w.status.error);
    run.expect(w.prompt_bodies.size() == 1 && w.prompt_bodies[0] == read_text(fixture("wire/prompt_request.json")),
               "prompt request body differs from recording");
    run.expect(w.uploads.size() == 1 && w.uploads[0].bytes == read_file(fixture("images/two_tone.png")) &&
                   w.uploads[0].filename == upload_name(wire_input_asset()) && w.uploads[0].type == "input",
               "upload differs");
    run.expect(w.ws_targets == std::vector<std::string>{std::string("/ws?clientId=") + kWireClientId},
               "event channel target");
    run.expect(w.history_requests == std::vector<std::string>{kWirePromptId}, "history request");
    run.expect(w.outputs.size() == 1 && w.outputs[0].bytes == read_file(fixture("wire/view_output.png")) &&
                   w.outputs[0].filename == "remove_background_00001_.png" && w.outputs[0].node_id == "4",
               "output differs from recording");
    std::vector<double> progress;
    for (const auto& e : w.events) {
      if (e.state == JobState::running) progress.push_back(e.progress);
    }
    run.expect(progress == std::vector<double>{0.0, 0.25, 0.5, 0.75, 0.99}, "progress sequence");
  });
  run.guarded("execution error", [&] {
    const auto w = run_wire_exchange("wire/ws_error.jsonl");
    run.expect(w.status.state == JobState::failed && w.status.error.find("CUDA out of memory") != std::string::npos,
               "recorded execution error not surfaced");
  });
  return run.finish();
}

}  // namespace easel::test
