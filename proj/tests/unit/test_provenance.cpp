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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "easel/error.hpp"
#include "easel/projections.hpp"
#include "easel/provenance.hpp"

using namespace easel;

namespace {

ProvenanceNode make_node(const std::string& id, Timestamp at, std::vector<ParentEdge> parents = {},
                         NodeKind kind = NodeKind::original) {
  ProvenanceNode n;
  n.id = NodeId(id);
  n.item = ItemId("i-" + id);
  n.asset = AssetId("a-" + id);
  n.kind = kind;
  n.parents = std::move(parents);
  n.created_at = at;
  if (kind == NodeKind::generated) {
    EaselSpec s;
    s.prompt = "p " + id;
    n.params = s;
  }
  return n;
}

CanvasItem make_item(const std::string& id, Timestamp at, Vec2 pos, Vec2 size = {100, 100}) {
  CanvasItem i;
  i.id = ItemId(id);
  i.page = PageId("p-1");
  i.asset = AssetId("a-" + id);
  i.position = pos;
  i.size = size;
  i.created_at = at;
  return i;
}

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::Io;
}

}  // namespace

TEST(Provenance, ChainLineage) {
  ProvenanceGraph g;
  g.add_node(make_node("imp", 1));
  g.add_node(make_node("draw", 2, {{NodeId("imp"), EdgeRole::start_image}}, NodeKind::generated));
  g.add_node(make_node("trace", 3, {{NodeId("draw"), EdgeRole::input_image}}, NodeKind::generated));

  const auto l = g.lineage_of(NodeId("trace"));
  EXPECT_EQ(l.ancestors, (std::vector<NodeId>{NodeId("imp"), NodeId("draw")}));
  EXPECT_TRUE(l.descendants.empty());
  ASSERT_EQ(l.ancestor_edges.size(), 2u);
  EXPECT_EQ(l.ancestor_edges[0].role, EdgeRole::start_image);

  const auto root = g.lineage_of(NodeId("imp"));
  EXPECT_TRUE(root.ancestors.empty());
  EXPECT_EQ(root.descendants, (std::vector<NodeId>{NodeId("draw"), NodeId("trace")}));
  EXPECT_EQ(code_of([&] { g.lineage_of(NodeId("nope")); }), ErrorCode::UnknownNode);
}

TEST(Provenance, TypedEdgesForPaint) {
  ProvenanceGraph g;
  g.add_node(make_node("r1", 1));
  g.add_node(make_node("r2", 2));
  g.add_node(make_node("st", 3));
  g.add_node(make_node("out", 4,
                       {{NodeId("r1"), EdgeRole::reference_1},
                        {NodeId("r2"), EdgeRole::reference_2},
                        {NodeId("st"), EdgeRole::structure}},
                       NodeKind::generated));
  const auto l = g.lineage_of(NodeId("out"));
  std::set<EdgeRole> roles;
  for (const auto& e : l.ancestor_edges) roles.insert(e.role);
  EXPECT_EQ(roles, (std::set<EdgeRole>{EdgeRole::reference_1, EdgeRole::reference_2, EdgeRole::structure}));
}

TEST(Provenance, MissingParentRejected) {
  ProvenanceGraph g;
  EXPECT_EQ(code_of([&] { g.add_node(make_node("x", 1, {{NodeId("ghost"), EdgeRole::source}})); }),
            ErrorCode::UnknownNode);
  EXPECT_TRUE(g.nodes().empty());
}

// Ancestors must equal what a plain BFS over the parent lists reaches.
TEST(Provenance, RandomDagMatchesBfsOracle) {
  std::mt19937 rng(7);
  ProvenanceGraph g;
  std::vector<std::vector<int>> parents(50);
  for (int i = 0; i < 50; ++i) {
    std::vector<ParentEdge> edges;
    if (i > 0) {
      std::uniform_int_distribution<int> pick(0, i - 1);
      const int k = std::uniform_int_distribution<int>(0, 3)(rng);
      std::set<int> chosen;
      for (int e = 0; e < k; ++e) chosen.insert(pick(rng));
      for (int p : chosen) {
        parents[i].push_back(p);
        edges.push_back({NodeId("n" + std::to_string(p)), EdgeRole::source});
      }
    }
    // Shuffled timestamps break any accidental id/time coupling, but parents
    // still come first.
    g.add_node(make_node("n" + std::to_string(i), 1000 + i * 10, edges));
  }
  ASSERT_TRUE(g.is_acyclic());

  for (int x = 0; x < 50; ++x) {
    std::set<int> seen;
    std::vector<int> queue{x};
    while (!queue.empty()) {
      int cur = queue.back();
      queue.pop_back();
      for (int p : parents[cur]) {
        if (seen.insert(p).second) queue.push_back(p);
      }
    }
    std::vector<NodeId> expect;
    for (int p : seen) expect.push_back(NodeId("n" + std::to_string(p)));
    std::sort(expect.begin(), expect.end(), [](const NodeId& a, const NodeId& b) {
      return std::stoi(a.str().substr(1)) < std::stoi(b.str().substr(1));
    });
    EXPECT_EQ(g.lineage_of(NodeId("n" + std::to_string(x))).ancestors, expect) << "node " << x;

    std::set<int> down;
    for (int y = 0; y < 50; ++y) {
      std::vector<int> q{y};
      std::set<int> s;
      bool hit = false;
      while (!q.empty() && !hit) {
        int cur = q.back();
        q.pop_back();
        for (int p : parents[cur]) {
          if (p == x) hit = true;
          if (s.insert(p).second) q.push_back(p);
        }
      }
      if (hit) down.insert(y);
    }
    EXPECT_EQ(g.lineage_of(NodeId("n" + std::to_string(x))).descendants.size(), down.size());
  }
}

TEST(Provenance, RecreateRules) {
  ProvenanceGraph g;
  g.add_node(make_node("imp", 1));
  g.add_node(make_node("gen", 2, {{NodeId("imp"), EdgeRole::input_image}}, NodeKind::generated));
  auto copy = make_node("cp", 3, {{NodeId("gen"), EdgeRole::source}}, NodeKind::copy);
  copy.copy_of = NodeId("gen");
  copy.params = g.node(NodeId("gen")).params;
  g.add_node(copy);

  EXPECT_EQ(code_of([&] { g.recreate(NodeId("imp")); }), ErrorCode::NotAGeneratedNode);
  EXPECT_EQ(run_spec_to_json(g.recreate(NodeId("cp"))), run_spec_to_json(g.recreate(NodeId("gen"))));
  EXPECT_EQ(code_of([&] { g.recreate(NodeId("zz")); }), ErrorCode::UnknownNode);
}

TEST(Provenance, SoftDeleteKeepsEdges) {
  ProvenanceGraph g;
  g.add_node(make_node("a", 1));
  g.add_node(make_node("b", 2, {{NodeId("a"), EdgeRole::source}}));
  const auto edges = g.edge_count();
  g.set_deleted(NodeId("a"), true);
  g.set_deleted(NodeId("a"), true);
  EXPECT_EQ(g.edge_count(), edges);
  EXPECT_EQ(g.lineage_of(NodeId("b")).ancestors, std::vector<NodeId>{NodeId("a")});
  g.set_deleted(NodeId("a"), false);
  EXPECT_FALSE(g.node(NodeId("a")).deleted);
  EXPECT_EQ(code_of([&] { g.set_deleted(NodeId("q"), true); }), ErrorCode::UnknownNode);
}

TEST(Provenance, ExportRoundTripsNodes) {
  ProvenanceGraph g;
  g.add_node(make_node("a", 1));
  g.add_node(make_node("b", 2, {{NodeId("a"), EdgeRole::mask}}, NodeKind::generated));
  const auto doc = g.export_json();
  ASSERT_EQ(doc["nodes"].size(), 2u);
  ASSERT_EQ(doc["edges"].size(), 1u);
  EXPECT_EQ(doc["edges"][0]["role"], "mask");
  EXPECT_EQ(doc["nodes"][1].get<ProvenanceNode>(), g.node(NodeId("b")));
}

TEST(History, WindowOfFive) {
  AssetRegistry reg;
  ProvenanceGraph g;
  for (int i = 0; i < 12; ++i) {
    // Insert out of order; the window follows creation time.
    const int k = (i * 5) % 12;
    reg.add_item(make_item("it" + std::to_string(100 + k), 1000 + k, {double(k), 0}));
  }
  auto w = history_window(reg, g, 0);
  ASSERT_EQ(w.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_EQ(w[i].created_at, Timestamp(1000 + i));

  w = history_window(reg, g, 10);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w[0].created_at, 1010);
  EXPECT_EQ(w[1].created_at, 1011);

  for (int c = 0; c + 6 <= 12; ++c) {
    auto a = history_window(reg, g, c), b = history_window(reg, g, c + 1);
    int overlap = 0;
    for (auto& x : a) {
      for (auto& y : b) overlap += x.item == y.item;
    }
    EXPECT_EQ(overlap, 4);
  }
  EXPECT_EQ(code_of([&] { history_window(reg, g, 12); }), ErrorCode::CursorOutOfRange);
  EXPECT_EQ(code_of([&] { history_window(reg, g, -1); }), ErrorCode::CursorOutOfRange);
}

TEST(History, ShortCanvasAndHiddenItems) {
  AssetRegistry reg;
  ProvenanceGraph g;
  for (int i = 0; i < 3; ++i) reg.add_item(make_item("it" + std::to_string(i), i, {0, 0}));
  EXPECT_EQ(history_window(reg, g, 0).size(), 3u);
  reg.item_mut(ItemId("it1")).hidden = true;
  EXPECT_EQ(history_window(reg, g, 0).size(), 2u);
  EXPECT_EQ(code_of([&] { history_window(AssetRegistry{}, g, 0); }), ErrorCode::CursorOutOfRange);
}

TEST(Trails, SingleItemSinglePoint) {
  AssetRegistry reg;
  reg.add_item(make_item("a", 0, {10, 20}, {40, 60}));
  std::vector<Interaction> log;
  for (int i = 0; i < 10; ++i) log.push_back({i * 1'000'000, ItemId("a")});
  const auto t = trail_path(reg, log);
  ASSERT_EQ(t.size(), 1u);
  EXPECT_EQ(t[0].centroid, (Vec2{30, 50}));
  EXPECT_EQ(t[0].events, 10u);
}

TEST(Trails, TwoBuckets) {
  AssetRegistry reg;
  reg.add_item(make_item("a", 0, {0, 0}));
  reg.add_item(make_item("b", 0, {500, 0}));
  std::vector<Interaction> log{{0, ItemId("a")}, {90'000'000, ItemId("b")}};
  const auto t = trail_path(reg, log);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(t[0].centroid, (Vec2{50, 50}));
  EXPECT_EQ(t[1].centroid, (Vec2{550, 50}));
  EXPECT_EQ(t[1].at, 60'000'000);
  EXPECT_EQ(code_of([&] { trail_path(reg, log, 0); }), ErrorCode::OutOfRange);
}

TEST(Trails, HundredEventsMatchBucketMeanOracle) {
  AssetRegistry reg;
  std::mt19937 rng(3);
  for (int i = 0; i < 8; ++i) {
    reg.add_item(make_item("it" + std::to_string(i), 0, {double(rng() % 1000), double(rng() % 1000)},
                           {double(10 + rng() % 200), double(10 + rng() % 200)}));
  }
  std::vector<Interaction> log;
  Timestamp t = 5'000'000;
  for (int i = 0; i < 100; ++i) {
    t += static_cast<Timestamp>(rng() % 40'000'000);
    log.push_back({t, ItemId("it" + std::to_string(rng() % 8))});
  }
  std::shuffle(log.begin(), log.end(), rng);
  const Timestamp bucket = 45'000'000;

  // Oracle: group by integer bucket index relative to the earliest event.
  Timestamp t0 = log[0].at;
  for (auto& e : log) t0 = std::min(t0, e.at);
  std::map<Timestamp, std::tuple<double, double, int>> groups;
  for (auto& e : log) {
    const auto& it = reg.item(e.item);
    auto& [sx, sy, n] = groups[(e.at - t0) / bucket];
    sx += it.position.x + it.size.x / 2;
    sy += it.position.y + it.size.y / 2;
    ++n;
  }
  const auto trail = trail_path(reg, log, bucket);
  ASSERT_EQ(trail.size(), groups.size());
  std::size_t k = 0;
  for (auto& [idx, g] : groups) {
    auto& [sx, sy, n] = g;
    EXPECT_EQ(trail[k].at, t0 + idx * bucket);
    EXPECT_NEAR(trail[k].centroid.x, sx / n, 1e-9);
    EXPECT_NEAR(trail[k].centroid.y, sy / n, 1e-9);
    EXPECT_EQ(trail[k].events, std::size_t(n));
    ++k;
  }
}

TEST(Heatmap, NormalizesByMax) {
  AssetRegistry reg;
  const std::uint64_t clicks[] = {2, 4, 8};
  for (int i = 0; i < 3; ++i) {
    auto it = make_item("h" + std::to_string(i), i, {0, 0});
    it.click_count = clicks[i];
    reg.add_item(it);
  }
  auto h = activity_heatmap(reg);
  EXPECT_DOUBLE_EQ(h[ItemId("h0")], 0.25);
  EXPECT_DOUBLE_EQ(h[ItemId("h1")], 0.5);
  EXPECT_DOUBLE_EQ(h[ItemId("h2")], 1.0);

  for (int i = 0; i < 3; ++i) reg.item_mut(ItemId("h" + std::to_string(i))).click_count *= 7;
  EXPECT_EQ(activity_heatmap(reg), h);

  // Hidden items neither get a weight nor set the maximum.
  reg.item_mut(ItemId("h2")).hidden = true;
  h = activity_heatmap(reg);
  EXPECT_EQ(h.count(ItemId("h2")), 0u);
  EXPECT_DOUBLE_EQ(h[ItemId("h1")], 1.0);
}

TEST(Heatmap, UntouchedCanvasIsZero) {
  AssetRegistry reg;
  reg.add_item(make_item("a", 0, {0, 0}));
  reg.add_item(make_item("b", 0, {0, 0}));
  for (auto& [_, w] : activity_heatmap(reg)) EXPECT_EQ(w, 0.0);
}

TEST(Timeline, AffineAxis) {
  AssetRegistry reg;
  ProvenanceGraph g;
  for (int i = 0; i < 4; ++i) {
    const std::string id = "t" + std::to_string(i);
    reg.add_item(make_item(id, 100 + 30 * i, {0, 0}));
    std::vector<ParentEdge> parents;
    if (i > 0) parents.push_back({NodeId("n" + std::to_string(i - 1)), EdgeRole::input_image});
    auto n = make_node("n" + std::to_string(i), 100 + 30 * i, parents);
    n.item = ItemId(id);
    g.add_node(n);
  }
  const auto t = timeline_layout(reg, g, 300);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_DOUBLE_EQ(t[0].x, 0);
  EXPECT_DOUBLE_EQ(t[1].x, 100);
  EXPECT_DOUBLE_EQ(t[2].x, 200);
  EXPECT_DOUBLE_EQ(t[3].x, 300);
  // Direct edges only.
  ASSERT_EQ(t[2].parents.size(), 1u);
  EXPECT_EQ(t[2].parents[0].item, ItemId("t1"));
  ASSERT_EQ(t[2].children.size(), 1u);
  EXPECT_EQ(t[2].children[0].item, ItemId("t3"));
}

TEST(Timeline, DegenerateAndEmpty) {
  AssetRegistry reg;
  ProvenanceGraph g;
  EXPECT_EQ(code_of([&] { timeline_layout(reg, g, 100); }), ErrorCode::EmptyCanvas);
  reg.add_item(make_item("only", 5, {0, 0}));
  EXPECT_DOUBLE_EQ(timeline_layout(reg, g, 100)[0].x, 50);
  reg.add_item(make_item("second", 9, {0, 0}));
  const auto t = timeline_layout(reg, g, 100);
  EXPECT_DOUBLE_EQ(t[0].x, 0);
  EXPECT_DOUBLE_EQ(t[1].x, 100);
}
