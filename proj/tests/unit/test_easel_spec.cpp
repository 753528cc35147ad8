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

#include "easel/easel_spec.hpp"
#include "easel/error.hpp"

using namespace easel;

namespace {

bool has(const std::vector<std::string>& v, const std::string& needle) {
  for (const auto& s : v) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST(EaselSpec, DrawNeedsPrompt) {
  EaselSpec s;
  EXPECT_TRUE(has(validate(s), "prompt"));
  s.prompt = "a cat";
  EXPECT_TRUE(validate(s).empty());
}

TEST(EaselSpec, FourReferencesRejectedWithExactMessage) {
  EaselSpec s;
  s.kind = EaselKind::paint;
  s.prompt = "x";
  for (int i = 0; i < 4; ++i) s.references.push_back({AssetId("a" + std::to_string(i))});
  const auto v = validate(s);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0], "references: at most 3 image references are allowed (<=3), got 4");
}

TEST(EaselSpec, UnitRangesChecked) {
  EaselSpec s;
  s.prompt = "x";
  s.details = 1.5;
  s.adherence = -0.1;
  s.styles[StylePreset::Anime] = 2;
  const auto v = validate(s);
  EXPECT_TRUE(has(v, "details"));
  EXPECT_TRUE(has(v, "adherence"));
  EXPECT_TRUE(has(v, "styles.Anime"));
}

TEST(EaselSpec, SlotsRestrictedPerKind) {
  EaselSpec s;
  s.prompt = "x";
  s.references.push_back({AssetId("r")});
  s.first_frame = AssetId("f");
  s.prompt_pills = {"static camera"};
  const auto v = validate(s);
  EXPECT_TRUE(has(v, "references: not available on draw"));
  EXPECT_TRUE(has(v, "first_frame"));
  EXPECT_TRUE(has(v, "prompt_pills"));
}

TEST(EaselSpec, TraceRequirements) {
  EaselSpec s;
  s.kind = EaselKind::trace;
  auto v = validate(s);
  EXPECT_TRUE(has(v, "start_image"));
  EXPECT_TRUE(has(v, "trace_source_prompt"));
  s.start_image = AssetId("i");
  s.trace_source_prompt = "a cat";
  s.trace_target_prompt = "a dog";
  s.retrace_range = RetraceRange{0.8, 0.2};
  EXPECT_TRUE(has(validate(s), "retrace_range"));
  s.retrace_range = RetraceRange{0.2, 0.8};
  EXPECT_TRUE(validate(s).empty());
}

TEST(EaselSpec, ModifyPillsAndAspect) {
  EaselSpec s;
  s.kind = EaselKind::modify;
  s.start_image = AssetId("i");
  EXPECT_TRUE(has(validate(s), "prompt"));
  s.prompt_pills = {"oil painting"};
  EXPECT_TRUE(validate(s).empty());
  s.prompt_pills = {"not a pill"};
  EXPECT_TRUE(has(validate(s), "unknown pill"));
  s.prompt_pills = {"oil painting"};
  s.aspect_ratio = "wide";
  EXPECT_TRUE(has(validate(s), "aspect_ratio"));
  s.aspect_ratio = "16:9";
  EXPECT_TRUE(validate(s).empty());
}

TEST(EaselSpec, AnimateWithFramesNeedsNoPrompt) {
  EaselSpec s;
  s.kind = EaselKind::animate;
  s.backend_model = BackendModel::wan22;
  EXPECT_FALSE(validate(s).empty());
  s.first_frame = AssetId("f");
  EXPECT_TRUE(validate(s).empty());
}

TEST(EaselSpec, StyleReferenceNeedsFlux) {
  EaselSpec s;
  s.kind = EaselKind::paint;
  s.backend_model = BackendModel::sdxl;
  s.prompt = "x";
  s.style_reference = AssetId("s");
  EXPECT_TRUE(has(validate(s), "flux"));
}

TEST(EaselSpec, JsonRoundTrip) {
  EaselSpec s;
  s.kind = EaselKind::paint;
  s.backend_model = BackendModel::sdxl;
  s.prompt = "p";
  s.negative_prompt = "n";
  s.styles = {{StylePreset::ThreeD, 0.5}};
  s.details = 0.25;
  s.references = {{AssetId("r1"), 0.7, AssetId("m1")}, {AssetId("r2"), 1.0, {}}};
  s.structure = StructureSlot{AssetId("st"), ControlKind::pose, 0.6};
  s.seed = 18446744073709551615ULL;
  s.steps = 12;
  json j = s;
  EXPECT_EQ(j["styles"]["3D"], 0.5);
  EXPECT_EQ(j.get<EaselSpec>(), s);
  EXPECT_EQ(json::parse(canonical_dump(j)).get<EaselSpec>(), s);
}

TEST(EaselSpec, MalformedJsonIsReported) {
  json j = {{"kind", "sculpt"}};
  try {
    j.get<EaselSpec>();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedPayload);
  }
}

TEST(EaselSpec, InputAssetRoles) {
  EaselSpec s;
  s.kind = EaselKind::paint;
  s.start_image = AssetId("s");
  s.references = {{AssetId("r1"), 1, AssetId("m")}, {AssetId("r2")}};
  s.style_reference = AssetId("st");
  s.structure = StructureSlot{AssetId("c")};
  const auto in = s.input_assets();
  std::vector<std::string> roles;
  for (const auto& [a, r] : in) roles.push_back(r);
  EXPECT_EQ(roles, (std::vector<std::string>{"start_image", "reference_1", "mask", "reference_2", "style", "structure"}));
}

TEST(RunSpec, VariantRoundTrip) {
  QuickOpRequest q{QuickOpKind::extend, AssetId("a"), "sky", 7};
  const RunSpec r = q;
  EXPECT_EQ(run_spec_from_json(run_spec_to_json(r)), r);
  CollageRequest c{{{AssetId("a"), {{1, 2}, 1.5, 3}}}, {0, 0, 10, 10}};
  EXPECT_EQ(run_spec_from_json(run_spec_to_json(RunSpec{c})), RunSpec{c});
  SketchRequest sk{{Stroke{{{0, 0}, {3, 3}}, 2, {1, 2, 3, 255}}}, {0, 0, 4, 4}};
  EXPECT_EQ(run_spec_from_json(run_spec_to_json(RunSpec{sk})), RunSpec{sk});
}
