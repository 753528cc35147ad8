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

#include <functional>
#include <memory>
#include <optional>
#include <string>

#include "easel/asset_store.hpp"
#include "easel/easel_spec.hpp"
#include "easel/template_set.hpp"
#include "easel/workflow_graph.hpp"

namespace easel {

using AssetLookup = std::function<const Asset*(const AssetId&)>;

inline constexpr const char* kBlankImage = "easel_blank.png";
inline constexpr int kSwitchActive = 1;
inline constexpr int kSwitchInactive = 2;
inline constexpr long kMegapixel = 1024L * 1024L;

// Slider mappings. All throw OutOfRange outside [0, 1].
double map_details(double details);        // lying-sigma dishonesty, [-0.05, 0]
double map_preserve(double preserve);      // sampler denoise
double map_adherence(double adherence, BackendModel model);
double map_structure_end(ControlKind kind);
std::string_view union_control_type(ControlKind kind);

int default_steps(EaselKind kind, BackendModel model);

// Scales to roughly `area` pixels keeping the aspect ratio; both sides are
// multiples of 16.
Dims fit_to_area(Dims in, long area = kMegapixel);
Dims aspect_dims(const std::string& ratio, long area = kMegapixel);

std::string template_name(const EaselSpec& spec);
// Name the backend sees for an uploaded asset blob.
std::string upload_name(const BlobHash& blob, std::optional<MediaFormat> format);
std::string upload_name(const Asset& asset);

// How a quick operation is carried out.
struct QuickOpPlan {
  enum class Mode { workflow, easel, local_palette, local_stencil };
  Mode mode = Mode::workflow;
  std::string template_name;
  std::optional<WorkflowGraph> graph;  // workflow and easel modes
  std::optional<EaselSpec> easel;      // easel mode
};

class Compiler {
 public:
  explicit Compiler(std::shared_ptr<const TemplateSet> templates);

  // Pure: the same spec and asset table always produce byte-identical
  // serialized graphs. Throws ValidationError (with the violation list),
  // UnknownAsset, WrongAssetKind or UnknownTemplate.
  WorkflowGraph compile(const EaselSpec& spec, const AssetLookup& assets) const;

  // Easel-routed quick ops come back with the derived spec so provenance can
  // record it.
  QuickOpPlan plan_quick_op(const QuickOpRequest& req, const AssetLookup& assets) const;
  EaselSpec quick_op_easel(const QuickOpRequest& req, const Asset& asset) const;

  // Caption plus the four control maps for one image, for remote backends.
  WorkflowGraph compile_preprocess(const Asset& asset) const;

  const TemplateSet& templates() const { return *templates_; }

 private:
  std::shared_ptr<const TemplateSet> templates_;
};

}  // namespace easel
