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

#include "easel/compiler.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "easel/error.hpp"

namespace easel {

namespace {

void require_unit(double v, std::string_view name) {
  if (!(v >= 0.0 && v <= 1.0)) fail(ErrorCode::OutOfRange, std::string(name) + " must be within [0, 1]");
}

int round16(double v) { return std::max(16, static_cast<int>(std::lround(v / 16.0)) * 16); }

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string join_pills(const std::string& prompt, const std::vector<std::string>& pills) {
  std::string out = prompt;
  for (const auto& p : pills) {
    if (!out.empty()) out += ", ";
    out += p;
  }
  return out;
}

using Params = std::map<std::string, Literal>;

double num(double v) { return v == 0.0 ? 0.0 : v; }  // never emit -0.0

}  // namespace

double map_details(double details) {
  require_unit(details, "details");
  return num(-0.05 * details);
}

double map_preserve(double preserve) {
  require_unit(preserve, "preserve");
  return 1.0 - preserve;
}

double map_adherence(double adherence, BackendModel model) {
  require_unit(adherence, "adherence");
  switch (model) {
    case BackendModel::flux: return 1.0 + 4.0 * adherence;
    case BackendModel::sdxl: return 1.0 + 11.0 * adherence;
    case BackendModel::wan22: return 1.0 + 0.5 * adherence;
  }
  return 1.0;
}

double map_structure_end(ControlKind kind) {
  switch (kind) {
    case ControlKind::pose: return 0.9;
    case ControlKind::depth: return 0.7;
    case ControlKind::lineart: return 0.4;
    case ControlKind::scribble: return 0.5;
  }
  return 0.7;
}

std::string_view union_control_type(ControlKind kind) {
  switch (kind) {
    case ControlKind::pose: return "openpose";
    case ControlKind::depth: return "depth";
    case ControlKind::scribble: return "hed/pidi/scribble/ted";
    case ControlKind::lineart: return "canny/lineart/anime_lineart/mlsd";
  }
  return "auto";
}

int default_steps(EaselKind kind, BackendModel model) {
  switch (kind) {
    case EaselKind::draw:
    case EaselKind::paint:
      if (model == BackendModel::flux) return 8;
      return model == BackendModel::sdxl ? 25 : 20;
    case EaselKind::trace: return 20;
    case EaselKind::modify: return 20;
    case EaselKind::animate: return 8;
  }
  return 20;
}

Dims fit_to_area(Dims in, long area) {
  if (in.width <= 0 || in.height <= 0) fail(ErrorCode::NonPositiveSize, "image has no dimensions");
  const double s = std::sqrt(static_cast<double>(area) / (static_cast<double>(in.width) * in.height));
  return {round16(in.width * s), round16(in.height * s)};
}

Dims aspect_dims(const std::string& ratio, long area) {
  const auto colon = ratio.find(':');
  if (colon == std::string::npos) fail(ErrorCode::OutOfRange, "aspect ratio must look like W:H");
  double w = 0, h = 0;
  try {
    w = std::stod(ratio.substr(0, colon));
    h = std::stod(ratio.substr(colon + 1));
  } catch (const std::exception&) {
    fail(ErrorCode::OutOfRange, "aspect ratio must look like W:H");
  }
  if (!(w > 0) || !(h > 0)) fail(ErrorCode::OutOfRange, "aspect ratio sides must be positive");
  const double width = std::sqrt(static_cast<double>(area) * w / h);
  return {round16(width), round16(width * h / w)};
}

std::string template_name(const EaselSpec& spec) {
  const bool uso = !spec.style_reference.empty();
  switch (spec.kind) {
    case EaselKind::draw:
    case EaselKind::paint:
      switch (spec.backend_model) {
        case BackendModel::flux: return uso ? "flux_image_uso" : "flux_image";
        case BackendModel::sdxl: return "sdxl_image";
        case BackendModel::wan22: return "wan22_image";
      }
      break;
    case EaselKind::trace:
      if (spec.backend_model == BackendModel::wan22) return "wan22_trace";
      return uso ? "flux_trace_uso" : "flux_trace";
    case EaselKind::modify: return "flux_kontext_modify";
    case EaselKind::animate: return "wan22_animate";
  }
  fail(ErrorCode::UnknownTemplate, "no template for this spec");
}

std::string upload_name(const BlobHash& blob, std::optional<MediaFormat> format) {
  return blob + "." + std::string(file_extension(format.value_or(MediaFormat::png)));
}

std::string upload_name(const Asset& asset) { return upload_name(asset.blob, asset.format); }

Compiler::Compiler(std::shared_ptr<const TemplateSet> templates) : templates_(std::move(templates)) {
  if (!templates_) fail(ErrorCode::InvalidTemplate, "compiler needs a template set");
}

namespace {

std::vector<std::string> backend_violations(const EaselSpec& s) {
  std::vector<std::string> v;
  const std::string model(to_string(s.backend_model));
  if (s.kind == EaselKind::modify && s.backend_model != BackendModel::flux) {
    v.push_back("backend_model: modify runs on flux");
  }
  if (s.kind == EaselKind::animate && s.backend_model != BackendModel::wan22) {
    v.push_back("backend_model: animate runs on wan22");
  }
  if (s.kind == EaselKind::trace && s.backend_model == BackendModel::sdxl) {
    v.push_back("backend_model: trace runs on flux or wan22");
  }
  if (s.kind == EaselKind::paint && s.backend_model == BackendModel::wan22) {
    if (!s.references.empty()) v.push_back("references: not supported on " + model);
    if (s.structure) v.push_back("structure: not supported on " + model);
  }
  return v;
}

const Asset& raster_input(const AssetLookup& assets, const AssetId& id, const std::string& role) {
  const Asset* a = assets(id);
  if (!a) fail(ErrorCode::UnknownAsset, role + ": unknown asset " + id.str());
  if (!is_raster_kind(a->kind)) {
    fail(ErrorCode::WrongAssetKind, role + ": asset " + id.str() + " is a " + std::string(to_string(a->kind)) +
                                        ", an image is required");
  }
  return *a;
}

Dims dims_of(const Asset& a) { return a.dims.value_or(Dims{1024, 1024}); }

void add_common(Params& p, const EaselSpec& s) {
  p["seed"] = make_int(s.seed);
  p["steps"] = make_int(s.steps.value_or(default_steps(s.kind, s.backend_model)));
  p["dishonesty"] = map_details(s.details);
  for (StylePreset preset : kAllStylePresets) {
    auto it = s.styles.find(preset);
    p["style_" + lower(to_string(preset))] = num(it == s.styles.end() ? 0.0 : it->second);
  }
}

void add_size(Params& p, Dims d) {
  p["width"] = make_int(d.width);
  p["height"] = make_int(d.height);
}

void add_structure(Params& p, const EaselSpec& s, const AssetLookup& assets) {
  if (s.structure) {
    const Asset& a = raster_input(assets, s.structure->asset, "structure");
    auto map = a.control_maps.find(s.structure->map_kind);
    // Without a preprocessed map the raw image goes to the union model.
    p["structure_image"] = map != a.control_maps.end() ? upload_name(map->second, MediaFormat::png) : upload_name(a);
    p["structure_type"] = std::string(union_control_type(s.structure->map_kind));
    p["structure_strength"] = num(s.structure->strength);
    p["structure_end"] = map_structure_end(s.structure->map_kind);
    p["structure_select"] = make_int(kSwitchActive);
  } else {
    p["structure_image"] = std::string(kBlankImage);
    p["structure_type"] = std::string(union_control_type(ControlKind::depth));
    p["structure_strength"] = 0.0;
    p["structure_end"] = 0.0;
    p["structure_select"] = make_int(kSwitchInactive);
  }
}

void add_style_reference(Params& p, const EaselSpec& s, const AssetLookup& assets) {
  if (!s.style_reference.empty()) p["style_image"] = upload_name(raster_input(assets, s.style_reference, "style"));
}

Params image_params(const EaselSpec& s, const AssetLookup& assets) {
  Params p;
  add_common(p, s);
  p["prompt"] = s.prompt;
  p["negative_prompt"] = s.negative_prompt;
  p["guidance"] = map_adherence(s.adherence, s.backend_model);
  Dims size{1024, 1024};
  if (!s.start_image.empty()) {
    const Asset& start = raster_input(assets, s.start_image, "start_image");
    size = fit_to_area(dims_of(start));
    p["start_image"] = upload_name(start);
    p["start_select"] = make_int(kSwitchActive);
    p["denoise"] = map_preserve(s.preserve);
  } else {
    p["start_image"] = std::string(kBlankImage);
    p["start_select"] = make_int(kSwitchInactive);
    p["denoise"] = 1.0;
  }
  add_size(p, size);
  if (s.backend_model == BackendModel::wan22) return p;

  for (std::size_t i = 0; i < kMaxReferences; ++i) {
    const std::string k = "ref" + std::to_string(i + 1);
    if (i < s.references.size()) {
      const auto& r = s.references[i];
      p[k + "_image"] = upload_name(raster_input(assets, r.asset, "reference_" + std::to_string(i + 1)));
      p[k + "_strength"] = num(r.strength);
      if (!r.mask.empty()) {
        p[k + "_mask"] = upload_name(raster_input(assets, r.mask, "mask"));
        p[k + "_mask_select"] = make_int(kSwitchActive);
      } else {
        p[k + "_mask"] = std::string(kBlankImage);
        p[k + "_mask_select"] = make_int(kSwitchInactive);
      }
    } else {
      p[k + "_image"] = std::string(kBlankImage);
      p[k + "_strength"] = 0.0;
      p[k + "_mask"] = std::string(kBlankImage);
      p[k + "_mask_select"] = make_int(kSwitchInactive);
    }
  }
  add_structure(p, s, assets);
  add_style_reference(p, s, assets);
  return p;
}

Params trace_params(const EaselSpec& s, const AssetLookup& assets) {
  Params p;
  add_common(p, s);
  const int steps = std::get<std::int64_t>(p["steps"]);
  const Asset& input = raster_input(assets, s.start_image, "input_image");
  p["input_image"] = upload_name(input);
  add_size(p, fit_to_area(dims_of(input)));
  p["source_prompt"] = s.trace_source_prompt;
  p["target_prompt"] = s.trace_target_prompt;
  p["guidance"] = map_adherence(s.adherence, s.backend_model);
  p["denoise"] = map_preserve(s.preserve);
  const RetraceRange r = s.retrace_range.value_or(RetraceRange{});
  p["skip_steps"] = make_int(static_cast<std::int64_t>(std::floor(r.lo * steps)));
  p["drift_steps"] = make_int(steps - static_cast<std::int64_t>(std::ceil(r.hi * steps)));
  add_structure(p, s, assets);
  add_style_reference(p, s, assets);
  return p;
}

Params modify_params(const EaselSpec& s, const AssetLookup& assets) {
  Params p;
  add_common(p, s);
  const Asset& input = raster_input(assets, s.start_image, "input_image");
  p["input_image"] = upload_name(input);
  p["prompt"] = join_pills(s.prompt, s.prompt_pills);
  p["negative_prompt"] = s.negative_prompt;
  p["guidance"] = map_adherence(s.adherence, s.backend_model);
  p["denoise"] = map_preserve(s.preserve);
  for (const char* group : {"relight", "camera", "style"}) {
    bool on = false;
    for (const auto& pill : s.prompt_pills) {
      for (const auto& known : modify_pills()) on = on || (known.text == pill && known.group == group);
    }
    p[std::string("lora_") + group] = on ? 1.0 : 0.0;
  }
  if (s.aspect_ratio) {
    add_size(p, aspect_dims(*s.aspect_ratio));
    p["aspect_select"] = make_int(kSwitchActive);
  } else {
    add_size(p, fit_to_area(dims_of(input)));
    p["aspect_select"] = make_int(kSwitchInactive);
  }
  return p;
}

Params animate_params(const EaselSpec& s, const AssetLookup& assets) {
  Params p;
  add_common(p, s);
  const int steps = std::get<std::int64_t>(p["steps"]);
  p["split_step"] = make_int(std::max(1, steps / 2));
  p["prompt"] = join_pills(s.prompt, s.prompt_pills);
  p["negative_prompt"] = s.negative_prompt;
  p["guidance"] = map_adherence(s.adherence, s.backend_model);
  Dims size{832, 480};
  auto frame = [&](const AssetId& id, const std::string& key, const std::string& role) {
    if (id.empty()) {
      p[key + "_image"] = std::string(kBlankImage);
      p[key + "_select"] = make_int(kSwitchInactive);
      return;
    }
    const Asset& a = raster_input(assets, id, role);
    p[key + "_image"] = upload_name(a);
    p[key + "_select"] = make_int(kSwitchActive);
  };
  frame(s.first_frame, "first_frame", "first_frame");
  frame(s.last_frame, "last_frame", "last_frame");
  // Follow the orientation of the first available frame.
  const AssetId& lead = !s.first_frame.empty() ? s.first_frame : s.last_frame;
  if (!lead.empty()) {
    const Dims d = dims_of(*assets(lead));
    if (d.height > d.width) size = {480, 832};
  }
  add_size(p, size);
  // Template keys differ from the frame names.
  p["first_select"] = p.at("first_frame_select");
  p["last_select"] = p.at("last_frame_select");
  p.erase("first_frame_select");
  p.erase("last_frame_select");
  return p;
}

}  // namespace

WorkflowGraph Compiler::compile(const EaselSpec& spec, const AssetLookup& assets) const {
  auto violations = validate(spec);
  for (auto& v : backend_violations(spec)) violations.push_back(std::move(v));
  if (!violations.empty()) throw Error(ErrorCode::ValidationError, violations.front(), violations);

  Params p;
  switch (spec.kind) {
    case EaselKind::draw:
    case EaselKind::paint: p = image_params(spec, assets); break;
    case EaselKind::trace: p = trace_params(spec, assets); break;
    case EaselKind::modify: p = modify_params(spec, assets); break;
    case EaselKind::animate: p = animate_params(spec, assets); break;
  }
  return templates_->instantiate(template_name(spec), p);
}

EaselSpec Compiler::quick_op_easel(const QuickOpRequest& req, const Asset& asset) const {
  EaselSpec s;
  s.seed = req.seed;
  switch (req.op) {
    case QuickOpKind::quick_sketch:
      s.kind = EaselKind::draw;
      s.backend_model = BackendModel::flux;
      s.prompt = asset.caption.value_or("");
      break;
    case QuickOpKind::revision:
    case QuickOpKind::view:
    case QuickOpKind::blend:
      s.kind = EaselKind::modify;
      s.backend_model = BackendModel::flux;
      s.start_image = asset.id;
      s.prompt = req.prompt;
      if (req.op == QuickOpKind::view) s.prompt_pills = {"rotate the camera around the subject"};
      if (req.op == QuickOpKind::blend) s.prompt_pills = {"make the style and lighting consistent"};
      break;
    case QuickOpKind::quick_animate:
      s.kind = EaselKind::animate;
      s.backend_model = BackendModel::wan22;
      s.first_frame = asset.id;
      break;
    default:
      fail(ErrorCode::UnknownKind, std::string(to_string(req.op)) + " is not an easel-routed operation");
  }
  return s;
}

QuickOpPlan Compiler::plan_quick_op(const QuickOpRequest& req, const AssetLookup& assets) const {
  const std::string op_name(to_string(req.op));
  const Asset* found = assets(req.asset);
  if (!found) fail(ErrorCode::UnknownAsset, op_name + ": unknown asset " + req.asset.str());
  const Asset& asset = *found;
  if (req.op == QuickOpKind::quick_sketch) {
    if (asset.kind != AssetKind::text) fail(ErrorCode::WrongAssetKind, "quick_sketch needs a text asset");
    if (!asset.caption || asset.caption->find_first_not_of(" \t\r\n") == std::string::npos) {
      fail(ErrorCode::MissingPrompt, "quick_sketch needs non-empty text");
    }
  } else {
    raster_input(assets, req.asset, op_name);
  }
  const bool has_prompt = std::any_of(req.prompt.begin(), req.prompt.end(),
                                      [](char c) { return !std::isspace(static_cast<unsigned char>(c)); });
  QuickOpPlan plan;
  const Dims d = dims_of(asset);
  Params p;
  auto workflow = [&](const std::string& name) {
    plan.mode = QuickOpPlan::Mode::workflow;
    plan.template_name = name;
    plan.graph = templates_->instantiate(name, p);
    return plan;
  };

  switch (req.op) {
    case QuickOpKind::palette:
      plan.mode = QuickOpPlan::Mode::local_palette;
      return plan;
    case QuickOpKind::stencil:
      if (asset.control_maps.size() == std::size(kAllControlKinds)) {
        plan.mode = QuickOpPlan::Mode::local_stencil;
        return plan;
      }
      p["input_image"] = upload_name(asset);
      add_size(p, d);
      return workflow("stencil");
    case QuickOpKind::remove_background:
      p["input_image"] = upload_name(asset);
      add_size(p, d);
      return workflow("remove_background");
    case QuickOpKind::extract_element:
      if (!has_prompt) fail(ErrorCode::MissingPrompt, "extract_element needs a prompt naming the element");
      p["input_image"] = upload_name(asset);
      p["prompt"] = req.prompt;
      add_size(p, d);
      return workflow("extract_element");
    case QuickOpKind::upscale:
      p["input_image"] = upload_name(asset);
      add_size(p, {d.width * 2, d.height * 2});
      return workflow("upscale");
    case QuickOpKind::extend:
      p["input_image"] = upload_name(asset);
      p["pad_x"] = make_int(256);
      p["prompt"] = has_prompt ? req.prompt : asset.caption.value_or("");
      p["seed"] = make_int(req.seed);
      add_size(p, {d.width + 512, d.height});
      return workflow("extend");
    case QuickOpKind::sculpt:
      p["input_image"] = upload_name(asset);
      p["seed"] = make_int(req.seed);
      add_size(p, fit_to_area(d));
      return workflow("sculpt");
    case QuickOpKind::revision:
      if (!has_prompt) fail(ErrorCode::MissingPrompt, "revision needs a prompt describing the change");
      [[fallthrough]];
    case QuickOpKind::quick_sketch:
    case QuickOpKind::view:
    case QuickOpKind::blend:
    case QuickOpKind::quick_animate: {
      plan.mode = QuickOpPlan::Mode::easel;
      plan.easel = quick_op_easel(req, asset);
      plan.template_name = template_name(*plan.easel);
      plan.graph = compile(*plan.easel, assets);
      return plan;
    }
  }
  fail(ErrorCode::UnknownKind, "unknown quick operation");
}

WorkflowGraph Compiler::compile_preprocess(const Asset& asset) const {
  if (!is_raster_kind(asset.kind)) fail(ErrorCode::WrongAssetKind, "preprocessing needs an image");
  Params p;
  p["input_image"] = upload_name(asset);
  add_size(p, dims_of(asset));
  return templates_->instantiate("preprocess", p);
}

}  // namespace easel
