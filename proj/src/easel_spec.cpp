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

#include "easel/easel_spec.hpp"

#include <algorithm>
#include <cmath>
#include <regex>

#include "easel/error.hpp"

namespace easel {

std::string_view to_string(EaselKind k) {
  switch (k) {
    case EaselKind::draw: return "draw";
    case EaselKind::paint: return "paint";
    case EaselKind::trace: return "trace";
    case EaselKind::modify: return "modify";
    case EaselKind::animate: return "animate";
  }
  return "unknown";
}

std::string_view to_string(BackendModel m) {
  switch (m) {
    case BackendModel::sdxl: return "sdxl";
    case BackendModel::flux: return "flux";
    case BackendModel::wan22: return "wan22";
  }
  return "unknown";
}

std::string_view to_string(StylePreset s) {
  switch (s) {
    case StylePreset::Realism: return "Realism";
    case StylePreset::Dreamlight: return "Dreamlight";
    case StylePreset::Anime: return "Anime";
    case StylePreset::RetroAnime: return "RetroAnime";
    case StylePreset::Animated: return "Animated";
    case StylePreset::ThreeD: return "3D";
    case StylePreset::PixelArt: return "PixelArt";
  }
  return "unknown";
}

EaselKind easel_kind_from_string(std::string_view s) {
  for (auto k : {EaselKind::draw, EaselKind::paint, EaselKind::trace, EaselKind::modify, EaselKind::animate}) {
    if (to_string(k) == s) return k;
  }
  fail(ErrorCode::MalformedPayload, "unknown easel kind '" + std::string(s) + "'");
}

BackendModel backend_model_from_string(std::string_view s) {
  for (auto m : {BackendModel::sdxl, BackendModel::flux, BackendModel::wan22}) {
    if (to_string(m) == s) return m;
  }
  fail(ErrorCode::MalformedPayload, "unknown backend model '" + std::string(s) + "'");
}

StylePreset style_preset_from_string(std::string_view s) {
  for (auto p : kAllStylePresets) {
    if (to_string(p) == s) return p;
  }
  fail(ErrorCode::MalformedPayload, "unknown style preset '" + std::string(s) + "'");
}

std::vector<std::pair<AssetId, std::string>> EaselSpec::input_assets() const {
  std::vector<std::pair<AssetId, std::string>> out;
  auto add = [&](const AssetId& id, std::string role) {
    if (!id.empty()) out.emplace_back(id, std::move(role));
  };
  if (kind == EaselKind::trace || kind == EaselKind::modify) {
    add(start_image, "input_image");
  } else {
    add(start_image, "start_image");
  }
  for (std::size_t i = 0; i < references.size(); ++i) {
    add(references[i].asset, "reference_" + std::to_string(i + 1));
    add(references[i].mask, "mask");
  }
  add(style_reference, "style");
  if (structure) add(structure->asset, "structure");
  add(first_frame, "first_frame");
  add(last_frame, "last_frame");
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json opt_id(const AssetId& id) { return id.empty() ? json(nullptr) : json(id.value); }

AssetId read_id(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return {};
  return AssetId(j.at(key).get<std::string>());
}

template <class F>
void guarded(F&& f) {
  try {
    f();
  } catch (const Error&) {
    throw;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedPayload, e.what());
  }
}

}  // namespace

void to_json(json& j, const EaselSpec& s) {
  j = json::object();
  j["kind"] = to_string(s.kind);
  j["backend_model"] = to_string(s.backend_model);
  j["prompt"] = s.prompt;
  j["negative_prompt"] = s.negative_prompt;
  json styles = json::object();
  for (const auto& [p, v] : s.styles) styles[std::string(to_string(p))] = v;
  j["styles"] = styles;
  j["details"] = s.details;
  j["adherence"] = s.adherence;
  j["preserve"] = s.preserve;
  j["start_image"] = opt_id(s.start_image);
  json refs = json::array();
  for (const auto& r : s.references) {
    refs.push_back(json{{"asset", r.asset}, {"strength", r.strength}, {"mask", opt_id(r.mask)}});
  }
  j["references"] = refs;
  j["style_reference"] = opt_id(s.style_reference);
  j["structure"] = s.structure ? json{{"asset", s.structure->asset},
                                      {"map_kind", to_string(s.structure->map_kind)},
                                      {"strength", s.structure->strength}}
                               : json(nullptr);
  j["trace_source_prompt"] = s.trace_source_prompt;
  j["trace_target_prompt"] = s.trace_target_prompt;
  j["retrace_range"] = s.retrace_range ? json::array({s.retrace_range->lo, s.retrace_range->hi}) : json(nullptr);
  j["prompt_pills"] = s.prompt_pills;
  j["aspect_ratio"] = s.aspect_ratio ? json(*s.aspect_ratio) : json(nullptr);
  j["first_frame"] = opt_id(s.first_frame);
  j["last_frame"] = opt_id(s.last_frame);
  j["seed"] = s.seed;
  j["steps"] = s.steps ? json(*s.steps) : json(nullptr);
}

void from_json(const json& j, EaselSpec& s) {
  guarded([&] {
    if (!j.is_object()) fail(ErrorCode::MalformedPayload, "easel spec must be a JSON object");
    s = EaselSpec{};
    s.kind = easel_kind_from_string(j.at("kind").get<std::string>());
    s.backend_model = backend_model_from_string(j.value("backend_model", std::string("flux")));
    s.prompt = j.value("prompt", std::string{});
    s.negative_prompt = j.value("negative_prompt", std::string{});
    if (j.contains("styles") && !j.at("styles").is_null()) {
      for (const auto& [k, v] : j.at("styles").items()) s.styles[style_preset_from_string(k)] = v.get<double>();
    }
    s.details = j.value("details", 0.0);
    s.adherence = j.value("adherence", 0.5);
    s.preserve = j.value("preserve", 0.0);
    s.start_image = read_id(j, "start_image");
    if (j.contains("references") && !j.at("references").is_null()) {
      for (const auto& r : j.at("references")) {
        s.references.push_back({AssetId(r.at("asset").get<std::string>()), r.value("strength", 1.0),
                                read_id(r, "mask")});
      }
    }
    s.style_reference = read_id(j, "style_reference");
    if (j.contains("structure") && !j.at("structure").is_null()) {
      const auto& st = j.at("structure");
      StructureSlot slot;
      slot.asset = AssetId(st.at("asset").get<std::string>());
      try {
        slot.map_kind = control_kind_from_string(st.value("map_kind", std::string("depth")));
      } catch (const Error& e) {
        throw Error(ErrorCode::MalformedPayload, e.what());
      }
      slot.strength = st.value("strength", 1.0);
      s.structure = slot;
    }
    s.trace_source_prompt = j.value("trace_source_prompt", std::string{});
    s.trace_target_prompt = j.value("trace_target_prompt", std::string{});
    if (j.contains("retrace_range") && !j.at("retrace_range").is_null()) {
      const auto& r = j.at("retrace_range");
      s.retrace_range = RetraceRange{r.at(0).get<double>(), r.at(1).get<double>()};
    }
    if (j.contains("prompt_pills") && !j.at("prompt_pills").is_null()) {
      s.prompt_pills = j.at("prompt_pills").get<std::vector<std::string>>();
    }
    if (j.contains("aspect_ratio") && !j.at("aspect_ratio").is_null()) {
      s.aspect_ratio = j.at("aspect_ratio").get<std::string>();
    }
    s.first_frame = read_id(j, "first_frame");
    s.last_frame = read_id(j, "last_frame");
    if (j.contains("seed") && !j.at("seed").is_null()) {
      if (!j.at("seed").is_number_integer()) fail(ErrorCode::MalformedPayload, "seed must be an integer");
      s.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("steps") && !j.at("steps").is_null()) s.steps = j.at("steps").get<int>();
  });
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

void check_unit(std::vector<std::string>& out, std::string_view name, double v) {
  if (!in_unit(v)) out.push_back(std::string(name) + ": must be within [0, 1]");
}

bool pill_known(const std::vector<PromptPill>& catalog, const std::string& text) {
  return std::any_of(catalog.begin(), catalog.end(), [&](const PromptPill& p) { return p.text == text; });
}

bool blank(const std::string& s) { return s.find_first_not_of(" \t\r\n") == std::string::npos; }

}  // namespace

std::vector<std::string> validate(const EaselSpec& spec) {
  std::vector<std::string> v;
  const auto kind = spec.kind;
  const std::string kname(to_string(kind));

  check_unit(v, "details", spec.details);
  check_unit(v, "adherence", spec.adherence);
  check_unit(v, "preserve", spec.preserve);
  for (const auto& [preset, strength] : spec.styles) {
    check_unit(v, "styles." + std::string(to_string(preset)), strength);
  }
  if (spec.steps && *spec.steps <= 0) v.push_back("steps: must be a positive integer");

  if (spec.references.size() > kMaxReferences) {
    v.push_back("references: at most 3 image references are allowed (<=3), got " +
                std::to_string(spec.references.size()));
  }
  for (std::size_t i = 0; i < spec.references.size(); ++i) {
    const auto& r = spec.references[i];
    const std::string name = "references[" + std::to_string(i) + "]";
    if (r.asset.empty()) v.push_back(name + ".asset: required");
    check_unit(v, name + ".strength", r.strength);
  }
  if (spec.structure) check_unit(v, "structure.strength", spec.structure->strength);

  const bool allows_refs = kind == EaselKind::paint;
  const bool allows_structure = kind == EaselKind::paint || kind == EaselKind::trace;
  const bool allows_style_ref = kind == EaselKind::paint || kind == EaselKind::trace;
  const bool allows_start = kind != EaselKind::animate;
  const bool allows_pills = kind == EaselKind::modify || kind == EaselKind::animate;
  const bool allows_frames = kind == EaselKind::animate;

  if (!allows_refs && !spec.references.empty()) v.push_back("references: not available on " + kname);
  if (!allows_structure && spec.structure) v.push_back("structure: not available on " + kname);
  if (!allows_style_ref && !spec.style_reference.empty()) v.push_back("style_reference: not available on " + kname);
  if (!allows_start && !spec.start_image.empty()) v.push_back("start_image: not available on " + kname);
  if (!allows_frames && (!spec.first_frame.empty() || !spec.last_frame.empty())) {
    v.push_back("first_frame/last_frame: only available on animate");
  }
  if (!allows_pills && !spec.prompt_pills.empty()) v.push_back("prompt_pills: only available on modify and animate");
  if (kind != EaselKind::modify && spec.aspect_ratio) v.push_back("aspect_ratio: only available on modify");
  if (kind != EaselKind::trace) {
    if (!spec.trace_source_prompt.empty() || !spec.trace_target_prompt.empty()) {
      v.push_back("trace prompts: only available on trace");
    }
    if (spec.retrace_range) v.push_back("retrace_range: only available on trace");
  }
  if (!spec.style_reference.empty() && spec.backend_model != BackendModel::flux) {
    v.push_back("style_reference: requires the flux backend");
  }

  switch (kind) {
    case EaselKind::draw:
      if (blank(spec.prompt)) v.push_back("prompt: draw requires a prompt");
      break;
    case EaselKind::paint:
      if (blank(spec.prompt) && spec.references.empty() && spec.start_image.empty()) {
        v.push_back("prompt: paint requires a prompt, a reference or a start image");
      }
      break;
    case EaselKind::trace:
      if (spec.start_image.empty()) v.push_back("start_image: trace requires an input image");
      if (blank(spec.trace_source_prompt)) v.push_back("trace_source_prompt: required");
      if (blank(spec.trace_target_prompt)) v.push_back("trace_target_prompt: required");
      if (!spec.prompt.empty()) v.push_back("prompt: trace uses trace_source_prompt/trace_target_prompt");
      if (spec.retrace_range) {
        const auto& r = *spec.retrace_range;
        if (!in_unit(r.lo) || !in_unit(r.hi) || r.lo > r.hi) {
          v.push_back("retrace_range: need 0 <= lo <= hi <= 1");
        }
      }
      break;
    case EaselKind::modify:
      if (spec.start_image.empty()) v.push_back("start_image: modify requires an input image");
      if (blank(spec.prompt) && spec.prompt_pills.empty()) {
        v.push_back("prompt: modify requires a prompt or at least one prompt pill");
      }
      if (spec.aspect_ratio) {
        static const std::regex ratio(R"(^([1-9][0-9]?):([1-9][0-9]?)$)");
        if (!std::regex_match(*spec.aspect_ratio, ratio)) v.push_back("aspect_ratio: expected W:H, e.g. 16:9");
      }
      break;
    case EaselKind::animate:
      if (spec.first_frame.empty() && spec.last_frame.empty() && blank(spec.prompt) && spec.prompt_pills.empty()) {
        v.push_back("prompt: animate without frames requires a prompt");
      }
      break;
  }

  if (allows_pills) {
    const auto& catalog = kind == EaselKind::modify ? modify_pills() : animate_pills();
    for (const auto& pill : spec.prompt_pills) {
      if (!pill_known(catalog, pill)) v.push_back("prompt_pills: unknown pill '" + pill + "'");
    }
  }
  return v;
}

const std::vector<PromptPill>& modify_pills() {
  static const std::vector<PromptPill> pills = {
      {"warm golden hour lighting", "relight"},
      {"cool blue moonlight", "relight"},
      {"dramatic rim lighting", "relight"},
      {"soft diffused light", "relight"},
      {"light coming from the left", "relight"},
      {"light coming from the right", "relight"},
      {"low angle shot", "camera"},
      {"high angle shot", "camera"},
      {"close-up shot", "camera"},
      {"wide establishing shot", "camera"},
      {"view from behind", "camera"},
      {"rotate the camera around the subject", "camera"},
      {"watercolor painting", "style"},
      {"oil painting", "style"},
      {"pencil sketch", "style"},
      {"cinematic film still", "style"},
      {"make the style and lighting consistent", "relight"},
  };
  return pills;
}

const std::vector<PromptPill>& animate_pills() {
  static const std::vector<PromptPill> pills = {
      {"the camera pans left", "motion"},
      {"the camera pans right", "motion"},
      {"the camera dollies in", "motion"},
      {"the camera dollies out", "motion"},
      {"the camera orbits around the subject", "motion"},
      {"the camera tilts up", "motion"},
      {"handheld camera shake", "motion"},
      {"static camera", "motion"},
  };
  return pills;
}

// ---------------------------------------------------------------------------
// Quick operations and local runs

std::string_view to_string(QuickOpKind k) {
  switch (k) {
    case QuickOpKind::quick_sketch: return "quick_sketch";
    case QuickOpKind::remove_background: return "remove_background";
    case QuickOpKind::extract_element: return "extract_element";
    case QuickOpKind::palette: return "palette";
    case QuickOpKind::stencil: return "stencil";
    case QuickOpKind::revision: return "revision";
    case QuickOpKind::upscale: return "upscale";
    case QuickOpKind::blend: return "blend";
    case QuickOpKind::extend: return "extend";
    case QuickOpKind::view: return "view";
    case QuickOpKind::quick_animate: return "quick_animate";
    case QuickOpKind::sculpt: return "sculpt";
  }
  return "unknown";
}

QuickOpKind quick_op_from_string(std::string_view s) {
  for (int i = 0; i <= static_cast<int>(QuickOpKind::sculpt); ++i) {
    const auto k = static_cast<QuickOpKind>(i);
    if (to_string(k) == s) return k;
  }
  fail(ErrorCode::UnknownKind, "unknown quick operation '" + std::string(s) + "'");
}

void to_json(json& j, const QuickOpRequest& q) {
  j = json{{"op", to_string(q.op)}, {"asset", q.asset}, {"prompt", q.prompt}, {"seed", q.seed}};
}

void from_json(const json& j, QuickOpRequest& q) {
  guarded([&] {
    q = QuickOpRequest{};
    q.op = quick_op_from_string(j.at("op").get<std::string>());
    q.asset = AssetId(j.at("asset").get<std::string>());
    q.prompt = j.value("prompt", std::string{});
    if (j.contains("seed") && !j.at("seed").is_null()) q.seed = j.at("seed").get<std::uint64_t>();
  });
}

void to_json(json& j, const CollageRequest& c) {
  json layers = json::array();
  for (const auto& l : c.layers) {
    layers.push_back(json{{"asset", l.asset},
                          {"position", l.transform.position},
                          {"scale", l.transform.scale},
                          {"z", l.transform.z}});
  }
  j = json{{"layers", layers}, {"canvas", c.canvas}};
}

void from_json(const json& j, CollageRequest& c) {
  guarded([&] {
    c = CollageRequest{};
    for (const auto& l : j.at("layers")) {
      CollageLayerSpec spec;
      spec.asset = AssetId(l.at("asset").get<std::string>());
      spec.transform.position = l.value("position", Vec2{});
      spec.transform.scale = l.value("scale", 1.0);
      spec.transform.z = l.value("z", std::int64_t{0});
      c.layers.push_back(spec);
    }
    c.canvas = j.at("canvas").get<Rect>();
  });
}

void to_json(json& j, const SketchRequest& s) { j = json{{"strokes", s.strokes}, {"rect", s.rect}}; }

void from_json(const json& j, SketchRequest& s) {
  guarded([&] {
    s.strokes = j.value("strokes", std::vector<Stroke>{});
    s.rect = j.at("rect").get<Rect>();
  });
}

json run_spec_to_json(const RunSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, EaselSpec>) return json{{"type", "easel"}, {"spec", s}};
        if constexpr (std::is_same_v<T, QuickOpRequest>) return json{{"type", "quick_op"}, {"spec", s}};
        if constexpr (std::is_same_v<T, CollageRequest>) return json{{"type", "collage"}, {"spec", s}};
        if constexpr (std::is_same_v<T, SketchRequest>) return json{{"type", "sketch"}, {"spec", s}};
      },
      spec);
}

RunSpec run_spec_from_json(const json& j) {
  const auto type = j.at("type").get<std::string>();
  const auto& body = j.at("spec");
  if (type == "easel") return body.get<EaselSpec>();
  if (type == "quick_op") return body.get<QuickOpRequest>();
  if (type == "collage") return body.get<CollageRequest>();
  if (type == "sketch") return body.get<SketchRequest>();
  fail(ErrorCode::MalformedPayload, "unknown run spec type '" + type + "'");
}

}  // namespace easel
