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

#include "support/spec_gen.hpp"

#include <algorithm>

namespace easel::test {
namespace {

const char* kWords[] = {"lighthouse", "warrior", "forest", "castle", "harbour", "fox",    "dragon",
                        "market",     "glacier", "robot",  "garden", "desert",  "violin", "comet"};

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

double unit(std::mt19937_64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::string phrase(std::mt19937_64& rng) {
  const int n = std::uniform_int_distribution<int>(1, 4)(rng);
  std::string out = "a";
  for (int i = 0; i < n; ++i) out += std::string(" ") + kWords[rng() % std::size(kWords)];
  return out;
}

std::vector<std::string> pills_of(const std::vector<PromptPill>& catalog) {
  std::vector<std::string> out;
  for (const auto& p : catalog) out.push_back(p.text);
  return out;
}

BackendModel model_for(EaselKind k, std::mt19937_64& rng) {
  switch (k) {
    case EaselKind::draw:
    case EaselKind::paint:
      return std::array{BackendModel::flux, BackendModel::sdxl, BackendModel::wan22}[rng() % 3];
    case EaselKind::trace:
      return chance(rng, 0.5) ? BackendModel::flux : BackendModel::wan22;
    case EaselKind::modify:
      return BackendModel::flux;
    case EaselKind::animate:
      return BackendModel::wan22;
  }
  return BackendModel::flux;
}

ReferenceSlot random_ref(std::mt19937_64& rng, const SpecPool& pool) {
  ReferenceSlot r{pick(rng, pool.images), unit(rng), {}};
  if (!pool.masks.empty() && chance(rng, 0.3)) r.mask = pick(rng, pool.masks);
  return r;
}

StructureSlot random_structure(std::mt19937_64& rng, const SpecPool& pool) {
  return {pick(rng, pool.images), kAllControlKinds[rng() % 4], unit(rng)};
}

bool refs_allowed(const EaselSpec& s) { return s.kind == EaselKind::paint && s.backend_model != BackendModel::wan22; }

bool structure_allowed(const EaselSpec& s) {
  return (s.kind == EaselKind::paint && s.backend_model != BackendModel::wan22) || s.kind == EaselKind::trace;
}

}  // namespace

EaselSpec random_spec(std::mt19937_64& rng, const SpecPool& pool) {
  EaselSpec s;
  s.kind = std::array{EaselKind::draw, EaselKind::paint, EaselKind::trace, EaselKind::modify,
                      EaselKind::animate}[rng() % 5];
  s.backend_model = model_for(s.kind, rng);
  s.seed = rng();
  s.details = unit(rng);
  s.adherence = unit(rng);
  s.preserve = unit(rng);
  if (chance(rng, 0.3)) s.negative_prompt = phrase(rng);
  if (chance(rng, 0.4)) {
    const int n = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int i = 0; i < n; ++i) s.styles[kAllStylePresets[rng() % std::size(kAllStylePresets)]] = unit(rng);
  }
  if (chance(rng, 0.15)) s.steps = std::uniform_int_distribution<int>(1, 40)(rng);

  const bool flux = s.backend_model == BackendModel::flux;
  switch (s.kind) {
    case EaselKind::draw:
      s.prompt = phrase(rng);
      break;
    case EaselKind::paint:
      if (chance(rng, 0.8)) s.prompt = phrase(rng);
      if (chance(rng, 0.5)) s.start_image = pick(rng, pool.images);
      if (refs_allowed(s)) {
        const int n = std::uniform_int_distribution<int>(0, 3)(rng);
        for (int i = 0; i < n; ++i) s.references.push_back(random_ref(rng, pool));
        if (chance(rng, 0.4)) s.structure = random_structure(rng, pool);
      }
      if (flux && chance(rng, 0.25)) s.style_reference = pick(rng, pool.images);
      if (s.prompt.empty() && s.references.empty() && s.start_image.empty()) s.prompt = phrase(rng);
      break;
    case EaselKind::trace:
      s.start_image = pick(rng, pool.images);
      s.trace_source_prompt = phrase(rng);
      s.trace_target_prompt = phrase(rng);
      if (chance(rng, 0.6)) {
        double a = unit(rng), b = unit(rng);
        s.retrace_range = RetraceRange{std::min(a, b), std::max(a, b)};
      }
      if (chance(rng, 0.4)) s.structure = random_structure(rng, pool);
      if (flux && chance(rng, 0.25)) s.style_reference = pick(rng, pool.images);
      break;
    case EaselKind::modify: {
      s.start_image = pick(rng, pool.images);
      if (chance(rng, 0.7)) s.prompt = phrase(rng);
      const auto all = pills_of(modify_pills());
      for (const auto& p : all) {
        if (chance(rng, 0.15)) s.prompt_pills.push_back(p);
      }
      if (s.prompt.empty() && s.prompt_pills.empty()) s.prompt_pills.push_back(pick(rng, all));
      if (chance(rng, 0.4)) s.aspect_ratio = pick(rng, std::vector<std::string>{"1:1", "3:2", "16:9", "9:16", "4:5"});
      break;
    }
    case EaselKind::animate: {
      if (chance(rng, 0.6)) s.first_frame = pick(rng, pool.images);
      if (chance(rng, 0.4)) s.last_frame = pick(rng, pool.images);
      if (chance(rng, 0.7)) s.prompt = phrase(rng);
      const auto all = pills_of(animate_pills());
      for (const auto& p : all) {
        if (chance(rng, 0.15)) s.prompt_pills.push_back(p);
      }
      break;
    }
  }
  return s;
}

std::vector<SlotToggle> slot_toggles(const EaselSpec& spec, std::mt19937_64& rng, const SpecPool& pool) {
  std::vector<SlotToggle> out;
  auto add = [&](std::string slot, auto&& set, auto&& clear, bool uses_switch = true) {
    SlotToggle t{std::move(slot), spec, spec, uses_switch};
    set(t.with);
    clear(t.without);
    out.push_back(std::move(t));
  };

  if (spec.kind == EaselKind::draw || spec.kind == EaselKind::paint) {
    add("start_image", [&](EaselSpec& s) { if (s.start_image.empty()) s.start_image = pick(rng, pool.images); },
        [](EaselSpec& s) {
          s.start_image = {};
          if (s.kind == EaselKind::paint && s.prompt.empty() && s.references.empty()) s.prompt = "a fallback";
        });
  }
  if (refs_allowed(spec)) {
    for (std::size_t i = 0; i < 3; ++i) {
      add("references[" + std::to_string(i) + "]",
          [&](EaselSpec& s) {
            while (s.references.size() <= i) s.references.push_back(random_ref(rng, pool));
          },
          [&](EaselSpec& s) {
            while (s.references.size() <= i) s.references.push_back(random_ref(rng, pool));
            s.references.erase(s.references.begin() + static_cast<std::ptrdiff_t>(i));
            if (s.prompt.empty()) s.prompt = "a fallback";
          },
          false);  // an absent reference is zero-weighted, not switched
    }
    if (!pool.masks.empty()) {
      add("references[0].mask",
          [&](EaselSpec& s) {
            if (s.references.empty()) s.references.push_back(random_ref(rng, pool));
            s.references[0].mask = pick(rng, pool.masks);
          },
          [&](EaselSpec& s) {
            if (s.references.empty()) s.references.push_back(random_ref(rng, pool));
            s.references[0].mask = {};
          });
    }
  }
  if (structure_allowed(spec)) {
    add("structure", [&](EaselSpec& s) { if (!s.structure) s.structure = random_structure(rng, pool); },
        [](EaselSpec& s) { s.structure.reset(); });
  }
  if (spec.kind == EaselKind::modify) {
    add("aspect_ratio", [](EaselSpec& s) { if (!s.aspect_ratio) s.aspect_ratio = "16:9"; },
        [](EaselSpec& s) { s.aspect_ratio.reset(); });
  }
  if (spec.kind == EaselKind::modify || spec.kind == EaselKind::animate) {
    const auto all = pills_of(spec.kind == EaselKind::modify ? modify_pills() : animate_pills());
    const auto pill = pick(rng, all);
    add("prompt_pills", [&](EaselSpec& s) {
          if (std::find(s.prompt_pills.begin(), s.prompt_pills.end(), pill) == s.prompt_pills.end()) {
            s.prompt_pills.push_back(pill);
          }
        },
        [&](EaselSpec& s) {
          std::erase(s.prompt_pills, pill);
          if (s.prompt.empty()) s.prompt = "a fallback";
        },
        false);
  }
  if (spec.kind == EaselKind::animate) {
    add("first_frame", [&](EaselSpec& s) { if (s.first_frame.empty()) s.first_frame = pick(rng, pool.images); },
        [](EaselSpec& s) {
          s.first_frame = {};
          if (s.prompt.empty()) s.prompt = "a fallback";
        });
    add("last_frame", [&](EaselSpec& s) { if (s.last_frame.empty()) s.last_frame = pick(rng, pool.images); },
        [](EaselSpec& s) {
          s.last_frame = {};
          if (s.prompt.empty()) s.prompt = "a fallback";
        });
  }
  if (spec.kind == EaselKind::trace) {
    // A random range can quantize to the full range, which is what absence
    // means; use one that cannot. One step has no interior to retrace.
    add("retrace_range",
        [](EaselSpec& s) {
          s.retrace_range = RetraceRange{0.5, 0.5};
          if (s.steps && *s.steps < 2) s.steps = 2;
        },
        [](EaselSpec& s) {
          s.retrace_range.reset();
          if (s.steps && *s.steps < 2) s.steps = 2;
        },
        false);
  }
  const auto preset = kAllStylePresets[rng() % std::size(kAllStylePresets)];
  add("styles", [&](EaselSpec& s) { s.styles[preset] = 0.5 + unit(rng) / 2; },
      [&](EaselSpec& s) { s.styles.erase(preset); }, false);
  return out;
}

std::string structural_difference(const WorkflowGraph& a, const WorkflowGraph& b) {
  if (a.nodes.size() != b.nodes.size()) {
    return "node count " + std::to_string(a.nodes.size()) + " vs " + std::to_string(b.nodes.size());
  }
  for (const auto& [id, na] : a.nodes) {
    auto it = b.nodes.find(id);
    if (it == b.nodes.end()) return "node " + id + " missing";
    const auto& nb = it->second;
    if (na.class_type != nb.class_type) return "node " + id + " class " + na.class_type + " vs " + nb.class_type;
    if (na.inputs.size() != nb.inputs.size()) return "node " + id + " input count differs";
    for (const auto& [name, va] : na.inputs) {
      auto jt = nb.inputs.find(name);
      if (jt == nb.inputs.end()) return "node " + id + " input " + name + " missing";
      const auto* ea = std::get_if<Edge>(&va);
      const auto* eb = std::get_if<Edge>(&jt->second);
      if ((ea == nullptr) != (eb == nullptr)) return "node " + id + "." + name + " edge vs literal";
      if (ea && !(*ea == *eb)) return "node " + id + "." + name + " rewired";
    }
  }
  return {};
}

std::vector<std::string> literal_differences(const WorkflowGraph& a, const WorkflowGraph& b,
                                             const std::string& switch_class) {
  std::vector<std::string> out;
  for (const auto& [id, na] : a.nodes) {
    auto it = b.nodes.find(id);
    if (it == b.nodes.end()) continue;
    for (const auto& [name, va] : na.inputs) {
      auto jt = it->second.inputs.find(name);
      if (jt == it->second.inputs.end() || std::holds_alternative<Edge>(va)) continue;
      if (!(va == jt->second)) out.push_back((na.class_type == switch_class ? "!" : "") + id + "." + name);
    }
  }
  return out;
}

}  // namespace easel::test
