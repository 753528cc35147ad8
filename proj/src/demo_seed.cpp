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

#include "easel/demo_seed.hpp"

#include <cmath>

namespace easel {

Raster demo_image(int width, int height, Rgba top, Rgba bottom, Rgba disc) {
  Raster img(width, height);
  auto mix = [](std::uint8_t a, std::uint8_t b, double t) {
    return static_cast<std::uint8_t>(std::lround(a + (b - a) * t));
  };
  const double cx = width * 0.5, cy = height * 0.55, r = std::min(width, height) * 0.22;
  for (int y = 0; y < height; ++y) {
    const double t = height > 1 ? static_cast<double>(y) / (height - 1) : 0.0;
    const Rgba row{mix(top.r, bottom.r, t), mix(top.g, bottom.g, t), mix(top.b, bottom.b, t), 255};
    for (int x = 0; x < width; ++x) {
      const double dx = x + 0.5 - cx, dy = y + 0.5 - cy;
      img.set(x, y, dx * dx + dy * dy <= r * r ? disc : row);
    }
  }
  return img;
}

DemoSeed seed_demo(Engine& engine) {
  DemoSeed s;
  s.storyboard = engine.create_page("Storyboard").id;
  s.moodboard = engine.create_page("Moodboard").id;

  struct Spec {
    const char* name;
    int w, h;
    Rgba top, bottom, disc;
  };
  const Spec images[] = {
      {"warrior", 512, 768, {40, 44, 70, 255}, {150, 120, 90, 255}, {190, 30, 40, 255}},
      {"forest", 768, 512, {120, 170, 200, 255}, {20, 80, 30, 255}, {40, 110, 50, 255}},
      {"castle", 512, 512, {200, 190, 230, 255}, {90, 90, 100, 255}, {140, 130, 120, 255}},
      {"sky", 512, 512, {250, 200, 120, 255}, {90, 60, 150, 255}, {255, 240, 200, 255}},
  };
  double x = 0;
  for (const auto& im : images) {
    const auto a = engine.ingest(encode_png(demo_image(im.w, im.h, im.top, im.bottom, im.disc)), AssetKind::image);
    s.assets[im.name] = a.id;
    const Vec2 size{im.w / 2.0, im.h / 2.0};
    s.items[im.name] = engine.place_item(a.id, s.storyboard, {x, 0}, size).id;
    x += size.x + 40;
  }
  const std::string prompt = "a female warrior wearing a cape standing in a forest clearing";
  const auto text = engine.ingest(Bytes(prompt.begin(), prompt.end()), AssetKind::text);
  s.assets["prompt"] = text.id;
  s.items["prompt"] = engine.place_item(text.id, s.storyboard, {0, 420}, {320, 80}).id;
  s.items["sky_mood"] = engine.place_item(s.assets["sky"], s.moodboard, {0, 0}, {256, 256}).id;

  s.warrior_collection =
      engine.create_collection("Warrior", {s.assets["warrior"]}, {"character", "protagonist"}).id;
  engine.quiesce();
  return s;
}

}  // namespace easel
