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

#include <map>
#include <string>

#include "easel/engine.hpp"

namespace easel {

// Small storyboard project: a few procedurally drawn images, a text prompt,
// two pages and a "Warrior" collection. Deterministic pixels, so seeding two
// fresh engines gives the same blobs.
struct DemoSeed {
  PageId storyboard;
  PageId moodboard;
  std::map<std::string, AssetId> assets;  // warrior, forest, castle, sky, prompt
  std::map<std::string, ItemId> items;
  CollectionId warrior_collection;
};

Raster demo_image(int width, int height, Rgba top, Rgba bottom, Rgba disc);
DemoSeed seed_demo(Engine& engine);

}  // namespace easel
