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

#include <span>
#include <vector>

#include "easel/asset_store.hpp"
#include "easel/media.hpp"

namespace easel {

// Canvas-space rectangle; one canvas unit maps to one output pixel.
struct Rect {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;
  friend bool operator==(const Rect&, const Rect&) = default;
};

void to_json(json& j, const Rect& r);
void from_json(const json& j, Rect& r);

struct LayerTransform {
  Vec2 position;  // top-left corner in canvas units
  double scale = 1.0;
  std::int64_t z = 0;
  friend bool operator==(const LayerTransform&, const LayerTransform&) = default;
};

struct CollageLayer {
  AssetId asset;
  LayerTransform transform;
  Raster image;
};

// Composites layers in ascending z (ties broken by asset id, then transform)
// with premultiplied source-over. Sampling is nearest-neighbour up to 2x
// magnification and bilinear beyond. Throws EmptyLayerList / NonPositiveSize.
Raster flatten_collage(std::vector<CollageLayer> layers, const Rect& canvas);

struct Stroke {
  std::vector<Vec2> points;
  double width = 1.0;
  Rgba color{0, 0, 0, 255};
  friend bool operator==(const Stroke&, const Stroke&) = default;
};

void to_json(json& j, const Stroke& s);
void from_json(const json& j, Stroke& s);

// A pixel is painted by a stroke when its centre lies within width/2 of the
// polyline, which yields round caps and joins. Strokes composite in order.
Raster rasterize_strokes(std::span<const Stroke> strokes, const Rect& rect);

}  // namespace easel
