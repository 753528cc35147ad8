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

#include <cstdint>
#include <string>
#include <vector>

#include "easel/media.hpp"

namespace easel {

struct PaletteColor {
  Rgba color;
  std::uint64_t population = 0;
  std::string hex() const;  // "#rrggbb"
  friend bool operator==(const PaletteColor&, const PaletteColor&) = default;
};

// Median-cut over pixels with alpha >= 128. Boxes are split on their widest
// channel at the count-weighted median until there are k boxes or no box can
// be split. Result is ordered by population (desc), then hex.
std::vector<PaletteColor> extract_palette(const Raster& image, int k = 6);

// Horizontal strip of equal swatches, `cell` pixels square each.
Raster render_palette(const std::vector<PaletteColor>& colors, int cell = 64);

}  // namespace easel
