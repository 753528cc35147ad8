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

#include "easel/palette.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>

#include "easel/error.hpp"

namespace easel {

std::string PaletteColor::hex() const {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", color.r, color.g, color.b);
  return buf;
}

namespace {

struct Bin {
  std::array<int, 3> c;
  std::uint64_t count;
};

struct Box {
  std::vector<Bin> bins;
  std::uint64_t population() const {
    std::uint64_t n = 0;
    for (const auto& b : bins) n += b.count;
    return n;
  }
  // Returns (range, channel) of the widest channel; lowest channel wins ties.
  std::pair<int, int> widest() const {
    int best = -1, channel = 0;
    for (int ch = 0; ch < 3; ++ch) {
      int lo = 255, hi = 0;
      for (const auto& b : bins) {
        lo = std::min(lo, b.c[ch]);
        hi = std::max(hi, b.c[ch]);
      }
      if (hi - lo > best) best = hi - lo, channel = ch;
    }
    return {best, channel};
  }
};

std::uint32_t packed(const std::array<int, 3>& c) { return (c[0] << 16) | (c[1] << 8) | c[2]; }

}  // namespace

std::vector<PaletteColor> extract_palette(const Raster& image, int k) {
  if (k <= 0) fail(ErrorCode::OutOfRange, "palette size must be positive");
  std::map<std::uint32_t, std::uint64_t> hist;
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      const Rgba p = image.at(x, y);
      if (p.a < 128) continue;
      ++hist[(std::uint32_t{p.r} << 16) | (std::uint32_t{p.g} << 8) | p.b];
    }
  }
  if (hist.empty()) return {};

  std::vector<Box> boxes(1);
  for (const auto& [rgb, n] : hist) {
    boxes[0].bins.push_back({{int(rgb >> 16), int((rgb >> 8) & 0xff), int(rgb & 0xff)}, n});
  }

  while (static_cast<int>(boxes.size()) < k) {
    // Widest box first; population then position break ties.
    int pick = -1;
    std::pair<int, std::uint64_t> best{0, 0};
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      if (boxes[i].bins.size() < 2) continue;
      const std::pair<int, std::uint64_t> key{boxes[i].widest().first, boxes[i].population()};
      if (pick < 0 || key > best) pick = static_cast<int>(i), best = key;
    }
    if (pick < 0) break;

    Box& box = boxes[pick];
    const int ch = box.widest().second;
    std::sort(box.bins.begin(), box.bins.end(), [ch](const Bin& a, const Bin& b) {
      return a.c[ch] != b.c[ch] ? a.c[ch] < b.c[ch] : packed(a.c) < packed(b.c);
    });
    const std::uint64_t total = box.population();
    std::uint64_t acc = 0;
    std::size_t cut = 1;
    for (std::size_t i = 0; i < box.bins.size(); ++i) {
      acc += box.bins[i].count;
      if (2 * acc >= total) {
        cut = i + 1;
        break;
      }
    }
    cut = std::clamp<std::size_t>(cut, 1, box.bins.size() - 1);
    Box upper{std::vector<Bin>(box.bins.begin() + static_cast<std::ptrdiff_t>(cut), box.bins.end())};
    box.bins.resize(cut);
    boxes.push_back(std::move(upper));
  }

  std::vector<PaletteColor> out;
  for (const auto& box : boxes) {
    double sum[3] = {0, 0, 0};
    const std::uint64_t n = box.population();
    for (const auto& b : box.bins) {
      for (int ch = 0; ch < 3; ++ch) sum[ch] += static_cast<double>(b.c[ch]) * static_cast<double>(b.count);
    }
    auto mean = [&](int ch) { return static_cast<std::uint8_t>(std::lround(sum[ch] / static_cast<double>(n))); };
    out.push_back({{mean(0), mean(1), mean(2), 255}, n});
  }
  std::sort(out.begin(), out.end(), [](const PaletteColor& a, const PaletteColor& b) {
    return a.population != b.population ? a.population > b.population : a.hex() < b.hex();
  });
  return out;
}

Raster render_palette(const std::vector<PaletteColor>& colors, int cell) {
  if (colors.empty() || cell <= 0) fail(ErrorCode::NonPositiveSize, "empty palette");
  Raster out(static_cast<int>(colors.size()) * cell, cell);
  for (std::size_t i = 0; i < colors.size(); ++i) {
    for (int y = 0; y < cell; ++y) {
      for (int x = 0; x < cell; ++x) out.set(static_cast<int>(i) * cell + x, y, colors[i].color);
    }
  }
  return out;
}

}  // namespace easel
