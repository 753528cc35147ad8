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

#include "easel/raster_ops.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include "easel/error.hpp"

namespace easel {

void to_json(json& j, const Rect& r) { j = json{{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}}; }
void from_json(const json& j, Rect& r) {
  r = {j.at("x").get<double>(), j.at("y").get<double>(), j.at("w").get<double>(), j.at("h").get<double>()};
}

void to_json(json& j, const Stroke& s) {
  j = json{{"points", s.points},
           {"width", s.width},
           {"color", json::array({s.color.r, s.color.g, s.color.b, s.color.a})}};
}
void from_json(const json& j, Stroke& s) {
  s.points = j.at("points").get<std::vector<Vec2>>();
  s.width = j.at("width").get<double>();
  const auto& c = j.at("color");
  s.color = {c.at(0).get<std::uint8_t>(), c.at(1).get<std::uint8_t>(), c.at(2).get<std::uint8_t>(),
             c.size() > 3 ? c.at(3).get<std::uint8_t>() : std::uint8_t{255}};
}

namespace {

std::pair<int, int> output_size(const Rect& r) {
  const int w = static_cast<int>(std::lround(r.w));
  const int h = static_cast<int>(std::lround(r.h));
  if (!(r.w > 0) || !(r.h > 0) || w <= 0 || h <= 0) fail(ErrorCode::NonPositiveSize, "canvas rect must be positive");
  return {w, h};
}

struct Premul {
  double r = 0, g = 0, b = 0, a = 0;
};

Premul premultiply(Rgba c) {
  const double a = c.a / 255.0;
  return {c.r * a / 255.0, c.g * a / 255.0, c.b * a / 255.0, a};
}

void over(Premul& dst, const Premul& src) {
  const double k = 1.0 - src.a;
  dst.r = src.r + dst.r * k;
  dst.g = src.g + dst.g * k;
  dst.b = src.b + dst.b * k;
  dst.a = src.a + dst.a * k;
}

std::uint8_t to_byte(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v * 255.0), 0L, 255L)); }

Raster unpremultiply(const std::vector<Premul>& acc, int w, int h) {
  Raster out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Premul& p = acc[static_cast<std::size_t>(y) * w + x];
      const std::uint8_t a = to_byte(p.a);
      if (a == 0) {
        out.set(x, y, {0, 0, 0, 0});
      } else {
        out.set(x, y, {to_byte(p.r / p.a), to_byte(p.g / p.a), to_byte(p.b / p.a), a});
      }
    }
  }
  return out;
}

Premul sample_nearest(const Raster& img, double sx, double sy) {
  const int x = static_cast<int>(std::floor(sx + 0.5));
  const int y = static_cast<int>(std::floor(sy + 0.5));
  if (x < 0 || y < 0 || x >= img.width() || y >= img.height()) return {};
  return premultiply(img.at(x, y));
}

Premul sample_bilinear(const Raster& img, double sx, double sy) {
  if (sx < -0.5 || sy < -0.5 || sx > img.width() - 0.5 || sy > img.height() - 0.5) return {};
  const double fx = std::clamp(sx, 0.0, img.width() - 1.0);
  const double fy = std::clamp(sy, 0.0, img.height() - 1.0);
  const int x0 = static_cast<int>(std::floor(fx));
  const int y0 = static_cast<int>(std::floor(fy));
  const int x1 = std::min(x0 + 1, img.width() - 1);
  const int y1 = std::min(y0 + 1, img.height() - 1);
  const double tx = fx - x0, ty = fy - y0;
  auto lerp = [](const Premul& a, const Premul& b, double t) {
    return Premul{a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t, a.a + (b.a - a.a) * t};
  };
  const Premul top = lerp(premultiply(img.at(x0, y0)), premultiply(img.at(x1, y0)), tx);
  const Premul bottom = lerp(premultiply(img.at(x0, y1)), premultiply(img.at(x1, y1)), tx);
  return lerp(top, bottom, ty);
}

}  // namespace

Raster flatten_collage(std::vector<CollageLayer> layers, const Rect& canvas) {
  if (layers.empty()) fail(ErrorCode::EmptyLayerList, "collage needs at least one layer");
  const auto [w, h] = output_size(canvas);
  for (const auto& l : layers) {
    if (!(l.transform.scale > 0)) fail(ErrorCode::OutOfRange, "layer scale must be positive");
  }
  std::stable_sort(layers.begin(), layers.end(), [](const CollageLayer& a, const CollageLayer& b) {
    return std::tie(a.transform.z, a.asset, a.transform.position.x, a.transform.position.y, a.transform.scale) <
           std::tie(b.transform.z, b.asset, b.transform.position.x, b.transform.position.y, b.transform.scale);
  });

  std::vector<Premul> acc(static_cast<std::size_t>(w) * h);
  for (const auto& layer : layers) {
    const double s = layer.transform.scale;
    const double ox = layer.transform.position.x - canvas.x;
    const double oy = layer.transform.position.y - canvas.y;
    const bool nearest = s <= 2.0;
    const int x_begin = std::max(0, static_cast<int>(std::floor(ox)));
    const int y_begin = std::max(0, static_cast<int>(std::floor(oy)));
    const int x_end = std::min(w, static_cast<int>(std::ceil(ox + layer.image.width() * s)));
    const int y_end = std::min(h, static_cast<int>(std::ceil(oy + layer.image.height() * s)));
    for (int y = y_begin; y < y_end; ++y) {
      for (int x = x_begin; x < x_end; ++x) {
        // Destination pixel centre mapped into source pixel coordinates.
        const double sx = (x + 0.5 - ox) / s - 0.5;
        const double sy = (y + 0.5 - oy) / s - 0.5;
        const Premul src = nearest ? sample_nearest(layer.image, sx, sy) : sample_bilinear(layer.image, sx, sy);
        if (src.a > 0) over(acc[static_cast<std::size_t>(y) * w + x], src);
      }
    }
  }
  return unpremultiply(acc, w, h);
}

namespace {

double distance_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const double dx = b.x - a.x, dy = b.y - a.y;
  const double len2 = dx * dx + dy * dy;
  double t = 0;
  if (len2 > 0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
  const double cx = a.x + t * dx - p.x, cy = a.y + t * dy - p.y;
  return std::sqrt(cx * cx + cy * cy);
}

}  // namespace

Raster rasterize_strokes(std::span<const Stroke> strokes, const Rect& rect) {
  const auto [w, h] = output_size(rect);
  std::vector<Premul> acc(static_cast<std::size_t>(w) * h);
  for (const auto& stroke : strokes) {
    if (stroke.points.empty() || !(stroke.width > 0)) continue;
    const double radius = stroke.width / 2.0;
    double min_x = stroke.points[0].x, max_x = min_x, min_y = stroke.points[0].y, max_y = min_y;
    for (const auto& p : stroke.points) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
    const int x0 = std::max(0, static_cast<int>(std::floor(min_x - radius - rect.x)) - 1);
    const int x1 = std::min(w, static_cast<int>(std::ceil(max_x + radius - rect.x)) + 1);
    const int y0 = std::max(0, static_cast<int>(std::floor(min_y - radius - rect.y)) - 1);
    const int y1 = std::min(h, static_cast<int>(std::ceil(max_y + radius - rect.y)) + 1);
    const Premul src = premultiply(stroke.color);
    for (int y = y0; y < y1; ++y) {
      for (int x = x0; x < x1; ++x) {
        const Vec2 p{rect.x + x + 0.5, rect.y + y + 0.5};
        bool covered = false;
        if (stroke.points.size() == 1) {
          covered = distance_to_segment(p, stroke.points[0], stroke.points[0]) <= radius;
        }
        for (std::size_t i = 1; i < stroke.points.size() && !covered; ++i) {
          covered = distance_to_segment(p, stroke.points[i - 1], stroke.points[i]) <= radius;
        }
        if (covered) over(acc[static_cast<std::size_t>(y) * w + x], src);
      }
    }
  }
  return unpremultiply(acc, w, h);
}

}  // namespace easel
