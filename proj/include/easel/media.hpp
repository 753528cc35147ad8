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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "easel/ids.hpp"

namespace easel {

struct Rgba {
  std::uint8_t r = 0, g = 0, b = 0, a = 0;
  friend bool operator==(const Rgba&, const Rgba&) = default;
};

// Straight (non-premultiplied) RGBA8 image, row-major.
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, Rgba fill = {});

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return width_ == 0 || height_ == 0; }

  Rgba at(int x, int y) const;
  void set(int x, int y, Rgba c);

  std::span<const std::uint8_t> data() const noexcept { return pixels_; }
  std::span<std::uint8_t> data() noexcept { return pixels_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> pixels_;
};

// 8-bit single channel image.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;
};

enum class MediaFormat { png, jpeg, webp, mp4, glb };

std::string_view to_string(MediaFormat f);
std::string_view mime_type(MediaFormat f);
std::string_view file_extension(MediaFormat f);

struct MediaInfo {
  MediaFormat format;
  std::optional<std::pair<int, int>> dims;
  std::optional<double> duration_seconds;
};

// Header-level inspection. Returns nullopt when the bytes match no supported
// container or the header is truncated/inconsistent.
std::optional<MediaInfo> sniff_media(std::span<const std::uint8_t> bytes);

using PngText = std::map<std::string, std::string>;

// Deterministic PNG encoding (fixed zlib level and filter, no time chunk).
Bytes encode_png(const Raster& image, const PngText& text = {});
Bytes encode_png_gray(const GrayImage& image);

// Full pixel decode of PNG or JPEG into RGBA8. Throws UndecodablePayload for
// other formats or corrupt data.
Raster decode_image(std::span<const std::uint8_t> bytes);
bool can_decode_pixels(MediaFormat f);

PngText read_png_text(std::span<const std::uint8_t> bytes);

// Minimal ISO-BMFF container (ftyp + moov/mvhd + trak/tkhd) carrying no
// samples. The mock backend emits these so video assets have real dims and
// duration that the sniffer can read back.
Bytes encode_stub_mp4(int width, int height, double duration_seconds, std::string_view tag);

// Binary glTF 2.0 container with only a JSON chunk.
Bytes encode_stub_glb(std::string_view json_chunk);

}  // namespace easel
