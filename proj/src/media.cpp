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

#include "easel/media.hpp"

#include <png.h>
// jpeglib.h needs size_t and FILE declared first.
#include <cstdio>
#include <jpeglib.h>

#include <csetjmp>
#include <cstring>

#include "easel/error.hpp"

namespace easel {

Raster::Raster(int width, int height, Rgba fill) : width_(width), height_(height) {
  if (width < 0 || height < 0) fail(ErrorCode::NonPositiveSize, "negative raster size");
  pixels_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 4);
  for (std::size_t i = 0; i < pixels_.size(); i += 4) {
    pixels_[i] = fill.r;
    pixels_[i + 1] = fill.g;
    pixels_[i + 2] = fill.b;
    pixels_[i + 3] = fill.a;
  }
}

Rgba Raster::at(int x, int y) const {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 4;
  return {pixels_[i], pixels_[i + 1], pixels_[i + 2], pixels_[i + 3]};
}

void Raster::set(int x, int y, Rgba c) {
  const std::size_t i = (static_cast<std::size_t>(y) * width_ + x) * 4;
  pixels_[i] = c.r;
  pixels_[i + 1] = c.g;
  pixels_[i + 2] = c.b;
  pixels_[i + 3] = c.a;
}

std::string_view to_string(MediaFormat f) {
  switch (f) {
    case MediaFormat::png: return "png";
    case MediaFormat::jpeg: return "jpeg";
    case MediaFormat::webp: return "webp";
    case MediaFormat::mp4: return "mp4";
    case MediaFormat::glb: return "glb";
  }
  return "unknown";
}

std::string_view mime_type(MediaFormat f) {
  switch (f) {
    case MediaFormat::png: return "image/png";
    case MediaFormat::jpeg: return "image/jpeg";
    case MediaFormat::webp: return "image/webp";
    case MediaFormat::mp4: return "video/mp4";
    case MediaFormat::glb: return "model/gltf-binary";
  }
  return "application/octet-stream";
}

std::string_view file_extension(MediaFormat f) {
  switch (f) {
    case MediaFormat::png: return "png";
    case MediaFormat::jpeg: return "jpg";
    case MediaFormat::webp: return "webp";
    case MediaFormat::mp4: return "mp4";
    case MediaFormat::glb: return "glb";
  }
  return "bin";
}

bool can_decode_pixels(MediaFormat f) { return f == MediaFormat::png || f == MediaFormat::jpeg; }

// ---------------------------------------------------------------------------
// Header sniffing

namespace {

std::uint32_t be32(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint32_t{b[at]} << 24) | (std::uint32_t{b[at + 1]} << 16) |
         (std::uint32_t{b[at + 2]} << 8) | std::uint32_t{b[at + 3]};
}
std::uint16_t be16(std::span<const std::uint8_t> b, std::size_t at) {
  return static_cast<std::uint16_t>((b[at] << 8) | b[at + 1]);
}
std::uint32_t le32(std::span<const std::uint8_t> b, std::size_t at) {
  return std::uint32_t{b[at]} | (std::uint32_t{b[at + 1]} << 8) | (std::uint32_t{b[at + 2]} << 16) |
         (std::uint32_t{b[at + 3]} << 24);
}
std::uint32_t le24(std::span<const std::uint8_t> b, std::size_t at) {
  return std::uint32_t{b[at]} | (std::uint32_t{b[at + 1]} << 8) | (std::uint32_t{b[at + 2]} << 16);
}
std::uint64_t be64(std::span<const std::uint8_t> b, std::size_t at) {
  return (std::uint64_t{be32(b, at)} << 32) | be32(b, at + 4);
}

bool has_prefix(std::span<const std::uint8_t> b, std::size_t at, std::string_view magic) {
  return b.size() >= at + magic.size() && std::memcmp(b.data() + at, magic.data(), magic.size()) == 0;
}

std::optional<MediaInfo> sniff_png(std::span<const std::uint8_t> b) {
  static constexpr std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  if (b.size() < 24 || std::memcmp(b.data(), sig, 8) != 0) return std::nullopt;
  if (!has_prefix(b, 12, "IHDR")) return std::nullopt;
  const int w = static_cast<int>(be32(b, 16));
  const int h = static_cast<int>(be32(b, 20));
  if (w <= 0 || h <= 0) return std::nullopt;
  return MediaInfo{MediaFormat::png, std::pair{w, h}, std::nullopt};
}

std::optional<MediaInfo> sniff_jpeg(std::span<const std::uint8_t> b) {
  if (b.size() < 4 || b[0] != 0xFF || b[1] != 0xD8) return std::nullopt;
  std::size_t i = 2;
  while (i + 4 <= b.size()) {
    if (b[i] != 0xFF) return std::nullopt;
    const std::uint8_t marker = b[i + 1];
    if (marker == 0xFF) {
      ++i;
      continue;
    }
    if (marker == 0xD8 || (marker >= 0xD0 && marker <= 0xD7) || marker == 0x01) {
      i += 2;
      continue;
    }
    const std::size_t len = be16(b, i + 2);
    if (len < 2) return std::nullopt;
    const bool sof = marker >= 0xC0 && marker <= 0xCF && marker != 0xC4 && marker != 0xC8 && marker != 0xCC;
    if (sof) {
      if (i + 9 > b.size()) return std::nullopt;
      const int h = be16(b, i + 5);
      const int w = be16(b, i + 7);
      if (w <= 0 || h <= 0) return std::nullopt;
      return MediaInfo{MediaFormat::jpeg, std::pair{w, h}, std::nullopt};
    }
    i += 2 + len;
  }
  return std::nullopt;
}

std::optional<MediaInfo> sniff_webp(std::span<const std::uint8_t> b) {
  if (b.size() < 30 || !has_prefix(b, 0, "RIFF") || !has_prefix(b, 8, "WEBP")) return std::nullopt;
  int w = 0, h = 0;
  if (has_prefix(b, 12, "VP8 ")) {
    if (b[23] != 0x9d || b[24] != 0x01 || b[25] != 0x2a) return std::nullopt;
    w = static_cast<int>((b[26] | (b[27] << 8)) & 0x3fff);
    h = static_cast<int>((b[28] | (b[29] << 8)) & 0x3fff);
  } else if (has_prefix(b, 12, "VP8L")) {
    if (b[20] != 0x2f) return std::nullopt;
    const std::uint32_t bits = le32(b, 21);
    w = static_cast<int>((bits & 0x3fff) + 1);
    h = static_cast<int>(((bits >> 14) & 0x3fff) + 1);
  } else if (has_prefix(b, 12, "VP8X")) {
    w = static_cast<int>(le24(b, 24) + 1);
    h = static_cast<int>(le24(b, 27) + 1);
  } else {
    return std::nullopt;
  }
  if (w <= 0 || h <= 0) return std::nullopt;
  return MediaInfo{MediaFormat::webp, std::pair{w, h}, std::nullopt};
}

struct Box {
  std::size_t body;  // offset of the payload
  std::size_t end;
  std::string type;
};

std::optional<Box> read_box(std::span<const std::uint8_t> b, std::size_t at, std::size_t limit) {
  if (at + 8 > limit) return std::nullopt;
  std::uint64_t size = be32(b, at);
  std::size_t header = 8;
  if (size == 1) {
    if (at + 16 > limit) return std::nullopt;
    size = be64(b, at + 8);
    header = 16;
  } else if (size == 0) {
    size = limit - at;
  }
  if (size < header || at + size > limit) return std::nullopt;
  return Box{at + header, static_cast<std::size_t>(at + size),
             std::string(reinterpret_cast<const char*>(b.data() + at + 4), 4)};
}

std::optional<Box> find_child(std::span<const std::uint8_t> b, std::size_t from, std::size_t to,
                              std::string_view type) {
  std::size_t at = from;
  while (auto box = read_box(b, at, to)) {
    if (box->type == type) return box;
    at = box->end;
  }
  return std::nullopt;
}

std::optional<MediaInfo> sniff_mp4(std::span<const std::uint8_t> b) {
  auto ftyp = read_box(b, 0, b.size());
  if (!ftyp || ftyp->type != "ftyp") return std::nullopt;
  MediaInfo info{MediaFormat::mp4, std::nullopt, std::nullopt};
  auto moov = find_child(b, ftyp->end, b.size(), "moov");
  if (!moov) return std::nullopt;
  if (auto mvhd = find_child(b, moov->body, moov->end, "mvhd")) {
    const std::size_t p = mvhd->body;
    if (p + 4 > mvhd->end) return std::nullopt;
    const int version = b[p];
    std::uint64_t timescale = 0, duration = 0;
    if (version == 1 && p + 32 <= mvhd->end) {
      timescale = be32(b, p + 20);
      duration = be64(b, p + 24);
    } else if (version == 0 && p + 20 <= mvhd->end) {
      timescale = be32(b, p + 12);
      duration = be32(b, p + 16);
    } else {
      return std::nullopt;
    }
    if (timescale > 0) info.duration_seconds = static_cast<double>(duration) / static_cast<double>(timescale);
  }
  std::size_t at = moov->body;
  while (auto trak = find_child(b, at, moov->end, "trak")) {
    if (auto tkhd = find_child(b, trak->body, trak->end, "tkhd")) {
      // width and height are the trailing two 16.16 fixed-point fields.
      if (tkhd->end >= tkhd->body + 8) {
        const int w = static_cast<int>(be32(b, tkhd->end - 8) >> 16);
        const int h = static_cast<int>(be32(b, tkhd->end - 4) >> 16);
        if (w > 0 && h > 0) {
          info.dims = std::pair{w, h};
          break;
        }
      }
    }
    at = trak->end;
  }
  return info;
}

std::optional<MediaInfo> sniff_glb(std::span<const std::uint8_t> b) {
  if (b.size() < 20 || !has_prefix(b, 0, "glTF")) return std::nullopt;
  if (le32(b, 4) != 2 || le32(b, 8) != b.size()) return std::nullopt;
  return MediaInfo{MediaFormat::glb, std::nullopt, std::nullopt};
}

}  // namespace

std::optional<MediaInfo> sniff_media(std::span<const std::uint8_t> bytes) {
  if (auto m = sniff_png(bytes)) return m;
  if (auto m = sniff_jpeg(bytes)) return m;
  if (auto m = sniff_webp(bytes)) return m;
  if (auto m = sniff_glb(bytes)) return m;
  if (auto m = sniff_mp4(bytes)) return m;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// PNG

namespace {

void png_append(png_structp png, png_bytep data, png_size_t len) {
  auto* out = static_cast<Bytes*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + len);
}

void png_flush_noop(png_structp) {}

struct PngReader {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
};

void png_consume(png_structp png, png_bytep out, png_size_t len) {
  auto* r = static_cast<PngReader*>(png_get_io_ptr(png));
  if (r->offset + len > r->bytes.size()) png_error(png, "truncated PNG");
  std::memcpy(out, r->bytes.data() + r->offset, len);
  r->offset += len;
}

// Returns false on libpng error. All C++ objects touched after setjmp live in
// the caller so longjmp never skips a destructor.
bool write_png_rows(Bytes& out, int width, int height, int color_type, int channels,
                    const std::uint8_t* pixels, const std::vector<png_text>& text) {
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_set_write_fn(png, &out, png_append, png_flush_noop);
  png_set_compression_level(png, 6);
  png_set_filter(png, PNG_FILTER_TYPE_BASE, PNG_FILTER_NONE);
  png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  if (!text.empty()) png_set_text(png, info, const_cast<png_text*>(text.data()), static_cast<int>(text.size()));
  png_write_info(png, info);
  const std::size_t stride = static_cast<std::size_t>(width) * channels;
  for (int y = 0; y < height; ++y) {
    png_write_row(png, const_cast<png_bytep>(pixels + stride * y));
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

}  // namespace

Bytes encode_png(const Raster& image, const PngText& text) {
  if (image.empty()) fail(ErrorCode::NonPositiveSize, "cannot encode an empty raster");
  std::vector<png_text> chunks;
  for (const auto& [k, v] : text) {
    png_text t{};
    t.compression = PNG_TEXT_COMPRESSION_NONE;
    t.key = const_cast<char*>(k.c_str());
    t.text = const_cast<char*>(v.c_str());
    t.text_length = v.size();
    chunks.push_back(t);
  }
  Bytes out;
  if (!write_png_rows(out, image.width(), image.height(), PNG_COLOR_TYPE_RGBA, 4, image.data().data(), chunks)) {
    fail(ErrorCode::Io, "PNG encoding failed");
  }
  return out;
}

Bytes encode_png_gray(const GrayImage& image) {
  if (image.width <= 0 || image.height <= 0) fail(ErrorCode::NonPositiveSize, "cannot encode an empty image");
  Bytes out;
  if (!write_png_rows(out, image.width, image.height, PNG_COLOR_TYPE_GRAY, 1, image.pixels.data(), {})) {
    fail(ErrorCode::Io, "PNG encoding failed");
  }
  return out;
}

namespace {

bool read_png(PngReader& reader, int& width, int& height, std::vector<std::uint8_t>& pixels, PngText* text_out,
              bool pixels_wanted) {
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) return false;
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  std::vector<png_bytep> rows;
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_set_read_fn(png, &reader, png_consume);
  png_read_info(png, info);
  if (text_out) {
    png_textp texts = nullptr;
    int n = 0;
    png_get_text(png, info, &texts, &n);
    for (int i = 0; i < n; ++i) (*text_out)[texts[i].key] = std::string(texts[i].text, texts[i].text_length);
  }
  if (pixels_wanted) {
    png_set_expand(png);
    png_set_strip_16(png);
    png_set_gray_to_rgb(png);
    png_set_add_alpha(png, 0xFF, PNG_FILLER_AFTER);
    png_set_interlace_handling(png);
    png_read_update_info(png, info);
    width = static_cast<int>(png_get_image_width(png, info));
    height = static_cast<int>(png_get_image_height(png, info));
    pixels.resize(static_cast<std::size_t>(width) * height * 4);
    rows.resize(static_cast<std::size_t>(height));
    for (int y = 0; y < height; ++y) rows[y] = pixels.data() + static_cast<std::size_t>(y) * width * 4;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

struct JpegError {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegError*>(cinfo->err);
  std::longjmp(err->jump, 1);
}

void jpeg_silence(j_common_ptr) {}

bool read_jpeg(std::span<const std::uint8_t> bytes, int& width, int& height, std::vector<std::uint8_t>& rgb) {
  jpeg_decompress_struct cinfo{};
  JpegError err{};
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = jpeg_error_exit;
  err.mgr.output_message = jpeg_silence;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  width = static_cast<int>(cinfo.output_width);
  height = static_cast<int>(cinfo.output_height);
  rgb.resize(static_cast<std::size_t>(width) * height * 3);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = rgb.data() + static_cast<std::size_t>(cinfo.output_scanline) * width * 3;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

}  // namespace

Raster decode_image(std::span<const std::uint8_t> bytes) {
  auto info = sniff_media(bytes);
  if (!info || !can_decode_pixels(info->format)) {
    fail(ErrorCode::UndecodablePayload, "pixel decoding needs PNG or JPEG input");
  }
  int w = 0, h = 0;
  if (info->format == MediaFormat::png) {
    PngReader reader{bytes};
    std::vector<std::uint8_t> px;
    if (!read_png(reader, w, h, px, nullptr, true)) fail(ErrorCode::UndecodablePayload, "corrupt PNG");
    Raster out(w, h);
    std::memcpy(out.data().data(), px.data(), px.size());
    return out;
  }
  std::vector<std::uint8_t> rgb;
  if (!read_jpeg(bytes, w, h, rgb)) fail(ErrorCode::UndecodablePayload, "corrupt JPEG");
  Raster out(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t i = (static_cast<std::size_t>(y) * w + x) * 3;
      out.set(x, y, {rgb[i], rgb[i + 1], rgb[i + 2], 255});
    }
  }
  return out;
}

PngText read_png_text(std::span<const std::uint8_t> bytes) {
  PngText text;
  PngReader reader{bytes};
  int w = 0, h = 0;
  std::vector<std::uint8_t> unused;
  if (!read_png(reader, w, h, unused, &text, false)) fail(ErrorCode::UndecodablePayload, "corrupt PNG");
  return text;
}

// ---------------------------------------------------------------------------
// Stub containers

namespace {

void put_be32(Bytes& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v >> 24));
  b.push_back(static_cast<std::uint8_t>(v >> 16));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v));
}
void put_le32(Bytes& b, std::uint32_t v) {
  b.push_back(static_cast<std::uint8_t>(v));
  b.push_back(static_cast<std::uint8_t>(v >> 8));
  b.push_back(static_cast<std::uint8_t>(v >> 16));
  b.push_back(static_cast<std::uint8_t>(v >> 24));
}
void put_tag(Bytes& b, std::string_view tag) { b.insert(b.end(), tag.begin(), tag.end()); }

Bytes box(std::string_view type, const Bytes& body) {
  Bytes b;
  put_be32(b, static_cast<std::uint32_t>(body.size() + 8));
  put_tag(b, type);
  b.insert(b.end(), body.begin(), body.end());
  return b;
}

void put_identity_matrix(Bytes& b) {
  const std::uint32_t m[9] = {0x00010000, 0, 0, 0, 0x00010000, 0, 0, 0, 0x40000000};
  for (auto v : m) put_be32(b, v);
}

}  // namespace

Bytes encode_stub_mp4(int width, int height, double duration_seconds, std::string_view tag) {
  constexpr std::uint32_t timescale = 1000;
  const auto duration = static_cast<std::uint32_t>(duration_seconds * timescale + 0.5);

  Bytes ftyp;
  put_tag(ftyp, "isom");
  put_be32(ftyp, 0x200);
  put_tag(ftyp, "isomiso2mp41");

  Bytes mvhd;
  put_be32(mvhd, 0);  // version 0, flags
  put_be32(mvhd, 0);  // creation time
  put_be32(mvhd, 0);  // modification time
  put_be32(mvhd, timescale);
  put_be32(mvhd, duration);
  put_be32(mvhd, 0x00010000);  // rate 1.0
  mvhd.push_back(0x01);        // volume 1.0
  mvhd.push_back(0x00);
  for (int i = 0; i < 10; ++i) mvhd.push_back(0);
  put_identity_matrix(mvhd);
  for (int i = 0; i < 6; ++i) put_be32(mvhd, 0);
  put_be32(mvhd, 2);  // next track id

  Bytes tkhd;
  put_be32(tkhd, 0x00000003);  // version 0, enabled | in movie
  put_be32(tkhd, 0);
  put_be32(tkhd, 0);
  put_be32(tkhd, 1);  // track id
  put_be32(tkhd, 0);
  put_be32(tkhd, duration);
  put_be32(tkhd, 0);
  put_be32(tkhd, 0);
  put_be32(tkhd, 0);  // layer, alternate group
  put_be32(tkhd, 0);  // volume, reserved
  put_identity_matrix(tkhd);
  put_be32(tkhd, static_cast<std::uint32_t>(width) << 16);
  put_be32(tkhd, static_cast<std::uint32_t>(height) << 16);

  Bytes trak = box("tkhd", tkhd);
  Bytes moov_body = box("mvhd", mvhd);
  Bytes trak_box = box("trak", trak);
  moov_body.insert(moov_body.end(), trak_box.begin(), trak_box.end());

  Bytes out = box("ftyp", ftyp);
  Bytes moov = box("moov", moov_body);
  out.insert(out.end(), moov.begin(), moov.end());
  Bytes free_body(tag.begin(), tag.end());
  Bytes free_box = box("free", free_body);
  out.insert(out.end(), free_box.begin(), free_box.end());
  return out;
}

Bytes encode_stub_glb(std::string_view json_chunk) {
  std::string chunk(json_chunk);
  while (chunk.size() % 4 != 0) chunk.push_back(' ');
  Bytes out;
  put_tag(out, "glTF");
  put_le32(out, 2);
  put_le32(out, static_cast<std::uint32_t>(12 + 8 + chunk.size()));
  put_le32(out, static_cast<std::uint32_t>(chunk.size()));
  put_tag(out, "JSON");
  out.insert(out.end(), chunk.begin(), chunk.end());
  return out;
}

}  // namespace easel
