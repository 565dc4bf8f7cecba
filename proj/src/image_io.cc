// Copyright 2026 The occfilter Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "occfilter/image_io.h"

#include <jpeglib.h>
#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <vector>

namespace occfilter {

namespace {

// Samples in file order, `channels` per pixel, unscaled.
struct Decoded {
  int width = 0;
  int height = 0;
  int channels = 0;
  std::vector<float> samples;
};

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f != nullptr) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr OpenFile(const std::string& path, const char* mode) {
  FilePtr f(std::fopen(path.c_str(), mode));
  if (!f) throw ImageIoError("cannot open '" + path + "'");
  return f;
}

std::vector<unsigned char> ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ImageIoError("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---- PNG -------------------------------------------------------------------

struct PngRead {
  int width = 0;
  int height = 0;
  int channels = 0;
  int bit_depth = 0;
  std::vector<unsigned char> bytes;
};

// Returns false on a libpng error. Only plain data lives across setjmp.
bool ReadPngRaw(std::FILE* fp, PngRead* out) {
  png_structp png =
      png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    return false;
  }
  png_init_io(png, fp);
  png_read_info(png, info);
  const int color_type = png_get_color_type(png, info);
  const int depth = png_get_bit_depth(png, info);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && depth < 8) {
    png_set_expand_gray_1_2_4_to_8(png);
  }
  if (color_type & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  if (depth == 16 && std::endian::native == std::endian::little) {
    png_set_swap(png);
  }
  png_read_update_info(png, info);
  out->width = static_cast<int>(png_get_image_width(png, info));
  out->height = static_cast<int>(png_get_image_height(png, info));
  out->channels = png_get_channels(png, info);
  out->bit_depth = png_get_bit_depth(png, info);
  const std::size_t row_bytes = png_get_rowbytes(png, info);
  out->bytes.resize(row_bytes * out->height);
  for (int y = 0; y < out->height; ++y) {
    png_read_row(png, out->bytes.data() + row_bytes * y, nullptr);
  }
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return true;
}

Decoded DecodePng(const std::string& path) {
  FilePtr fp = OpenFile(path, "rb");
  PngRead raw;
  if (!ReadPngRaw(fp.get(), &raw)) {
    throw ImageIoError("'" + path + "': malformed PNG");
  }
  Decoded d{raw.width, raw.height, raw.channels, {}};
  const std::size_t n =
      static_cast<std::size_t>(raw.width) * raw.height * raw.channels;
  d.samples.resize(n);
  if (raw.bit_depth == 16) {
    for (std::size_t i = 0; i < n; ++i) {
      std::uint16_t v;
      std::memcpy(&v, raw.bytes.data() + 2 * i, 2);
      d.samples[i] = v;
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) d.samples[i] = raw.bytes[i];
  }
  return d;
}

bool WritePngRaw(std::FILE* fp, int width, int height, int color_type,
                 int bit_depth, const unsigned char* data,
                 std::size_t row_bytes) {
  png_structp png =
      png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (png == nullptr) return false;
  png_infop info = png_create_info_struct(png);
  if (info == nullptr) {
    png_destroy_write_struct(&png, nullptr);
    return false;
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    return false;
  }
  png_init_io(png, fp);
  png_set_IHDR(png, info, width, height, bit_depth, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  if (bit_depth == 16 && std::endian::native == std::endian::little) {
    png_set_swap(png);
  }
  for (int y = 0; y < height; ++y) {
    png_write_row(png, data + row_bytes * y);
  }
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return true;
}

// ---- JPEG ------------------------------------------------------------------

struct JpegError {
  jpeg_error_mgr mgr;
  std::jmp_buf jump;
};

void JpegErrorExit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegError*>(cinfo->err);
  std::longjmp(err->jump, 1);
}

bool ReadJpegRaw(std::FILE* fp, PngRead* out) {
  jpeg_decompress_struct cinfo;
  JpegError err;
  cinfo.err = jpeg_std_error(&err.mgr);
  err.mgr.error_exit = JpegErrorExit;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    return false;
  }
  jpeg_create_decompress(&cinfo);
  jpeg_stdio_src(&cinfo, fp);
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);
  out->width = static_cast<int>(cinfo.output_width);
  out->height = static_cast<int>(cinfo.output_height);
  out->channels = cinfo.output_components;
  out->bit_depth = 8;
  const std::size_t row_bytes =
      static_cast<std::size_t>(out->width) * out->channels;
  out->bytes.resize(row_bytes * out->height);
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = out->bytes.data() + row_bytes * cinfo.output_scanline;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return true;
}

Decoded DecodeJpeg(const std::string& path) {
  FilePtr fp = OpenFile(path, "rb");
  PngRead raw;
  if (!ReadJpegRaw(fp.get(), &raw)) {
    throw ImageIoError("'" + path + "': malformed JPEG");
  }
  return {raw.width, raw.height, raw.channels,
          std::vector<float>(raw.bytes.begin(), raw.bytes.end())};
}

// ---- Netpbm / PFM ----------------------------------------------------------

class HeaderReader {
 public:
  HeaderReader(const std::vector<unsigned char>& bytes, std::string path)
      : bytes_(bytes), path_(std::move(path)) {}

  std::string Token() {
    SkipSpaceAndComments();
    std::string tok;
    while (pos_ < bytes_.size() && !std::isspace(bytes_[pos_])) {
      tok.push_back(static_cast<char>(bytes_[pos_++]));
    }
    if (tok.empty()) throw ImageIoError("'" + path_ + "': truncated header");
    return tok;
  }
  long Number() {
    const std::string tok = Token();
    try {
      std::size_t used = 0;
      const long v = std::stol(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw ImageIoError("'" + path_ + "': bad header field '" + tok + "'");
    }
  }
  // Consumes the single whitespace byte that ends a binary header.
  void EndHeader() { ++pos_; }
  std::size_t pos() const { return pos_; }

 private:
  void SkipSpaceAndComments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<unsigned char>& bytes_;
  std::string path_;
  std::size_t pos_ = 0;
};

Decoded DecodeNetpbm(const std::string& path,
                     const std::vector<unsigned char>& bytes) {
  HeaderReader hdr(bytes, path);
  const std::string magic = hdr.Token();
  const bool ascii = magic == "P2" || magic == "P3";
  const int channels = (magic == "P3" || magic == "P6") ? 3 : 1;
  if (magic != "P2" && magic != "P3" && magic != "P5" && magic != "P6") {
    throw ImageIoError("'" + path + "': unsupported netpbm type " + magic);
  }
  const long width = hdr.Number();
  const long height = hdr.Number();
  const long maxval = hdr.Number();
  if (width <= 0 || height <= 0 || maxval <= 0 || maxval > 65535) {
    throw ImageIoError("'" + path + "': bad netpbm dimensions or maxval");
  }
  Decoded d{static_cast<int>(width), static_cast<int>(height), channels, {}};
  const std::size_t n = static_cast<std::size_t>(width) * height * channels;
  d.samples.resize(n);
  if (ascii) {
    for (std::size_t i = 0; i < n; ++i) d.samples[i] = hdr.Number();
    return d;
  }
  hdr.EndHeader();
  const int sample_bytes = maxval > 255 ? 2 : 1;
  if (bytes.size() < hdr.pos() + n * sample_bytes) {
    throw ImageIoError("'" + path + "': truncated pixel data");
  }
  const unsigned char* p = bytes.data() + hdr.pos();
  for (std::size_t i = 0; i < n; ++i) {
    d.samples[i] =
        sample_bytes == 2 ? float((p[2 * i] << 8) | p[2 * i + 1]) : float(p[i]);
  }
  return d;
}

Decoded DecodePfm(const std::string& path,
                  const std::vector<unsigned char>& bytes) {
  HeaderReader hdr(bytes, path);
  const std::string magic = hdr.Token();
  if (magic != "Pf") {
    throw ImageIoError("'" + path + "': only single-channel PFM is supported");
  }
  const long width = hdr.Number();
  const long height = hdr.Number();
  const double scale = std::stod(hdr.Token());
  hdr.EndHeader();
  if (width <= 0 || height <= 0 || scale == 0.0) {
    throw ImageIoError("'" + path + "': bad PFM header");
  }
  const bool little = scale < 0.0;
  const std::size_t n = static_cast<std::size_t>(width) * height;
  if (bytes.size() < hdr.pos() + 4 * n) {
    throw ImageIoError("'" + path + "': truncated PFM data");
  }
  Decoded d{static_cast<int>(width), static_cast<int>(height), 1, {}};
  d.samples.resize(n);
  const unsigned char* p = bytes.data() + hdr.pos();
  for (long row = 0; row < height; ++row) {
    const long y = height - 1 - row;
    for (long x = 0; x < width; ++x) {
      const unsigned char* s = p + 4 * (row * width + x);
      std::uint32_t bits = little ? (std::uint32_t(s[0]) | s[1] << 8 |
                                     s[2] << 16 | std::uint32_t(s[3]) << 24)
                                  : (std::uint32_t(s[3]) | s[2] << 8 |
                                     s[1] << 16 | std::uint32_t(s[0]) << 24);
      d.samples[y * width + x] = std::bit_cast<float>(bits);
    }
  }
  return d;
}

Decoded Decode(const std::string& path) {
  const std::vector<unsigned char> head = [&] {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ImageIoError("cannot open '" + path + "'");
    std::vector<unsigned char> h(8, 0);
    in.read(reinterpret_cast<char*>(h.data()), 8);
    h.resize(static_cast<std::size_t>(in.gcount()));
    return h;
  }();
  static constexpr unsigned char kPng[] = {0x89, 'P', 'N', 'G'};
  if (head.size() >= 4 && std::memcmp(head.data(), kPng, 4) == 0) {
    return DecodePng(path);
  }
  if (head.size() >= 2 && head[0] == 0xFF && head[1] == 0xD8) {
    return DecodeJpeg(path);
  }
  if (head.size() >= 2 && head[0] == 'P') {
    const std::vector<unsigned char> bytes = ReadAll(path);
    if (head[1] == 'f' || head[1] == 'F') return DecodePfm(path, bytes);
    return DecodeNetpbm(path, bytes);
  }
  throw ImageIoError("'" + path + "': unrecognised image format");
}

void WriteBytes(const std::string& path, const std::string& header,
                const std::vector<unsigned char>& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ImageIoError("cannot write '" + path + "'");
  out << header;
  out.write(reinterpret_cast<const char*>(body.data()),
            static_cast<std::streamsize>(body.size()));
  if (!out) throw ImageIoError("failed writing '" + path + "'");
}

}  // namespace

GrayImage ReadGray(const std::string& path) {
  Decoded d = Decode(path);
  if (d.channels == 1) return {d.width, d.height, std::move(d.samples)};
  // Colour input: keep the first channel only if all channels agree.
  GrayImage g{d.width, d.height, {}};
  g.values.resize(static_cast<std::size_t>(d.width) * d.height);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const float* px = d.samples.data() + i * d.channels;
    for (int c = 1; c < d.channels; ++c) {
      if (px[c] != px[0]) {
        throw ImageIoError("'" + path + "': expected a single-channel image");
      }
    }
    g.values[i] = px[0];
  }
  return g;
}

DepthMap LoadDepth(const std::string& path, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw ImageIoError("depth scale must be positive");
  }
  GrayImage g = ReadGray(path);
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    const double v = g.values[i] * scale;
    if (!std::isfinite(v) || v < 0.0) {
      throw ImageIoError("'" + path + "': depth at pixel " + std::to_string(i) +
                         " is negative or not finite");
    }
    g.values[i] = static_cast<float>(v);
  }
  return DepthMap(g.width, g.height, std::move(g.values));
}

void SaveDepthPgm(const std::string& path, const DepthMap& depth,
                  double scale) {
  std::vector<unsigned char> body(depth.size() * 2);
  std::span<const float> v = depth.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double q = std::round(v[i] / scale);
    if (!(q >= 0.0 && q <= 65535.0)) {
      throw ImageIoError("depth value does not fit a 16-bit PGM at scale " +
                         std::to_string(scale));
    }
    const auto s = static_cast<std::uint16_t>(q);
    body[2 * i] = static_cast<unsigned char>(s >> 8);
    body[2 * i + 1] = static_cast<unsigned char>(s & 0xFF);
  }
  WriteBytes(path,
             "P5\n" + std::to_string(depth.width()) + " " +
                 std::to_string(depth.height()) + "\n65535\n",
             body);
}

BinaryMask LoadMask(const std::string& path) {
  GrayImage g = ReadGray(path);
  BinaryMask mask(g.width, g.height);
  std::span<std::uint8_t> dst = mask.values();
  for (std::size_t i = 0; i < g.values.size(); ++i) {
    dst[i] = g.values[i] != 0.0f ? 1 : 0;
  }
  return mask;
}

void SaveMaskPgm(const std::string& path, const BinaryMask& mask) {
  std::vector<unsigned char> body(mask.size());
  std::span<const std::uint8_t> v = mask.values();
  for (std::size_t i = 0; i < v.size(); ++i) body[i] = v[i] ? 255 : 0;
  WriteBytes(path,
             "P5\n" + std::to_string(mask.width()) + " " +
                 std::to_string(mask.height()) + "\n255\n",
             body);
}

ScoreMap LoadScoreMap(const std::string& path, double scale) {
  GrayImage g = ReadGray(path);
  for (float& v : g.values) {
    v = static_cast<float>(v * scale);
    if (!std::isfinite(v)) {
      throw ImageIoError("'" + path + "': non-finite anomaly score");
    }
  }
  return ScoreMap(g.width, g.height, std::move(g.values));
}

void SaveScoreMapPfm(const std::string& path, const ScoreMap& scores) {
  const int w = scores.width();
  const int h = scores.height();
  std::vector<unsigned char> body(static_cast<std::size_t>(w) * h * 4);
  for (int row = 0; row < h; ++row) {
    std::span<const float> src = scores.row(h - 1 - row);
    for (int x = 0; x < w; ++x) {
      const auto bits = std::bit_cast<std::uint32_t>(src[x]);
      unsigned char* d =
          body.data() + 4 * (static_cast<std::size_t>(row) * w + x);
      d[0] = bits & 0xFF;
      d[1] = (bits >> 8) & 0xFF;
      d[2] = (bits >> 16) & 0xFF;
      d[3] = (bits >> 24) & 0xFF;
    }
  }
  WriteBytes(path,
             "Pf\n" + std::to_string(w) + " " + std::to_string(h) + "\n-1.0\n",
             body);
}

RgbImage LoadRgb(const std::string& path) {
  const Decoded d = Decode(path);
  RgbImage image(d.width, d.height);
  std::span<Rgb> dst = image.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    const float* px = d.samples.data() + i * d.channels;
    auto to8 = [&](float v) {
      return static_cast<std::uint8_t>(std::clamp(v, 0.0f, 255.0f));
    };
    dst[i] = d.channels >= 3 ? Rgb{to8(px[0]), to8(px[1]), to8(px[2])}
                             : Rgb{to8(px[0]), to8(px[0]), to8(px[0])};
  }
  return image;
}

void SaveRgbPng(const std::string& path, const RgbImage& image) {
  std::vector<unsigned char> bytes(image.size() * 3);
  std::span<const Rgb> v = image.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    bytes[3 * i] = v[i].r;
    bytes[3 * i + 1] = v[i].g;
    bytes[3 * i + 2] = v[i].b;
  }
  FilePtr fp = OpenFile(path, "wb");
  if (!WritePngRaw(fp.get(), image.width(), image.height(), PNG_COLOR_TYPE_RGB,
                   8, bytes.data(),
                   static_cast<std::size_t>(image.width()) * 3)) {
    throw ImageIoError("failed writing PNG '" + path + "'");
  }
}

void SaveGrayPng16(const std::string& path, int width, int height,
                   const std::vector<std::uint16_t>& values) {
  if (values.size() != static_cast<std::size_t>(width) * height) {
    throw ImageIoError("PNG sample count does not match dimensions");
  }
  std::vector<unsigned char> bytes(values.size() * 2);
  std::memcpy(bytes.data(), values.data(), bytes.size());
  FilePtr fp = OpenFile(path, "wb");
  if (!WritePngRaw(fp.get(), width, height, PNG_COLOR_TYPE_GRAY, 16,
                   bytes.data(), static_cast<std::size_t>(width) * 2)) {
    throw ImageIoError("failed writing PNG '" + path + "'");
  }
}

}  // namespace occfilter
