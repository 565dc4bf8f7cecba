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

#ifndef OCCFILTER_RASTER_H_
#define OCCFILTER_RASTER_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace occfilter {

// Dense row-major single-plane raster. The Tag parameter keeps rasters with
// different meanings (depth, depth change, scores, masks) from mixing.
template <typename T, typename Tag>
class Raster {
 public:
  using value_type = T;

  Raster() = default;
  Raster(int width, int height, T fill = T{}) : width_(width), height_(height) {
    if (width < 0 || height < 0) {
      throw std::invalid_argument("raster dimensions must be non-negative");
    }
    values_.assign(static_cast<std::size_t>(width) * height, fill);
  }
  Raster(int width, int height, std::vector<T> values)
      : width_(width), height_(height), values_(std::move(values)) {
    if (width < 0 || height < 0 ||
        values_.size() != static_cast<std::size_t>(width) * height) {
      throw std::invalid_argument("raster value count " +
                                  std::to_string(values_.size()) +
                                  " does not match " + std::to_string(width) +
                                  "x" + std::to_string(height));
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  T& at(int x, int y) { return values_[Index(x, y)]; }
  const T& at(int x, int y) const { return values_[Index(x, y)]; }

  std::span<T> row(int y) {
    return {values_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }
  std::span<const T> row(int y) const {
    return {values_.data() + static_cast<std::size_t>(y) * width_,
            static_cast<std::size_t>(width_)};
  }

  std::span<T> values() { return values_; }
  std::span<const T> values() const { return values_; }

  // Moves the storage out, leaving an empty raster.
  std::vector<T> Release() && {
    width_ = 0;
    height_ = 0;
    return std::move(values_);
  }

  bool SameShape(int width, int height) const {
    return width_ == width && height_ == height;
  }
  template <typename U, typename OtherTag>
  bool SameShape(const Raster<U, OtherTag>& other) const {
    return SameShape(other.width(), other.height());
  }

  friend bool operator==(const Raster& a, const Raster& b) {
    return a.width_ == b.width_ && a.height_ == b.height_ &&
           a.values_ == b.values_;
  }

 private:
  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> values_;
};

struct DepthTag {};
struct DepthChangeTag {};
struct ScoreTag {};
struct MaskTag {};
struct ImageTag {};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Non-negative depth in caller-defined units (disparity or metric).
using DepthMap = Raster<float, DepthTag>;
// Signed vertical depth derivative, same shape as its source DepthMap.
using DepthChangeMap = Raster<float, DepthChangeTag>;
// Per-pixel anomaly scores.
using ScoreMap = Raster<float, ScoreTag>;
// 0 / 1 per pixel.
using BinaryMask = Raster<std::uint8_t, MaskTag>;
using RgbImage = Raster<Rgb, ImageTag>;

}  // namespace occfilter

#endif  // OCCFILTER_RASTER_H_
