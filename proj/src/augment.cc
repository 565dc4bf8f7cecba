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

#include "occfilter/augment.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <utility>

#include "random_util.h"

namespace occfilter {

namespace {

using internal::UnitUniform;

// Copies `src` scaled to sw x sh into `dst` at (ox, oy), nearest neighbour.
void BlitScaled(const RgbImage& src, int sw, int sh, int ox, int oy,
                RgbImage& dst) {
  const double sx = static_cast<double>(src.width()) / sw;
  const double sy = static_cast<double>(src.height()) / sh;
  for (int v = 0; v < sh; ++v) {
    const int y = oy + v;
    if (y < 0 || y >= dst.height()) continue;
    const int src_y = std::min(src.height() - 1, int((v + 0.5) * sy));
    for (int u = 0; u < sw; ++u) {
      const int x = ox + u;
      if (x < 0 || x >= dst.width()) continue;
      const int src_x = std::min(src.width() - 1, int((u + 0.5) * sx));
      dst.at(x, y) = src.at(src_x, src_y);
    }
  }
}

std::optional<Annotation> TransformAnnotation(const Annotation& a, double sx,
                                              double sy, double ox, double oy,
                                              const BoundingBox& clip) {
  Annotation out = a;
  out.box = Intersection({a.box.x1 * sx + ox, a.box.y1 * sy + oy,
                          a.box.x2 * sx + ox, a.box.y2 * sy + oy},
                         clip);
  if (BoxArea(out.box) < 1.0) return std::nullopt;
  return out;
}

}  // namespace

LabelSpaceMap::LabelSpaceMap(LabelSpace space) : space_(std::move(space)) {}

LabelSpaceMap LabelSpaceMap::FromVocabulary(
    LabelSpace space, std::span<const std::string> vocabulary) {
  LabelSpaceMap map(std::move(space));
  for (const std::string& name : vocabulary) {
    const std::optional<int> known = map.space_.Find(name);
    map.entries_[name] = known.value_or(kOodLabel);
  }
  return map;
}

void LabelSpaceMap::Add(const std::string& source, const std::string& target) {
  const std::optional<int> label = space_.Find(target);
  if (!label.has_value()) {
    throw std::invalid_argument("label map target '" + target +
                                "' is not in the label space");
  }
  entries_[source] = *label;
}

int LabelSpaceMap::Resolve(const std::string& source) const {
  const auto it = entries_.find(source);
  if (it == entries_.end()) {
    throw std::out_of_range("unmapped source label '" + source + "'");
  }
  return it->second;
}

bool LabelSpaceMap::Contains(const std::string& source) const {
  return entries_.contains(source);
}

LabeledImage RemapLabels(const LabeledImage& image, const LabelSpaceMap& map) {
  LabeledImage out = image;
  for (Annotation& a : out.annotations) a.label = map.Resolve(a.source_label);
  return out;
}

LabeledImage MosaicPlus(std::span<const LabeledImage, 2> driving,
                        std::span<const LabeledImage, 2> auxiliary,
                        CanvasSize canvas, std::uint64_t seed,
                        MosaicLayout* layout) {
  if (canvas.width < 2 || canvas.height < 2) {
    throw std::invalid_argument("mosaic canvas must be at least 2x2");
  }
  const std::array<const LabeledImage*, 4> inputs = {
      &driving[0], &driving[1], &auxiliary[0], &auxiliary[1]};
  for (const LabeledImage* in : inputs) {
    if (in->pixels.empty()) {
      throw std::invalid_argument("mosaic input image '" + in->source +
                                  "' is empty");
    }
  }

  std::mt19937_64 rng(seed);
  const int cx =
      std::clamp(static_cast<int>(std::lround(canvas.width *
                                              (0.25 + 0.5 * UnitUniform(rng)))),
                 1, canvas.width - 1);
  const int cy =
      std::clamp(static_cast<int>(std::lround(canvas.height *
                                              (0.25 + 0.5 * UnitUniform(rng)))),
                 1, canvas.height - 1);
  std::array<int, 4> order = {0, 1, 2, 3};
  for (int i = 3; i > 0; --i) {
    const int j = internal::UniformInt(rng, 0, i);
    std::swap(order[i], order[j]);
  }

  LabeledImage out;
  out.pixels = RgbImage(canvas.width, canvas.height, kMosaicFill);
  out.source = "mosaic+";
  const BoundingBox canvas_box{0, 0, double(canvas.width),
                               double(canvas.height)};
  MosaicLayout placed{cx, cy, order, {}};

  for (int q = 0; q < 4; ++q) {
    const LabeledImage& tile = *inputs[order[q]];
    const bool right = q % 2 == 1;
    const bool bottom = q >= 2;
    const int qw = right ? canvas.width - cx : cx;
    const int qh = bottom ? canvas.height - cy : cy;
    const double scale =
        std::min(static_cast<double>(qw) / tile.pixels.width(),
                 static_cast<double>(qh) / tile.pixels.height());
    const int sw = std::clamp(
        static_cast<int>(std::floor(tile.pixels.width() * scale)), 1, qw);
    const int sh = std::clamp(
        static_cast<int>(std::floor(tile.pixels.height() * scale)), 1, qh);
    const int ox = right ? cx : cx - sw;
    const int oy = bottom ? cy : cy - sh;
    BlitScaled(tile.pixels, sw, sh, ox, oy, out.pixels);

    const BoundingBox rect{double(ox), double(oy), double(ox + sw),
                           double(oy + sh)};
    placed.tile_rects[q] = rect;
    const double sx = static_cast<double>(sw) / tile.pixels.width();
    const double sy = static_cast<double>(sh) / tile.pixels.height();
    const BoundingBox clip = Intersection(rect, canvas_box);
    for (const Annotation& a : tile.annotations) {
      if (auto t = TransformAnnotation(a, sx, sy, ox, oy, clip)) {
        out.annotations.push_back(std::move(*t));
      }
    }
  }
  if (layout != nullptr) *layout = placed;
  return out;
}

LabeledImage ResizeLabeled(const LabeledImage& image, int width, int height) {
  if (width < 1 || height < 1) {
    throw std::invalid_argument("resize target must be at least 1x1");
  }
  if (image.pixels.SameShape(width, height)) return image;
  LabeledImage out;
  out.source = image.source;
  out.pixels = RgbImage(width, height);
  BlitScaled(image.pixels, width, height, 0, 0, out.pixels);
  const double sx = static_cast<double>(width) / image.pixels.width();
  const double sy = static_cast<double>(height) / image.pixels.height();
  const BoundingBox clip{0, 0, double(width), double(height)};
  for (const Annotation& a : image.annotations) {
    if (auto t = TransformAnnotation(a, sx, sy, 0.0, 0.0, clip)) {
      out.annotations.push_back(std::move(*t));
    }
  }
  return out;
}

LabeledImage MixupBlend(const LabeledImage& composite,
                        const LabeledImage& other, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw std::invalid_argument("mixup lambda must lie in [0, 1]");
  }
  const LabeledImage resized =
      ResizeLabeled(other, composite.pixels.width(), composite.pixels.height());
  LabeledImage out;
  out.source = composite.source;
  out.pixels = RgbImage(composite.pixels.width(), composite.pixels.height());
  auto blend = [lambda](std::uint8_t a, std::uint8_t b) {
    const double v = lambda * a + (1.0 - lambda) * b;
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
  };
  std::span<const Rgb> a = composite.pixels.values();
  std::span<const Rgb> b = resized.pixels.values();
  std::span<Rgb> dst = out.pixels.values();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = {blend(a[i].r, b[i].r), blend(a[i].g, b[i].g),
              blend(a[i].b, b[i].b)};
  }
  out.annotations = composite.annotations;
  out.annotations.insert(out.annotations.end(), resized.annotations.begin(),
                         resized.annotations.end());
  return out;
}

double SampleMixupLambda(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return 0.4 + 0.2 * UnitUniform(rng);
}

}  // namespace occfilter
