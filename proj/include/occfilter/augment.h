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

// Mosaic composition drawing tiles from a driving dataset and an auxiliary
// dataset, Mixup blending, and label-space alignment between the two.

#ifndef OCCFILTER_AUGMENT_H_
#define OCCFILTER_AUGMENT_H_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occfilter/detection.h"
#include "occfilter/geometry.h"
#include "occfilter/raster.h"

namespace occfilter {

struct Annotation {
  BoundingBox box;
  std::string source_label;
  // Resolved label (known index or kOodLabel); empty until remapped.
  std::optional<int> label;

  friend bool operator==(const Annotation&, const Annotation&) = default;
};

struct LabeledImage {
  RgbImage pixels;
  std::vector<Annotation> annotations;
  std::string source;
};

// Total mapping from source-dataset label names to the target label space.
class LabelSpaceMap {
 public:
  explicit LabelSpaceMap(LabelSpace space);

  // Source names equal to a known class name map to it; every other name in
  // `vocabulary` maps to OOD.
  static LabelSpaceMap FromVocabulary(LabelSpace space,
                                      std::span<const std::string> vocabulary);

  // Maps `source` to `target`, a known class name or "ood". Throws if
  // `target` is not in the label space.
  void Add(const std::string& source, const std::string& target);

  // Throws std::out_of_range for an unmapped label.
  int Resolve(const std::string& source) const;
  bool Contains(const std::string& source) const;

  const LabelSpace& space() const { return space_; }
  const std::map<std::string, int>& entries() const { return entries_; }

 private:
  LabelSpace space_;
  std::map<std::string, int> entries_;
};

// Relabels every annotation; geometry is untouched. Throws std::out_of_range
// on an unmapped label.
LabeledImage RemapLabels(const LabeledImage& image, const LabelSpaceMap& map);

struct CanvasSize {
  int width = 640;
  int height = 640;
};

inline constexpr Rgb kMosaicFill{114, 114, 114};

// Where each input went; recorded for inspection and tests.
struct MosaicLayout {
  int center_x = 0;
  int center_y = 0;
  // tile_order[q] is the input index (0, 1 = driving, 2, 3 = auxiliary) placed
  // in quadrant q (0 top-left, 1 top-right, 2 bottom-left, 3 bottom-right).
  std::array<int, 4> tile_order{};
  std::array<BoundingBox, 4> tile_rects{};
};

// 2x2 composition around a seeded center drawn from the middle 50% of each
// canvas dimension. The four inputs are shuffled over the quadrants, each
// scaled (aspect kept, nearest neighbour) to fit its quadrant and anchored at
// the center. Annotations follow their tile, are clipped to the canvas, and
// are dropped when less than one pixel of area remains.
LabeledImage MosaicPlus(std::span<const LabeledImage, 2> driving,
                        std::span<const LabeledImage, 2> auxiliary,
                        CanvasSize canvas, std::uint64_t seed,
                        MosaicLayout* layout = nullptr);

// pixels = lambda * composite + (1 - lambda) * other, rounded per channel.
// `other` is resized to the composite canvas first. Both annotation lists are
// kept at full weight.
LabeledImage MixupBlend(const LabeledImage& composite,
                        const LabeledImage& other, double lambda);

// Nearest-neighbour resize that also scales annotations.
LabeledImage ResizeLabeled(const LabeledImage& image, int width, int height);

// Default Mixup weight: uniform on [0.4, 0.6].
double SampleMixupLambda(std::uint64_t seed);

}  // namespace occfilter

#endif  // OCCFILTER_AUGMENT_H_
