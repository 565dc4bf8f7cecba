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

// Dense masks and anomaly score maps to boxes.

#ifndef OCCFILTER_MASK2BOX_H_
#define OCCFILTER_MASK2BOX_H_

#include <span>
#include <vector>

#include "occfilter/detection.h"
#include "occfilter/geometry.h"
#include "occfilter/raster.h"

namespace occfilter {

struct Pixel {
  int x = 0;
  int y = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
};

// Pixels of one connected component in raster order (row-major).
using Component = std::vector<Pixel>;

// True where score >= threshold.
BinaryMask ThresholdBinarize(const ScoreMap& scores, double threshold);

// 8-connected components of the set pixels. Components are ordered by their
// first pixel in raster order, i.e. topmost then leftmost.
std::vector<Component> ConnectedComponents(const BinaryMask& mask);

// Tight box over the pixel cells: [min_x, min_y, max_x + 1, max_y + 1].
// Throws std::invalid_argument for an empty component.
BoundingBox ComponentToBox(std::span<const Pixel> component);

// Boxes of every component of `mask`, as in ConnectedComponents order.
std::vector<BoundingBox> MaskToBoxes(const BinaryMask& mask);

// For each threshold: binarize, label, and emit one OOD detection per
// component with sco = threshold. Results are concatenated threshold by
// threshold without cross-threshold suppression. Throws on an empty list.
std::vector<Detection> MultiThresholdBoxes(const ScoreMap& scores,
                                           std::span<const double> thresholds);

// Default threshold grid: the (i + 1) / (count + 1) quantiles of the score
// values for i in [0, count), ascending, with duplicates removed.
std::vector<double> QuantileThresholds(const ScoreMap& scores, int count = 16);

}  // namespace occfilter

#endif  // OCCFILTER_MASK2BOX_H_
