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

// Exact axis-aligned box arithmetic on continuous image coordinates.

#ifndef OCCFILTER_GEOMETRY_H_
#define OCCFILTER_GEOMETRY_H_

#include <span>
#include <vector>

namespace occfilter {

// Axis-aligned rectangle, (x1, y1) top-left, (x2, y2) bottom-right, in pixels.
// Valid boxes satisfy x1 <= x2 and y1 <= y2; zero-area boxes are allowed.
struct BoundingBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  bool IsValid() const;

  friend bool operator==(const BoundingBox&, const BoundingBox&) = default;
};

using BoxSet = std::vector<BoundingBox>;

double BoxArea(const BoundingBox& b);

// Overlap of two boxes; a degenerate box when they are disjoint.
BoundingBox Intersection(const BoundingBox& a, const BoundingBox& b);

double IntersectArea(const BoundingBox& a, const BoundingBox& b);

// Intersection over union. Two zero-area boxes give 0.
double Iou(const BoundingBox& a, const BoundingBox& b);

// Exact area of the union of `boxes` by coordinate compression: the x
// coordinates split the plane into slabs, and inside each slab the covered
// y-intervals are merged. O(n^2 log n).
double UnionArea(std::span<const BoundingBox> boxes);

// |pred ∩ (∪ gts)| / |pred|. Throws std::invalid_argument for a zero-area or
// invalid `pred`.
double OccupancyTargetExact(const BoundingBox& pred,
                            std::span<const BoundingBox> gts);

// Σ |pred ∩ gt_i| / |pred| without clamping. Always >= the exact target and
// equal to it when the clipped ground-truth boxes do not overlap.
double OccupancyUpperBound(const BoundingBox& pred,
                           std::span<const BoundingBox> gts);

// OccupancyUpperBound clamped to 1 so it stays a valid BCE target.
double OccupancyTargetApprox(const BoundingBox& pred,
                             std::span<const BoundingBox> gts);

// Pixel rectangle [x0, x1) x [y0, y1).
struct PixelRect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
  int area() const { return (x1 - x0) * (y1 - y0); }
};

// Pixel cells touched by `box` (floor of the low edges, ceil of the high
// edges), clipped to a width x height raster. Empty if nothing remains.
PixelRect PixelCover(const BoundingBox& box, int width, int height);

}  // namespace occfilter

#endif  // OCCFILTER_GEOMETRY_H_
