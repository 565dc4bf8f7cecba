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

#include "occfilter/geometry.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace occfilter {

namespace {

void CheckPredicted(const BoundingBox& pred) {
  if (!pred.IsValid()) {
    throw std::invalid_argument("predicted box is not a valid box");
  }
  if (BoxArea(pred) <= 0.0) {
    throw std::invalid_argument(
        "occupancy target is undefined for a zero-area predicted box");
  }
}

}  // namespace

bool BoundingBox::IsValid() const {
  return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) &&
         std::isfinite(y2) && x1 <= x2 && y1 <= y2;
}

double BoxArea(const BoundingBox& b) {
  return std::max(0.0, b.x2 - b.x1) * std::max(0.0, b.y2 - b.y1);
}

BoundingBox Intersection(const BoundingBox& a, const BoundingBox& b) {
  BoundingBox r{std::max(a.x1, b.x1), std::max(a.y1, b.y1),
                std::min(a.x2, b.x2), std::min(a.y2, b.y2)};
  if (r.x2 < r.x1) r.x2 = r.x1;
  if (r.y2 < r.y1) r.y2 = r.y1;
  return r;
}

double IntersectArea(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x2, b.x2) - std::max(a.x1, b.x1);
  const double h = std::min(a.y2, b.y2) - std::max(a.y1, b.y1);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  return w * h;
}

double Iou(const BoundingBox& a, const BoundingBox& b) {
  const double inter = IntersectArea(a, b);
  const double uni = BoxArea(a) + BoxArea(b) - inter;
  if (uni <= 0.0) return 0.0;
  return inter / uni;
}

double UnionArea(std::span<const BoundingBox> boxes) {
  std::vector<double> xs;
  xs.reserve(boxes.size() * 2);
  for (const BoundingBox& b : boxes) {
    if (BoxArea(b) <= 0.0) continue;
    xs.push_back(b.x1);
    xs.push_back(b.x2);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double total = 0.0;
  std::vector<std::pair<double, double>> spans;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double left = xs[i];
    const double right = xs[i + 1];
    spans.clear();
    for (const BoundingBox& b : boxes) {
      if (BoxArea(b) <= 0.0) continue;
      if (b.x1 <= left && b.x2 >= right) spans.emplace_back(b.y1, b.y2);
    }
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end());
    double covered = 0.0;
    double lo = spans.front().first;
    double hi = spans.front().second;
    for (std::size_t j = 1; j < spans.size(); ++j) {
      if (spans[j].first > hi) {
        covered += hi - lo;
        lo = spans[j].first;
        hi = spans[j].second;
      } else {
        hi = std::max(hi, spans[j].second);
      }
    }
    covered += hi - lo;
    total += covered * (right - left);
  }
  return total;
}

double OccupancyTargetExact(const BoundingBox& pred,
                            std::span<const BoundingBox> gts) {
  CheckPredicted(pred);
  std::vector<BoundingBox> clipped;
  clipped.reserve(gts.size());
  for (const BoundingBox& gt : gts) {
    const BoundingBox c = Intersection(pred, gt);
    if (BoxArea(c) > 0.0) clipped.push_back(c);
  }
  const double ratio = UnionArea(clipped) / BoxArea(pred);
  return std::clamp(ratio, 0.0, 1.0);
}

double OccupancyUpperBound(const BoundingBox& pred,
                           std::span<const BoundingBox> gts) {
  CheckPredicted(pred);
  double sum = 0.0;
  for (const BoundingBox& gt : gts) sum += IntersectArea(pred, gt);
  return sum / BoxArea(pred);
}

double OccupancyTargetApprox(const BoundingBox& pred,
                             std::span<const BoundingBox> gts) {
  return std::min(1.0, OccupancyUpperBound(pred, gts));
}

PixelRect PixelCover(const BoundingBox& box, int width, int height) {
  auto clamp_floor = [](double v, int limit) {
    return static_cast<int>(std::clamp(std::floor(v), 0.0, double(limit)));
  };
  auto clamp_ceil = [](double v, int limit) {
    return static_cast<int>(std::clamp(std::ceil(v), 0.0, double(limit)));
  };
  PixelRect r{clamp_floor(box.x1, width), clamp_floor(box.y1, height),
              clamp_ceil(box.x2, width), clamp_ceil(box.y2, height)};
  if (r.x1 <= r.x0 || r.y1 <= r.y0) return PixelRect{};
  return r;
}

}  // namespace occfilter
