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

#include "occfilter/mask2box.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace occfilter {

BinaryMask ThresholdBinarize(const ScoreMap& scores, double threshold) {
  BinaryMask mask(scores.width(), scores.height());
  std::span<const float> src = scores.values();
  std::span<std::uint8_t> dst = mask.values();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = static_cast<double>(src[i]) >= threshold ? 1 : 0;
  }
  return mask;
}

std::vector<Component> ConnectedComponents(const BinaryMask& mask) {
  const int width = mask.width();
  const int height = mask.height();
  std::vector<std::uint8_t> visited(mask.size(), 0);
  std::vector<Component> components;
  std::vector<Pixel> stack;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const std::size_t seed = static_cast<std::size_t>(y) * width + x;
      if (!mask.at(x, y) || visited[seed]) continue;
      Component comp;
      visited[seed] = 1;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const Pixel p = stack.back();
        stack.pop_back();
        comp.push_back(p);
        for (int dy = -1; dy <= 1; ++dy) {
          const int ny = p.y + dy;
          if (ny < 0 || ny >= height) continue;
          for (int dx = -1; dx <= 1; ++dx) {
            const int nx = p.x + dx;
            if (nx < 0 || nx >= width || (dx == 0 && dy == 0)) continue;
            const std::size_t idx = static_cast<std::size_t>(ny) * width + nx;
            if (mask.at(nx, ny) && !visited[idx]) {
              visited[idx] = 1;
              stack.push_back({nx, ny});
            }
          }
        }
      }
      std::sort(comp.begin(), comp.end(), [](const Pixel& a, const Pixel& b) {
        return a.y != b.y ? a.y < b.y : a.x < b.x;
      });
      components.push_back(std::move(comp));
    }
  }
  return components;
}

BoundingBox ComponentToBox(std::span<const Pixel> component) {
  if (component.empty()) {
    throw std::invalid_argument("cannot box an empty component");
  }
  int min_x = component.front().x;
  int max_x = min_x;
  int min_y = component.front().y;
  int max_y = min_y;
  for (const Pixel& p : component) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  return {double(min_x), double(min_y), double(max_x + 1), double(max_y + 1)};
}

std::vector<BoundingBox> MaskToBoxes(const BinaryMask& mask) {
  // Flood fill that only tracks extents; boxes come out in seed (raster)
  // order, matching ConnectedComponents.
  const int width = mask.width();
  const int height = mask.height();
  std::span<const std::uint8_t> m = mask.values();
  std::vector<std::uint8_t> visited(mask.size(), 0);
  std::vector<int> stack;
  std::vector<BoundingBox> boxes;
  for (int seed = 0; seed < static_cast<int>(m.size()); ++seed) {
    if (!m[seed] || visited[seed]) continue;
    int min_x = width, min_y = height, max_x = -1, max_y = -1;
    visited[seed] = 1;
    stack.push_back(seed);
    while (!stack.empty()) {
      const int idx = stack.back();
      stack.pop_back();
      const int x = idx % width;
      const int y = idx / width;
      min_x = std::min(min_x, x);
      max_x = std::max(max_x, x);
      min_y = std::min(min_y, y);
      max_y = std::max(max_y, y);
      const int y0 = std::max(y - 1, 0), y1 = std::min(y + 1, height - 1);
      const int x0 = std::max(x - 1, 0), x1 = std::min(x + 1, width - 1);
      for (int ny = y0; ny <= y1; ++ny) {
        for (int nx = x0; nx <= x1; ++nx) {
          const int n = ny * width + nx;
          if (m[n] && !visited[n]) {
            visited[n] = 1;
            stack.push_back(n);
          }
        }
      }
    }
    boxes.push_back(
        {double(min_x), double(min_y), double(max_x + 1), double(max_y + 1)});
  }
  return boxes;
}

std::vector<Detection> MultiThresholdBoxes(const ScoreMap& scores,
                                           std::span<const double> thresholds) {
  if (thresholds.empty()) {
    throw std::invalid_argument("threshold list must not be empty");
  }
  std::vector<Detection> dets;
  for (const double t : thresholds) {
    for (const BoundingBox& box : MaskToBoxes(ThresholdBinarize(scores, t))) {
      Detection d;
      d.box = box;
      d.sco = t;
      d.label = kOodLabel;
      d.provenance = Provenance::kStandard;
      dets.push_back(std::move(d));
    }
  }
  return dets;
}

std::vector<double> QuantileThresholds(const ScoreMap& scores, int count) {
  if (count < 1) throw std::invalid_argument("count must be >= 1");
  std::vector<double> thresholds;
  if (scores.empty()) return thresholds;
  std::vector<float> sorted(scores.values().begin(), scores.values().end());
  std::sort(sorted.begin(), sorted.end());
  const double last = static_cast<double>(sorted.size() - 1);
  for (int i = 0; i < count; ++i) {
    const double pos = last * (i + 1) / (count + 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    thresholds.push_back(sorted[lo] + frac * (double(sorted[hi]) - sorted[lo]));
  }
  thresholds.erase(std::unique(thresholds.begin(), thresholds.end()),
                   thresholds.end());
  return thresholds;
}

}  // namespace occfilter
