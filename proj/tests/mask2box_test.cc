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

#include <cmath>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

#include "gtest/gtest.h"
#include "oracles.h"

namespace occfilter {
namespace {

BinaryMask MaskFrom(const std::vector<std::string>& rows) {
  BinaryMask m(static_cast<int>(rows[0].size()), static_cast<int>(rows.size()));
  for (int y = 0; y < m.height(); ++y) {
    for (int x = 0; x < m.width(); ++x) m.at(x, y) = rows[y][x] == '#';
  }
  return m;
}

ScoreMap Bump(int w, int h, double cx, double cy, double sigma, double peak) {
  ScoreMap s(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
      s.at(x, y) =
          static_cast<float>(peak * std::exp(-r2 / (2 * sigma * sigma)));
    }
  }
  return s;
}

TEST(ThresholdBinarizeTest, Examples) {
  const ScoreMap s(6, 4, 0.7f);
  const BinaryMask low = ThresholdBinarize(s, 0.5);
  const BinaryMask high = ThresholdBinarize(s, 0.9);
  // Ties count as set.
  const BinaryMask tie = ThresholdBinarize(s, 0.7f);
  for (auto v : low.values()) EXPECT_EQ(v, 1);
  for (auto v : high.values()) EXPECT_EQ(v, 0);
  for (auto v : tie.values()) EXPECT_EQ(v, 1);

  ScoreMap two(4, 4, 0.2f);
  two.at(1, 1) = two.at(2, 1) = 0.8f;
  const BinaryMask m = ThresholdBinarize(two, 0.5);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 4; ++x) {
      EXPECT_EQ(m.at(x, y), (y == 1 && (x == 1 || x == 2)) ? 1 : 0);
    }
  }
}

TEST(ConnectedComponentsTest, Examples) {
  EXPECT_TRUE(ConnectedComponents(BinaryMask(5, 5)).empty());
  const BinaryMask diagonal = MaskFrom({"#..", ".#.", "..."});
  EXPECT_EQ(ConnectedComponents(diagonal).size(), 1u);
  const BinaryMask split = MaskFrom({"###", "...", "##."});
  const auto comps = ConnectedComponents(split);
  ASSERT_EQ(comps.size(), 2u);
  EXPECT_EQ(comps[0].size(), 3u);
  EXPECT_EQ(comps[1].size(), 2u);
}

TEST(ConnectedComponentsTest, MatchesFloodFillOracle) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 60; ++trial) {
    BinaryMask m(23, 17);
    const double density = 0.2 + 0.02 * (trial % 20);
    std::bernoulli_distribution b(density);
    for (auto& v : m.values()) v = b(rng);
    const auto comps = ConnectedComponents(m);
    std::vector<std::set<std::pair<int, int>>> got;
    std::size_t total = 0;
    for (const Component& c : comps) {
      std::set<std::pair<int, int>> s;
      for (const Pixel& p : c) s.insert({p.y, p.x});
      EXPECT_EQ(s.size(), c.size());
      total += c.size();
      got.push_back(std::move(s));
    }
    // Canonical order: by first pixel in raster order.
    for (std::size_t i = 1; i < got.size(); ++i) {
      EXPECT_LT(*got[i - 1].begin(), *got[i].begin());
    }
    std::size_t set_pixels = 0;
    for (auto v : m.values()) set_pixels += v != 0;
    EXPECT_EQ(total, set_pixels);
    EXPECT_EQ(got, oracle::FloodComponents(m));
  }
}

TEST(ComponentToBoxTest, Examples) {
  const Component single = {{3, 4}};
  EXPECT_EQ(ComponentToBox(single), (BoundingBox{3, 4, 4, 5}));
  Component l_shape;
  for (int y = 2; y <= 5; ++y) l_shape.push_back({1, y});
  for (int x = 1; x <= 7; ++x) l_shape.push_back({x, 5});
  EXPECT_EQ(ComponentToBox(l_shape), (BoundingBox{1, 2, 8, 6}));
  const auto full = ConnectedComponents(BinaryMask(9, 6, 1));
  ASSERT_EQ(full.size(), 1u);
  EXPECT_EQ(ComponentToBox(full[0]), (BoundingBox{0, 0, 9, 6}));
  EXPECT_THROW(ComponentToBox({}), std::invalid_argument);
}

TEST(ComponentToBoxTest, CoversEveryPixel) {
  std::mt19937_64 rng(42);
  BinaryMask m(30, 30);
  std::bernoulli_distribution b(0.4);
  for (auto& v : m.values()) v = b(rng);
  for (const Component& c : ConnectedComponents(m)) {
    const BoundingBox box = ComponentToBox(c);
    for (const Pixel& p : c) {
      EXPECT_GE(p.x, box.x1);
      EXPECT_GE(p.y, box.y1);
      EXPECT_LT(p.x, box.x2);
      EXPECT_LT(p.y, box.y2);
    }
  }
}

TEST(MaskToBoxesTest, MatchesBoxedFloodFillComponents) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 40; ++trial) {
    BinaryMask m(1 + trial % 29, 1 + (trial * 7) % 19);
    std::bernoulli_distribution b(0.15 + 0.02 * trial);
    for (auto& v : m.values()) v = b(rng);
    std::vector<BoundingBox> expected;
    for (const auto& comp : oracle::FloodComponents(m)) {
      int x1 = m.width(), y1 = m.height(), x2 = 0, y2 = 0;
      for (const auto& [y, x] : comp) {
        x1 = std::min(x1, x);
        y1 = std::min(y1, y);
        x2 = std::max(x2, x + 1);
        y2 = std::max(y2, y + 1);
      }
      expected.push_back({double(x1), double(y1), double(x2), double(y2)});
    }
    EXPECT_EQ(MaskToBoxes(m), expected) << "trial " << trial;
  }
}

TEST(MultiThresholdBoxesTest, ConstantMap) {
  const ScoreMap s(12, 8, 0.7f);
  const std::vector<double> thresholds = {0.5, 0.9};
  const auto dets = MultiThresholdBoxes(s, thresholds);
  ASSERT_EQ(dets.size(), 1u);
  EXPECT_EQ(dets[0].box, (BoundingBox{0, 0, 12, 8}));
  EXPECT_DOUBLE_EQ(dets[0].sco, 0.5);
  EXPECT_EQ(dets[0].label, kOodLabel);
  EXPECT_THROW(MultiThresholdBoxes(s, {}), std::invalid_argument);
}

TEST(MultiThresholdBoxesTest, GaussianBumpGivesNestedShrinkingBoxes) {
  const ScoreMap s = Bump(41, 41, 20, 20, 6.0, 1.0);
  std::vector<double> thresholds;
  for (int i = 1; i <= 16; ++i) thresholds.push_back(i / 17.0);
  const auto dets = MultiThresholdBoxes(s, thresholds);
  ASSERT_EQ(dets.size(), thresholds.size());
  for (std::size_t i = 0; i < dets.size(); ++i) {
    EXPECT_DOUBLE_EQ(dets[i].sco, thresholds[i]);
    // Farthest on-axis pixel still at or above the threshold.
    int expect_r = 0;
    for (int d = 0; d <= 20; ++d) {
      if (static_cast<float>(std::exp(-d * d / 72.0)) >= thresholds[i]) {
        expect_r = d;
      }
    }
    EXPECT_EQ(dets[i].box, (BoundingBox{20.0 - expect_r, 20.0 - expect_r,
                                        21.0 + expect_r, 21.0 + expect_r}));
    if (i > 0) {
      const BoundingBox& outer = dets[i - 1].box;
      const BoundingBox& inner = dets[i].box;
      EXPECT_LE(outer.x1, inner.x1);
      EXPECT_LE(outer.y1, inner.y1);
      EXPECT_GE(outer.x2, inner.x2);
      EXPECT_GE(outer.y2, inner.y2);
    }
  }
}

TEST(MultiThresholdBoxesTest, TwoBumpsOneThresholdBetweenPeaks) {
  ScoreMap a = Bump(60, 30, 15, 15, 3.0, 0.9);
  const ScoreMap b = Bump(60, 30, 45, 15, 3.0, 0.4);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a.values()[i] = std::max(a.values()[i], b.values()[i]);
  }
  const std::vector<double> t = {0.6};
  const auto dets = MultiThresholdBoxes(a, t);
  ASSERT_EQ(dets.size(), 1u);
  EXPECT_LT(dets[0].box.x2, 30.0);
}

TEST(MultiThresholdBoxesTest, BinarizationAntiMonotone) {
  std::mt19937_64 rng(43);
  ScoreMap s(32, 24);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  for (float& v : s.values()) v = u(rng);
  const std::vector<double> grid = QuantileThresholds(s, 16);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const BinaryMask lo = ThresholdBinarize(s, grid[i - 1]);
    const BinaryMask hi = ThresholdBinarize(s, grid[i]);
    for (std::size_t p = 0; p < lo.size(); ++p) {
      EXPECT_LE(hi.values()[p], lo.values()[p]);
    }
  }
}

TEST(QuantileThresholdsTest, SortedUniqueAndInRange) {
  ScoreMap s(10, 10);
  for (int i = 0; i < 100; ++i) s.values()[i] = static_cast<float>(i);
  const auto t = QuantileThresholds(s, 16);
  ASSERT_EQ(t.size(), 16u);
  EXPECT_DOUBLE_EQ(t.front(), 99.0 / 17.0);
  EXPECT_TRUE(std::is_sorted(t.begin(), t.end()));
  EXPECT_EQ(QuantileThresholds(ScoreMap(4, 4, 0.3f), 16).size(), 1u);
  EXPECT_THROW(QuantileThresholds(s, 0), std::invalid_argument);
}

}  // namespace
}  // namespace occfilter
