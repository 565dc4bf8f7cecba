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

#include "occfilter/synth.h"

#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "occfilter/depth_filter.h"
#include "oracles.h"

namespace occfilter {
namespace {

TEST(GenerateSceneTest, ZeroObjectsIsPureRamp) {
  SceneParams p;
  p.min_objects = p.max_objects = 0;
  p.min_ghosts = p.max_ghosts = 0;
  const SyntheticScene s = GenerateScene(p, 3);
  EXPECT_TRUE(s.ground_truth.empty());
  EXPECT_TRUE(s.scene.objects.empty());
  for (int y = 0; y < p.height; ++y) {
    for (float v : s.depth.row(y)) EXPECT_EQ(v, GroundDepth(s.scene, y));
  }
}

TEST(GenerateSceneTest, ObjectRegionHasConstantDepth) {
  SceneParams p;
  p.min_objects = p.max_objects = 1;
  p.min_ghosts = p.max_ghosts = 0;
  p.unknown_fraction = 0.0;
  const SyntheticScene s = GenerateScene(p, 8);
  ASSERT_EQ(s.scene.objects.size(), 1u);
  const SceneObject& o = s.scene.objects[0];
  EXPECT_TRUE(o.is_3d);
  EXPECT_GE(o.label, 0);
  for (int y = int(o.box.y1); y < int(o.box.y2); ++y) {
    for (int x = int(o.box.x1); x < int(o.box.x2); ++x) {
      EXPECT_EQ(s.depth.at(x, y), o.depth);
    }
  }
  ASSERT_EQ(s.ground_truth.size(), 1u);
  EXPECT_EQ(s.ground_truth[0].box, o.box);
}

TEST(GenerateSceneTest, DeterministicAndGhostsUnannotated) {
  const SceneParams p;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const SyntheticScene a = GenerateScene(p, seed);
    const SyntheticScene b = GenerateScene(p, seed);
    EXPECT_EQ(a.depth, b.depth);
    EXPECT_EQ(a.ground_truth, b.ground_truth);
    EXPECT_EQ(a.roi, b.roi);
    std::size_t solid = 0;
    for (const SceneObject& o : a.scene.objects) {
      solid += o.is_3d;
      if (!o.is_3d) {
        // Ghosts leave the ramp untouched.
        for (int y = int(o.box.y1); y < int(o.box.y2); ++y) {
          EXPECT_EQ(a.depth.at(int(o.box.x1), y), GroundDepth(a.scene, y));
        }
      }
    }
    EXPECT_EQ(a.ground_truth.size(), solid);
    // RoI covers the ramp region.
    for (int y = 0; y < p.height; ++y) {
      EXPECT_EQ(a.roi.at(0, y), y >= p.horizon ? 1 : 0);
    }
  }
}

TEST(GenerateSceneTest, RampResponseClearsThreshold) {
  const SceneParams p;
  EXPECT_GT(p.ramp_slope * 128.0, DfrConfig{}.change_threshold);
}

TEST(GenerateSceneTest, InvalidParamsThrow) {
  SceneParams p;
  p.max_size = 1;
  EXPECT_THROW(GenerateScene(p, 0), std::invalid_argument);
  p = SceneParams{};
  p.horizon = p.height;
  EXPECT_THROW(GenerateScene(p, 0), std::invalid_argument);
}

TEST(SceneDfrTest, KeepsObjectsRejectsGhosts) {
  const SceneParams p;
  const DfrConfig cfg;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const SyntheticScene s = GenerateScene(p, seed);
    const DepthChangeMap c = ComputeDepthChange(s.depth, cfg);
    for (const SceneObject& o : s.scene.objects) {
      const double f = FlatnessProportion(c, o.box, cfg);
      if (o.is_3d) {
        EXPECT_GE(f, cfg.mu) << "seed " << seed;
      } else {
        EXPECT_LT(f, cfg.mu) << "seed " << seed;
      }
    }
  }
}

TEST(PlantDetectionsTest, DeterministicAndValid) {
  const SceneParams p;
  const SyntheticScene s = GenerateScene(p, 17);
  const auto a = PlantDetections(s, p, 5);
  EXPECT_EQ(a, PlantDetections(s, p, 5));
  for (const Detection& d : a) {
    EXPECT_TRUE(d.box.IsValid());
    EXPECT_GT(BoxArea(d.box), 0.0);
    EXPECT_GE(d.sco, 0.0);
    EXPECT_LE(d.sco, 1.0);
    EXPECT_GE(d.occ, 0.0);
    EXPECT_LE(d.occ, 1.0);
    EXPECT_EQ(d.class_scores.size(), 9u);
  }
}

TEST(RasterOccupancyOracleTest, Examples) {
  const BoundingBox pred{0, 0, 10, 10};
  const std::vector<BoundingBox> none = {{20, 20, 30, 30}};
  EXPECT_DOUBLE_EQ(RasterOccupancyOracle(pred, none, 64), 0.0);
  const std::vector<BoundingBox> all = {{-1, -1, 11, 11}};
  EXPECT_DOUBLE_EQ(RasterOccupancyOracle(pred, all, 64), 1.0);
  EXPECT_THROW(RasterOccupancyOracle(pred, all, 0), std::invalid_argument);
}

TEST(RasterOccupancyOracleTest, ConvergesToExact) {
  std::mt19937_64 rng(71);
  for (int i = 0; i < 200; ++i) {
    const BoundingBox pred = oracle::RandomBox(rng, 50);
    if (BoxArea(pred) < 1e-3) continue;
    std::vector<BoundingBox> gts;
    for (int j = 0; j < 2; ++j) gts.push_back(oracle::RandomBox(rng, 50));
    const double exact = OccupancyTargetExact(pred, gts);
    EXPECT_NEAR(RasterOccupancyOracle(pred, gts, 256), exact, 2.0 / 256);
  }
}

}  // namespace
}  // namespace occfilter
