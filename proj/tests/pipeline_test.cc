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

#include "occfilter/pipeline.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>

#include "gtest/gtest.h"
#include "occfilter/image_io.h"
#include "occfilter/synth.h"

namespace occfilter {
namespace {

namespace fs = std::filesystem;

struct SyntheticSet {
  DetectionsByImage dets;
  GroundTruthByImage gts;
  std::map<std::string, DepthMap> depths;
  std::map<std::string, BinaryMask> rois;
  std::vector<SyntheticScene> scenes;
};

SyntheticSet MakeSet(int n, std::uint64_t seed, const SceneParams& p = {}) {
  SyntheticSet set;
  for (int i = 0; i < n; ++i) {
    const std::string id = "s" + std::to_string(100 + i);
    SyntheticScene scene = GenerateScene(p, seed + i);
    set.dets[id] = PlantDetections(scene, p, seed * 31 + i);
    set.gts[id] = scene.ground_truth;
    set.depths[id] = scene.depth;
    set.rois[id] = scene.roi;
    set.scenes.push_back(std::move(scene));
  }
  return set;
}

// Expected counts from the planted-detection contract: every ghost detection
// outranks every real unknown, each unknown object has exactly one matching
// detection, and background clutter falls below both thresholds.
struct Expected {
  int false_positives = 0;
  int matched = 0;
  int unknown = 0;
};

Expected Oracle(const SyntheticSet& set, int k, bool dfr) {
  Expected e;
  for (const auto& [id, dets] : set.dets) {
    int ghost_dets = 0;
    for (const Detection& d : dets)
      ghost_dets += d.sco >= 0.6 && IsOod(d.label);
    int unknown = 0;
    for (const GroundTruth& g : set.gts.at(id)) unknown += !g.known();
    e.unknown += unknown;
    if (dfr) {
      e.matched += std::min(unknown, k);
    } else {
      e.false_positives += std::min(ghost_dets, k);
      e.matched += std::min(unknown, std::max(0, k - ghost_dets));
    }
  }
  return e;
}

PipelineConfig Config(int k, bool dfr) {
  PipelineConfig cfg;
  cfg.metrics.k = k;
  cfg.filter.budget = k;
  cfg.dfr_enabled = dfr;
  cfg.workers = 2;
  return cfg;
}

TEST(RunPipelineTest, SyntheticScenesMatchOracle) {
  const SyntheticSet set = MakeSet(25, 900);
  for (int k : {10, 30, 50, 100}) {
    for (bool dfr : {false, true}) {
      const PipelineResult r = RunPipeline(Config(k, dfr), set.dets, set.gts,
                                           &set.depths, &set.rois);
      const Expected e = Oracle(set, k, dfr);
      EXPECT_TRUE(r.skipped.empty());
      EXPECT_EQ(r.report.false_positives, e.false_positives) << k << dfr;
      EXPECT_EQ(r.report.unknown_matched, e.matched) << k << dfr;
      EXPECT_EQ(r.report.unknown_gt, e.unknown);
      EXPECT_DOUBLE_EQ(*r.report.fpr_at_k,
                       1000.0 * e.false_positives / (25.0 * k));
      EXPECT_DOUBLE_EQ(*r.report.recall_at_k, 100.0 * e.matched / e.unknown);
      EXPECT_DOUBLE_EQ(*r.report.map_known, 100.0);
      EXPECT_DOUBLE_EQ(*r.report.ap50_known, 100.0);
    }
  }
}

TEST(RunPipelineTest, DfrLowersFprOnGhostScenes) {
  const SyntheticSet set = MakeSet(10, 40);
  const PipelineResult off = RunPipeline(Config(100, false), set.dets, set.gts,
                                         &set.depths, &set.rois);
  const PipelineResult on =
      RunPipeline(Config(100, true), set.dets, set.gts, &set.depths, &set.rois);
  EXPECT_LT(*on.report.fpr_at_k, *off.report.fpr_at_k);
  EXPECT_GE(*on.report.recall_at_k, *off.report.recall_at_k);
}

TEST(RunPipelineTest, NoUnknownGroundTruthLeavesRecallUndefined) {
  SceneParams p;
  p.unknown_fraction = 0.0;
  const SyntheticSet set = MakeSet(3, 5, p);
  const PipelineResult r = RunPipeline(Config(100, false), set.dets, set.gts,
                                       &set.depths, &set.rois);
  EXPECT_FALSE(r.report.recall_at_k.has_value());
}

TEST(RunPipelineTest, DisablingDfrKeepsSuperset) {
  const SyntheticSet set = MakeSet(8, 77);
  PipelineConfig off = Config(1000, false);
  PipelineConfig on = Config(1000, true);
  on.dfr.mu = 0.5;
  const PipelineResult a =
      RunPipeline(off, set.dets, set.gts, &set.depths, &set.rois);
  const PipelineResult b =
      RunPipeline(on, set.dets, set.gts, &set.depths, &set.rois);
  for (const auto& [id, kept] : b.kept) {
    const auto& all = a.kept.at(id);
    for (const Detection& d : kept) {
      EXPECT_NE(std::find(all.begin(), all.end(), d), all.end());
    }
  }
}

TEST(RunPipelineTest, DeterministicAcrossRunsAndWorkerCounts) {
  const SyntheticSet set = MakeSet(12, 3);
  PipelineConfig cfg = Config(100, true);
  const LabelSpace labels = LabelSpace::AutonomousDriving();
  cfg.workers = 1;
  const std::string one = ReportToJson(
      RunPipeline(cfg, set.dets, set.gts, &set.depths, &set.rois).report,
      labels);
  cfg.workers = 4;
  const std::string four = ReportToJson(
      RunPipeline(cfg, set.dets, set.gts, &set.depths, &set.rois).report,
      labels);
  const std::string again = ReportToJson(
      RunPipeline(cfg, set.dets, set.gts, &set.depths, &set.rois).report,
      labels);
  EXPECT_EQ(one, four);
  EXPECT_EQ(four, again);
}

TEST(RunPipelineTest, MissingDepthSkipsImage) {
  SyntheticSet set = MakeSet(3, 8);
  set.depths.erase(set.depths.begin());
  const PipelineResult r =
      RunPipeline(Config(100, true), set.dets, set.gts, &set.depths, &set.rois);
  EXPECT_EQ(r.skipped.size(), 1u);
  EXPECT_EQ(r.report.skipped_images, 1);
  EXPECT_EQ(r.report.num_images, 2);
}

class PipelineFilesTest : public testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(testing::TempDir()) /
           testing::UnitTest::GetInstance()->current_test_info()->name();
    fs::remove_all(dir_);
    fs::create_directories(dir_ / "depth");
    fs::create_directories(dir_ / "roi");
  }
  fs::path dir_;
};

TEST_F(PipelineFilesTest, ConfigRoundTripAndRelativePaths) {
  PipelineConfig cfg;
  cfg.dfr_enabled = true;
  cfg.dfr.mu = 0.45;
  cfg.metrics.k = 77;
  cfg.thresholds = {0.1, 0.2};
  cfg.detections_path = "d.jsonl";
  cfg.depth_pattern = "depth/{image_id}.pgm";
  std::ofstream(dir_ / "cfg.json") << PipelineConfigToJson(cfg);
  const PipelineConfig loaded =
      LoadPipelineConfig((dir_ / "cfg.json").string());
  EXPECT_TRUE(loaded.dfr_enabled);
  EXPECT_DOUBLE_EQ(loaded.dfr.mu, 0.45);
  EXPECT_EQ(loaded.metrics.k, 77);
  EXPECT_EQ(loaded.thresholds, cfg.thresholds);
  EXPECT_EQ(fs::path(loaded.detections_path), dir_ / "d.jsonl");
  EXPECT_EQ(ExpandImagePattern(loaded.depth_pattern, "x7"),
            (dir_ / "depth" / "x7.pgm").string());
}

TEST_F(PipelineFilesTest, InvalidConfigThrows) {
  std::ofstream(dir_ / "bad.json") << R"({"dfr": {"sobel_kernel": 4}})";
  EXPECT_THROW(LoadPipelineConfig((dir_ / "bad.json").string()), ConfigError);
  std::ofstream(dir_ / "bad2.json") << R"({"metrics": {"k": "many"}})";
  EXPECT_THROW(LoadPipelineConfig((dir_ / "bad2.json").string()), ConfigError);
  std::ofstream(dir_ / "bad3.json") << "{ nope";
  EXPECT_THROW(LoadPipelineConfig((dir_ / "bad3.json").string()), ConfigError);
  EXPECT_THROW(LoadPipelineConfig((dir_ / "absent.json").string()),
               ConfigError);
}

TEST_F(PipelineFilesTest, FilesMatchInMemoryRun) {
  const SyntheticSet set = MakeSet(4, 21);
  const LabelSpace labels = LabelSpace::AutonomousDriving();
  for (const auto& [id, depth] : set.depths) {
    SaveDepthPgm((dir_ / "depth" / (id + ".pgm")).string(), depth, 0.01);
    SaveMaskPgm((dir_ / "roi" / (id + ".pgm")).string(), set.rois.at(id));
  }
  SaveDetections((dir_ / "d.jsonl").string(), set.dets, labels);
  SaveGroundTruth((dir_ / "g.jsonl").string(), set.gts, labels);
  PipelineConfig cfg = Config(100, true);
  cfg.detections_path = (dir_ / "d.jsonl").string();
  cfg.ground_truth_path = (dir_ / "g.jsonl").string();
  cfg.depth_pattern = (dir_ / "depth" / "{image_id}.pgm").string();
  cfg.roi_pattern = (dir_ / "roi" / "{image_id}.pgm").string();
  cfg.depth_scale = 0.01;
  const PipelineResult from_files = RunPipeline(cfg);
  const PipelineResult in_memory =
      RunPipeline(cfg, set.dets, set.gts, &set.depths, &set.rois);
  EXPECT_TRUE(from_files.skipped.empty());
  EXPECT_EQ(ReportToJson(from_files.report, labels),
            ReportToJson(in_memory.report, labels));

  fs::remove(dir_ / "depth" / "s101.pgm");
  fs::remove(dir_ / "roi" / "s102.pgm");
  const PipelineResult partial = RunPipeline(cfg);
  ASSERT_EQ(partial.skipped.size(), 1u);
  EXPECT_EQ(partial.skipped[0].rfind("s101", 0), 0u);
  EXPECT_EQ(partial.report.images_with_roi, 2);
}

}  // namespace
}  // namespace occfilter
