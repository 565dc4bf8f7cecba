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

#include "occfilter/interchange.h"

#include <filesystem>
#include <fstream>
#include <string>

#include "gtest/gtest.h"
#include "metric_fixture.h"

namespace occfilter {
namespace {

std::string TempPath(const std::string& name) {
  return (std::filesystem::path(testing::TempDir()) / name).string();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream(path) << text;
}

const LabelSpace& Labels() {
  static const LabelSpace labels = LabelSpace::AutonomousDriving();
  return labels;
}

TEST(DetectionsIoTest, EmptyFileIsEmpty) {
  const std::string path = TempPath("empty.jsonl");
  WriteText(path, "");
  EXPECT_TRUE(LoadDetections(path, Labels()).empty());
}

TEST(DetectionsIoTest, RoundTripIsIdentity) {
  DetectionsByImage dets;
  Detection d;
  d.box = {1.25, 2.5, 30.125, 40};
  d.sco = 0.123456789;
  d.occ = 0.75;
  d.label = 2;
  d.class_scores = {0.1, 0.0, 0.8, 0, 0, 0, 0, 0, 0.1};
  dets["img1"].push_back(d);
  d.label = kOodLabel;
  d.provenance = Provenance::kRecallEnhanced;
  d.class_scores.clear();
  dets["img1"].push_back(d);
  dets["img0"].push_back(d);
  const std::string path = TempPath("dets.jsonl");
  SaveDetections(path, dets, Labels());
  EXPECT_EQ(LoadDetections(path, Labels()), dets);
}

TEST(DetectionsIoTest, OutOfRangeScoreReportsLine) {
  const std::string path = TempPath("bad.jsonl");
  WriteText(path,
            "{\"schema\": \"occfilter.detections\", \"version\": 1}\n"
            "{\"image_id\": \"a\", \"x1\": 0, \"y1\": 0, \"x2\": 1, \"y2\": 1, "
            "\"label\": \"car\", \"sco\": 0.5, \"occ\": 0.1}\n"
            "{\"image_id\": \"a\", \"x1\": 0, \"y1\": 0, \"x2\": 1, \"y2\": 1, "
            "\"label\": \"car\", \"sco\": 1.5, \"occ\": 0.1}\n");
  try {
    LoadDetections(path, Labels());
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
}

TEST(DetectionsIoTest, MissingOccDefaultsWithWarning) {
  const std::string path = TempPath("noocc.jsonl");
  WriteText(path,
            "{\"schema\": \"occfilter.detections\", \"version\": 1}\n"
            "{\"image_id\": \"a\", \"x1\": 0, \"y1\": 0, \"x2\": 1, \"y2\": 1, "
            "\"label\": \"ood\", \"sco\": 0.5}\n");
  Warnings warnings;
  const DetectionsByImage dets = LoadDetections(path, Labels(), &warnings);
  ASSERT_EQ(dets.at("a").size(), 1u);
  EXPECT_EQ(dets.at("a")[0].occ, 0.0);
  EXPECT_EQ(dets.at("a")[0].label, kOodLabel);
  EXPECT_EQ(warnings.size(), 1u);
}

TEST(DetectionsIoTest, RejectsBadRecords) {
  const std::string header =
      "{\"schema\": \"occfilter.detections\", \"version\": 1}\n";
  const std::string path = TempPath("bad2.jsonl");
  for (const std::string& line :
       {std::string("{\"image_id\": \"a\"}"),
        std::string("{\"image_id\": \"a\", \"x1\": 5, \"y1\": 0, \"x2\": 1, "
                    "\"y2\": 1, \"label\": \"car\", \"sco\": 0.5}"),
        std::string("{\"image_id\": \"a\", \"x1\": 0, \"y1\": 0, \"x2\": 1, "
                    "\"y2\": 1, \"label\": \"zebra\", \"sco\": 0.5}"),
        std::string("not json")}) {
    WriteText(path, header + line + "\n");
    EXPECT_THROW(LoadDetections(path, Labels()), FormatError) << line;
  }
  WriteText(path, "{\"schema\": \"occfilter.ground_truth\", \"version\": 1}\n");
  EXPECT_THROW(LoadDetections(path, Labels()), FormatError);
  WriteText(path, "{\"schema\": \"occfilter.detections\", \"version\": 7}\n");
  EXPECT_THROW(LoadDetections(path, Labels()), FormatError);
}

TEST(GroundTruthIoTest, RoundTrip) {
  GroundTruthByImage gts;
  for (const ImageData& im : fixture::ThreeImages())
    gts[im.image_id] = im.ground_truth;
  const std::string path = TempPath("gt.jsonl");
  SaveGroundTruth(path, gts, Labels());
  EXPECT_EQ(LoadGroundTruth(path, Labels()), gts);
}

TEST(GroundTruthIoTest, KnownFlagMustAgree) {
  const std::string path = TempPath("gt_bad.jsonl");
  WriteText(path,
            "{\"schema\": \"occfilter.ground_truth\", \"version\": 1}\n"
            "{\"image_id\": \"a\", \"x1\": 0, \"y1\": 0, \"x2\": 1, \"y2\": 1, "
            "\"label\": \"car\", \"known\": false}\n");
  EXPECT_THROW(LoadGroundTruth(path, Labels()), FormatError);
}

TEST(AnnotationsIoTest, FreeFormLabelsRoundTrip) {
  AnnotationsByImage anns;
  anns["x"] = {{{0, 0, 5, 5}, "giraffe", std::nullopt},
               {{1, 1, 2, 2}, "car", std::nullopt}};
  const std::string path = TempPath("anns.jsonl");
  SaveAnnotations(path, anns, Labels());
  EXPECT_EQ(LoadAnnotations(path), anns);
}

TEST(ReportTest, UndefinedValuesAreNull) {
  EvalReport report;
  report.fpr_at_k = 12.5;
  const std::string json = ReportToJson(report, Labels());
  EXPECT_NE(json.find("\"recall_at_k_pct\": null"), std::string::npos) << json;
  EXPECT_NE(json.find("\"fpr_at_k_permille\": 12.5"), std::string::npos)
      << json;
  EXPECT_NE(json.find("occfilter.eval_report"), std::string::npos);
  EXPECT_FALSE(FormatReportTable(report, Labels()).empty());
}

}  // namespace
}  // namespace occfilter
