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

// Benchmark metrics: greedy IoU matching, recall of unknown objects under a
// per-image detection budget, RoI-restricted false-positive rate, and
// COCO-style average precision over the known classes.

#ifndef OCCFILTER_METRICS_H_
#define OCCFILTER_METRICS_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "occfilter/detection.h"
#include "occfilter/geometry.h"
#include "occfilter/raster.h"

namespace occfilter {

struct GroundTruth {
  BoundingBox box;
  // Known class index, or kOodLabel for an annotated unknown object.
  int label = kOodLabel;

  bool known() const { return !IsOod(label); }
  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

// Everything the metrics need about one image.
struct ImageData {
  std::string image_id;
  std::vector<Detection> detections;
  std::vector<GroundTruth> ground_truth;
  // Pixels with exhaustive annotation; FPR is skipped for images without one.
  std::optional<BinaryMask> roi;
};

struct MatchResult {
  // Per detection: index of the matched ground-truth box, or -1.
  std::vector<int> det_to_gt;
  // Per ground-truth box: index of the matched detection, or -1.
  std::vector<int> gt_to_det;
  int num_matched = 0;
};

// Greedy one-to-one matching. Detections are visited by RankingScore
// descending (stable in input order); each takes the unmatched ground-truth
// box of highest IoU provided IoU >= iou_thr, ties going to the lower index.
MatchResult MatchDetections(std::span<const Detection> dets,
                            std::span<const BoundingBox> gts, double iou_thr);

struct MetricConfig {
  int k = 100;
  double iou_thr = 0.5;
  // A detection belongs to the RoI when at least this fraction of its area is
  // inside the mask.
  double roi_fraction = 0.5;
};

// Fraction of `box` area lying on set pixels of `mask`. Pixel (x, y) is the
// unit cell [x, x+1) x [y, y+1). Zero-area boxes give 0.
double MaskCoverage(const BinaryMask& mask, const BoundingBox& box);

struct RecallResult {
  // Percentage; nullopt when no unknown ground truth exists.
  std::optional<double> recall;
  int matched = 0;
  int total = 0;
};

// Recall of unknown ground truth by the top-k OOD-labeled detections of each
// image.
RecallResult RecallAtK(std::span<const ImageData> images,
                       const MetricConfig& cfg);

struct FprResult {
  // Per-mille; nullopt when no image has an RoI.
  std::optional<double> fpr;
  int false_positives = 0;
  int images_with_roi = 0;
  std::vector<std::string> diagnostics;
};

// A kept unknown detection is a false positive when it lies in the RoI and
// matches no ground truth (known or unknown). Rate = 1000 * FP / (N * k)
// over the N images that carry an RoI.
FprResult FprAtK(std::span<const ImageData> images, const MetricConfig& cfg);

// COCO 101-point interpolated AP (percentage) of one known class at one IoU
// threshold; at most cfg.k detections of the class per image. nullopt when
// the class has no ground truth.
std::optional<double> AveragePrecision(std::span<const ImageData> images,
                                       int class_label, double iou_thr,
                                       const MetricConfig& cfg);

struct ClassAp {
  int label = 0;
  int num_gt = 0;
  // Averaged over IoU 0.50:0.05:0.95 and at IoU 0.5. nullopt without GT.
  std::optional<double> ap;
  std::optional<double> ap50;
};

struct EvalReport {
  std::optional<double> map_known;
  std::optional<double> ap50_known;
  std::optional<double> recall_at_k;
  std::optional<double> fpr_at_k;
  std::vector<ClassAp> per_class;

  int k = 100;
  int num_images = 0;
  int unknown_gt = 0;
  int unknown_matched = 0;
  int false_positives = 0;
  int images_with_roi = 0;
  int kept_unknown = 0;
  int kept_known = 0;
  int skipped_images = 0;
  std::vector<std::string> diagnostics;
};

// IoU thresholds 0.50, 0.55, ..., 0.95.
std::vector<double> CocoIouThresholds();

// All metrics over a dataset whose detections are already filtered.
EvalReport Evaluate(std::span<const ImageData> images, int num_known_classes,
                    const MetricConfig& cfg);

}  // namespace occfilter

#endif  // OCCFILTER_METRICS_H_
