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

#include "occfilter/metrics.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "occfilter/occupancy_scoring.h"

namespace occfilter {

namespace {

constexpr int kRecallPoints = 101;

std::vector<BoundingBox> BoxesOf(std::span<const GroundTruth> gts,
                                 bool (*keep)(const GroundTruth&)) {
  std::vector<BoundingBox> boxes;
  for (const GroundTruth& g : gts) {
    if (keep(g)) boxes.push_back(g.box);
  }
  return boxes;
}

bool IsUnknownGt(const GroundTruth& g) { return !g.known(); }
bool AnyGt(const GroundTruth&) { return true; }

void CheckConfig(const MetricConfig& cfg) {
  if (cfg.k < 1) throw std::invalid_argument("metric budget k must be >= 1");
  if (!(cfg.iou_thr > 0.0 && cfg.iou_thr <= 1.0)) {
    throw std::invalid_argument("iou_thr must lie in (0, 1]");
  }
}

}  // namespace

MatchResult MatchDetections(std::span<const Detection> dets,
                            std::span<const BoundingBox> gts, double iou_thr) {
  MatchResult result;
  result.det_to_gt.assign(dets.size(), -1);
  result.gt_to_det.assign(gts.size(), -1);

  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return RankingScore(dets[a]) > RankingScore(dets[b]);
                   });

  for (const std::size_t d : order) {
    int best = -1;
    double best_iou = iou_thr;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (result.gt_to_det[g] >= 0) continue;
      const double iou = Iou(dets[d].box, gts[g]);
      if (iou < iou_thr) continue;
      if (best < 0 || iou > best_iou) {
        best = static_cast<int>(g);
        best_iou = iou;
      }
    }
    if (best >= 0) {
      result.det_to_gt[d] = best;
      result.gt_to_det[best] = static_cast<int>(d);
      ++result.num_matched;
    }
  }
  return result;
}

double MaskCoverage(const BinaryMask& mask, const BoundingBox& box) {
  const double area = BoxArea(box);
  if (area <= 0.0) return 0.0;
  const PixelRect r = PixelCover(box, mask.width(), mask.height());
  double covered = 0.0;
  for (int y = r.y0; y < r.y1; ++y) {
    const double h = std::min(box.y2, y + 1.0) - std::max(box.y1, double(y));
    if (h <= 0.0) continue;
    std::span<const std::uint8_t> row = mask.row(y);
    double w_sum = 0.0;
    for (int x = r.x0; x < r.x1; ++x) {
      if (!row[x]) continue;
      const double w = std::min(box.x2, x + 1.0) - std::max(box.x1, double(x));
      if (w > 0.0) w_sum += w;
    }
    covered += w_sum * h;
  }
  return covered / area;
}

RecallResult RecallAtK(std::span<const ImageData> images,
                       const MetricConfig& cfg) {
  CheckConfig(cfg);
  RecallResult result;
  for (const ImageData& image : images) {
    const std::vector<BoundingBox> unknown =
        BoxesOf(image.ground_truth, IsUnknownGt);
    result.total += static_cast<int>(unknown.size());
    if (unknown.empty()) continue;
    const std::vector<Detection> kept =
        BudgetTopK(image.detections, cfg.k, Selector::kUnknown);
    result.matched += MatchDetections(kept, unknown, cfg.iou_thr).num_matched;
  }
  if (result.total > 0) {
    result.recall = 100.0 * result.matched / result.total;
  }
  return result;
}

FprResult FprAtK(std::span<const ImageData> images, const MetricConfig& cfg) {
  CheckConfig(cfg);
  FprResult result;
  for (const ImageData& image : images) {
    if (!image.roi.has_value()) {
      result.diagnostics.push_back("image '" + image.image_id +
                                   "': no RoI mask, skipped for FPR");
      continue;
    }
    ++result.images_with_roi;
    const std::vector<Detection> kept =
        BudgetTopK(image.detections, cfg.k, Selector::kUnknown);
    const std::vector<BoundingBox> all = BoxesOf(image.ground_truth, AnyGt);
    const MatchResult match = MatchDetections(kept, all, cfg.iou_thr);
    for (std::size_t i = 0; i < kept.size(); ++i) {
      if (match.det_to_gt[i] >= 0) continue;
      if (MaskCoverage(*image.roi, kept[i].box) >= cfg.roi_fraction) {
        ++result.false_positives;
      }
    }
  }
  if (result.images_with_roi > 0) {
    result.fpr = 1000.0 * result.false_positives /
                 (static_cast<double>(result.images_with_roi) * cfg.k);
  }
  return result;
}

std::optional<double> AveragePrecision(std::span<const ImageData> images,
                                       int class_label, double iou_thr,
                                       const MetricConfig& cfg) {
  struct Scored {
    double score;
    bool tp;
  };
  std::vector<Scored> scored;
  int num_gt = 0;
  for (const ImageData& image : images) {
    std::vector<BoundingBox> gts;
    for (const GroundTruth& g : image.ground_truth) {
      if (g.label == class_label) gts.push_back(g.box);
    }
    num_gt += static_cast<int>(gts.size());
    std::vector<Detection> dets;
    for (const Detection& d : image.detections) {
      if (d.label == class_label) dets.push_back(d);
    }
    dets = BudgetTopK(dets, cfg.k, Selector::kAll);
    const MatchResult match = MatchDetections(dets, gts, iou_thr);
    for (std::size_t i = 0; i < dets.size(); ++i) {
      scored.push_back({RankingScore(dets[i]), match.det_to_gt[i] >= 0});
    }
  }
  if (num_gt == 0) return std::nullopt;

  std::stable_sort(
      scored.begin(), scored.end(),
      [](const Scored& a, const Scored& b) { return a.score > b.score; });
  std::vector<double> recall(scored.size());
  std::vector<double> precision(scored.size());
  int tp = 0;
  int fp = 0;
  for (std::size_t i = 0; i < scored.size(); ++i) {
    scored[i].tp ? ++tp : ++fp;
    recall[i] = static_cast<double>(tp) / num_gt;
    precision[i] = static_cast<double>(tp) / (tp + fp);
  }
  for (std::size_t i = precision.size(); i-- > 1;) {
    precision[i - 1] = std::max(precision[i - 1], precision[i]);
  }
  double sum = 0.0;
  for (int r = 0; r < kRecallPoints; ++r) {
    const double target = r / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), target);
    if (it != recall.end()) sum += precision[it - recall.begin()];
  }
  return 100.0 * sum / kRecallPoints;
}

std::vector<double> CocoIouThresholds() {
  std::vector<double> t;
  for (int i = 0; i < 10; ++i) t.push_back(0.5 + 0.05 * i);
  return t;
}

EvalReport Evaluate(std::span<const ImageData> images, int num_known_classes,
                    const MetricConfig& cfg) {
  CheckConfig(cfg);
  EvalReport report;
  report.k = cfg.k;
  report.num_images = static_cast<int>(images.size());

  const RecallResult recall = RecallAtK(images, cfg);
  report.recall_at_k = recall.recall;
  report.unknown_gt = recall.total;
  report.unknown_matched = recall.matched;

  FprResult fpr = FprAtK(images, cfg);
  report.fpr_at_k = fpr.fpr;
  report.false_positives = fpr.false_positives;
  report.images_with_roi = fpr.images_with_roi;
  report.diagnostics = std::move(fpr.diagnostics);

  for (const ImageData& image : images) {
    for (const Detection& d : image.detections) {
      IsOod(d.label) ? ++report.kept_unknown : ++report.kept_known;
    }
  }

  const std::vector<double> thresholds = CocoIouThresholds();
  double map_sum = 0.0;
  double ap50_sum = 0.0;
  int present = 0;
  for (int c = 0; c < num_known_classes; ++c) {
    ClassAp entry;
    entry.label = c;
    for (const ImageData& image : images) {
      for (const GroundTruth& g : image.ground_truth) {
        entry.num_gt += g.label == c;
      }
    }
    if (entry.num_gt > 0) {
      double sum = 0.0;
      for (const double t : thresholds) {
        const std::optional<double> ap = AveragePrecision(images, c, t, cfg);
        sum += ap.value_or(0.0);
        if (t == 0.5) entry.ap50 = ap;
      }
      entry.ap = sum / static_cast<double>(thresholds.size());
      map_sum += *entry.ap;
      ap50_sum += entry.ap50.value_or(0.0);
      ++present;
    }
    report.per_class.push_back(entry);
  }
  if (present > 0) {
    report.map_known = map_sum / present;
    report.ap50_known = ap50_sum / present;
  }
  return report;
}

}  // namespace occfilter
