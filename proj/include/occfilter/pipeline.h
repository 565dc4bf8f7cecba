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

// End-to-end evaluation: per image, filtering with OOD recall enhancement,
// optional depth-based false-positive reduction, per-selector budget, then
// dataset-level metrics.

#ifndef OCCFILTER_PIPELINE_H_
#define OCCFILTER_PIPELINE_H_

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "occfilter/depth_filter.h"
#include "occfilter/detection.h"
#include "occfilter/interchange.h"
#include "occfilter/metrics.h"
#include "occfilter/occupancy_scoring.h"

namespace occfilter {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConfig {
  bool filter_enabled = true;
  FilterConfig filter;
  bool dfr_enabled = false;
  DfrConfig dfr;
  MetricConfig metrics;
  LabelSpace labels = LabelSpace::AutonomousDriving();

  std::string detections_path;
  std::string ground_truth_path;
  // Per-image raster paths; "{image_id}" is substituted.
  std::string depth_pattern;
  std::string roi_pattern;
  std::string report_path;
  double depth_scale = 1.0;

  // mask2box threshold grid; empty means QuantileThresholds(scores,
  // threshold_quantiles).
  std::vector<double> thresholds;
  int threshold_quantiles = 16;

  // 0 = hardware concurrency.
  int workers = 0;

  // Throws ConfigError.
  void Validate() const;
};

// Reads a JSON config. Relative paths are resolved against the config file's
// directory. Throws ConfigError.
PipelineConfig LoadPipelineConfig(const std::string& path);
std::string PipelineConfigToJson(const PipelineConfig& cfg);

std::string ExpandImagePattern(const std::string& pattern,
                               const std::string& image_id);

// Filtering stages for one image. `depth` is required when DFR is enabled.
std::vector<Detection> ProcessImage(std::span<const Detection> dets,
                                    const DepthMap* depth,
                                    const PipelineConfig& cfg,
                                    std::vector<std::string>* diagnostics);

struct PipelineResult {
  EvalReport report;
  // Detections kept per image after all stages.
  DetectionsByImage kept;
  // "image_id: reason" for every image that failed and was left out.
  std::vector<std::string> skipped;
};

// Runs every image found in the detection and ground-truth files. Images are
// processed by a bounded worker pool; results are reduced in image-id order,
// so the output does not depend on scheduling.
PipelineResult RunPipeline(const PipelineConfig& cfg);

// Same, on in-memory data (depth/RoI still come from the configured patterns
// unless provided here, keyed by image id).
PipelineResult RunPipeline(
    const PipelineConfig& cfg, const DetectionsByImage& detections,
    const GroundTruthByImage& ground_truth,
    const std::map<std::string, DepthMap>* depths = nullptr,
    const std::map<std::string, BinaryMask>* rois = nullptr);

}  // namespace occfilter

#endif  // OCCFILTER_PIPELINE_H_
