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

// Synthetic driving scenes with known ground truth.
//
// The ground plane is rendered as disparity-like depth: constant above the
// horizon row and growing linearly by ramp_slope per row below it. Objects
// with 3D extent are painted at the constant depth of their ground contact
// row; overlapping objects keep the nearer (larger) value. Ghosts are
// appearance-only regions (road markings, shadows) that leave depth
// untouched and are never annotated.
//
// Fixture contract: with the default 5x5 Sobel, the interior ramp response is
// 128 * ramp_slope. The default slope of 0.15 gives 19.2, clear of the
// default change threshold of 10.

#ifndef OCCFILTER_SYNTH_H_
#define OCCFILTER_SYNTH_H_

#include <cstdint>
#include <span>
#include <vector>

#include "occfilter/detection.h"
#include "occfilter/geometry.h"
#include "occfilter/metrics.h"
#include "occfilter/raster.h"

namespace occfilter {

struct SceneParams {
  int width = 320;
  int height = 240;
  int horizon = 80;
  float far_depth = 20.0f;
  float ramp_slope = 0.15f;

  int min_objects = 2;
  int max_objects = 5;
  int min_ghosts = 1;
  int max_ghosts = 3;
  int min_size = 24;
  int max_size = 56;
  // Free pixels kept between any two placed regions.
  int spacing = 12;
  // Probability that an object is an unknown (OOD) rather than known class.
  double unknown_fraction = 0.5;
  int num_known_classes = 8;

  // Planted detections (see PlantDetections).
  int min_detections_per_ghost = 20;
  int max_detections_per_ghost = 45;
  int background_detections = 30;

  void Validate() const;
};

struct SceneObject {
  BoundingBox box;
  // Known class index or kOodLabel; ghosts carry kOodLabel.
  int label = kOodLabel;
  bool is_3d = true;
  // Painted depth; unused for ghosts.
  float depth = 0.0f;
};

struct Scene {
  int width = 0;
  int height = 0;
  int horizon = 0;
  float far_depth = 0.0f;
  float ramp_slope = 0.0f;
  std::vector<SceneObject> objects;
  std::uint64_t seed = 0;
};

struct SyntheticScene {
  Scene scene;
  DepthMap depth;
  // Road region: every row at or below the horizon.
  BinaryMask roi;
  // 3D objects only.
  std::vector<GroundTruth> ground_truth;
};

// Deterministic in (params, seed). Objects and ghosts lie on the road with at
// least `spacing` pixels between them; ghosts keep 4 rows clear of the
// horizon and the bottom border.
SyntheticScene GenerateScene(const SceneParams& params, std::uint64_t seed);

// Ground-plane depth at `row` for the given scene parameters.
float GroundDepth(const Scene& scene, int row);

// Detector-like output for a scene, the way the pipeline would receive it:
//  * one exact-box standard detection per known object (sco in [0.5, 0.95]);
//  * one detection per unknown object, jittered by at most 1 px, either an
//    OOD-labeled standard detection (sco in [0.02, 0.5]) or a low-sco,
//    high-occ candidate (sco < 0.01, occ in [0.05, 0.5]);
//  * several detections per ghost, jittered by up to 3 px, OOD-labeled with
//    sco in [0.6, 0.95], i.e. ranked above every real unknown;
//  * background clutter with sco and occ below 0.01.
// Class-score vectors have K + 1 entries with the argmax at the label.
std::vector<Detection> PlantDetections(const SyntheticScene& scene,
                                       const SceneParams& params,
                                       std::uint64_t seed);

// Brute-force occupancy: the fraction of a resolution x resolution grid of
// cell-centre samples over `pred` that falls inside any ground-truth box.
double RasterOccupancyOracle(const BoundingBox& pred,
                             std::span<const BoundingBox> gts, int resolution);

}  // namespace occfilter

#endif  // OCCFILTER_SYNTH_H_
