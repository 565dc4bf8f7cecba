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

#include <algorithm>
#include <optional>
#include <random>
#include <stdexcept>

#include "occfilter/occupancy_scoring.h"
#include "random_util.h"

namespace occfilter {

namespace {

using internal::UniformInt;
using internal::UniformReal;

constexpr int kPlacementAttempts = 200;
constexpr int kGhostMargin = 4;

bool Collides(const BoundingBox& candidate, std::span<const SceneObject> placed,
              int spacing) {
  const BoundingBox grown{candidate.x1 - spacing, candidate.y1 - spacing,
                          candidate.x2 + spacing, candidate.y2 + spacing};
  return std::any_of(placed.begin(), placed.end(), [&](const SceneObject& o) {
    return IntersectArea(grown, o.box) > 0.0;
  });
}

std::optional<BoundingBox> Place(std::mt19937_64& rng, const SceneParams& p,
                                 int top, int bottom,
                                 std::span<const SceneObject> placed) {
  for (int attempt = 0; attempt < kPlacementAttempts; ++attempt) {
    const int w = UniformInt(rng, p.min_size, p.max_size);
    const int h = UniformInt(rng, p.min_size, p.max_size);
    if (bottom - top < h || p.width - 4 < w) return std::nullopt;
    const int x = UniformInt(rng, 2, p.width - 2 - w);
    const int y = UniformInt(rng, top, bottom - h);
    const BoundingBox box{double(x), double(y), double(x + w), double(y + h)};
    if (!Collides(box, placed, p.spacing)) return box;
  }
  return std::nullopt;
}

BoundingBox Jitter(std::mt19937_64& rng, const BoundingBox& b, int max_px,
                   int width, int height) {
  auto j = [&] {
    return static_cast<double>(UniformInt(rng, -max_px, max_px));
  };
  BoundingBox out{b.x1 + j(), b.y1 + j(), b.x2 + j(), b.y2 + j()};
  out.x1 = std::clamp(out.x1, 0.0, double(width - 1));
  out.y1 = std::clamp(out.y1, 0.0, double(height - 1));
  out.x2 = std::clamp(out.x2, out.x1 + 1.0, double(width));
  out.y2 = std::clamp(out.y2, out.y1 + 1.0, double(height));
  return out;
}

// K + 1 class scores with the peak at `index` (K means OOD).
std::vector<double> PeakedScores(std::mt19937_64& rng, int num_known, int index,
                                 double peak) {
  std::vector<double> scores(num_known + 1);
  for (double& s : scores) s = UniformReal(rng, 0.0, 0.05);
  scores[index] = peak;
  return scores;
}

}  // namespace

void SceneParams::Validate() const {
  if (width < 16 || height < 16) {
    throw std::invalid_argument("scene must be at least 16x16");
  }
  if (horizon < 0 || horizon >= height - 2 * kGhostMargin) {
    throw std::invalid_argument("horizon must leave room for the road");
  }
  if (min_size < 1 || max_size < min_size) {
    throw std::invalid_argument("invalid object size range");
  }
  if (min_objects < 0 || max_objects < min_objects || min_ghosts < 0 ||
      max_ghosts < min_ghosts) {
    throw std::invalid_argument("invalid object or ghost count range");
  }
  if (num_known_classes < 1) {
    throw std::invalid_argument("num_known_classes must be >= 1");
  }
  if (min_detections_per_ghost < 0 ||
      max_detections_per_ghost < min_detections_per_ghost ||
      background_detections < 0) {
    throw std::invalid_argument("invalid planted detection counts");
  }
}

float GroundDepth(const Scene& scene, int row) {
  if (row <= scene.horizon) return scene.far_depth;
  return scene.far_depth +
         scene.ramp_slope * static_cast<float>(row - scene.horizon);
}

SyntheticScene GenerateScene(const SceneParams& params, std::uint64_t seed) {
  params.Validate();
  std::mt19937_64 rng(seed);
  SyntheticScene out;
  Scene& scene = out.scene;
  scene.width = params.width;
  scene.height = params.height;
  scene.horizon = params.horizon;
  scene.far_depth = params.far_depth;
  scene.ramp_slope = params.ramp_slope;
  scene.seed = seed;

  const int road_top = params.horizon + kGhostMargin;
  const int road_bottom = params.height - kGhostMargin;
  const int num_objects =
      UniformInt(rng, params.min_objects, params.max_objects);
  for (int i = 0; i < num_objects; ++i) {
    const auto box = Place(rng, params, road_top, road_bottom, scene.objects);
    if (!box) continue;
    SceneObject obj;
    obj.box = *box;
    obj.is_3d = true;
    obj.label = (internal::UnitUniform(rng) < params.unknown_fraction)
                    ? kOodLabel
                    : UniformInt(rng, 0, params.num_known_classes - 1);
    obj.depth = GroundDepth(scene, static_cast<int>(box->y2) - 1);
    scene.objects.push_back(obj);
  }
  const int num_ghosts = UniformInt(rng, params.min_ghosts, params.max_ghosts);
  for (int i = 0; i < num_ghosts; ++i) {
    const auto box = Place(rng, params, road_top, road_bottom, scene.objects);
    if (!box) continue;
    SceneObject ghost;
    ghost.box = *box;
    ghost.is_3d = false;
    ghost.label = kOodLabel;
    scene.objects.push_back(ghost);
  }

  out.depth = DepthMap(params.width, params.height);
  for (int y = 0; y < params.height; ++y) {
    const float ground = GroundDepth(scene, y);
    for (float& v : out.depth.row(y)) v = ground;
  }
  std::vector<std::uint8_t> painted(out.depth.size(), 0);
  for (const SceneObject& obj : scene.objects) {
    if (!obj.is_3d) continue;
    const PixelRect r = PixelCover(obj.box, params.width, params.height);
    for (int y = r.y0; y < r.y1; ++y) {
      for (int x = r.x0; x < r.x1; ++x) {
        const std::size_t idx = static_cast<std::size_t>(y) * params.width + x;
        float& v = out.depth.at(x, y);
        v = painted[idx] ? std::max(v, obj.depth) : obj.depth;
        painted[idx] = 1;
      }
    }
    out.ground_truth.push_back({obj.box, obj.label});
  }

  out.roi = BinaryMask(params.width, params.height);
  for (int y = params.horizon; y < params.height; ++y) {
    for (std::uint8_t& v : out.roi.row(y)) v = 1;
  }
  return out;
}

std::vector<Detection> PlantDetections(const SyntheticScene& synthetic,
                                       const SceneParams& params,
                                       std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Scene& scene = synthetic.scene;
  const int k = params.num_known_classes;
  std::vector<Detection> dets;
  for (const SceneObject& obj : scene.objects) {
    if (obj.is_3d && !IsOod(obj.label)) {
      Detection d;
      d.box = obj.box;
      d.sco = UniformReal(rng, 0.5, 0.95);
      d.occ = UniformReal(rng, 0.5, 0.95);
      d.class_scores = PeakedScores(rng, k, obj.label, d.sco);
      d.label = obj.label;
      dets.push_back(std::move(d));
    } else if (obj.is_3d) {
      Detection d;
      d.box = Jitter(rng, obj.box, 1, scene.width, scene.height);
      if (internal::UnitUniform(rng) < 0.5) {
        d.sco = UniformReal(rng, 0.02, 0.5);
        d.occ = UniformReal(rng, 0.05, 0.5);
        d.class_scores = PeakedScores(rng, k, k, 0.6);
      } else {
        d.sco = UniformReal(rng, 0.0, 0.0099);
        d.occ = UniformReal(rng, 0.05, 0.5);
        // Low-confidence candidates often peak on a wrong known class.
        d.class_scores = PeakedScores(rng, k, UniformInt(rng, 0, k - 1), 0.3);
      }
      d.label = ArgmaxLabel(d.class_scores, kOodLabel);
      dets.push_back(std::move(d));
    } else {
      const int n = UniformInt(rng, params.min_detections_per_ghost,
                               params.max_detections_per_ghost);
      for (int i = 0; i < n; ++i) {
        Detection d;
        d.box = Jitter(rng, obj.box, 3, scene.width, scene.height);
        d.sco = UniformReal(rng, 0.6, 0.95);
        d.occ = UniformReal(rng, 0.3, 0.9);
        d.class_scores = PeakedScores(rng, k, k, 0.9);
        d.label = kOodLabel;
        dets.push_back(std::move(d));
      }
    }
  }
  for (int i = 0; i < params.background_detections; ++i) {
    const int w = UniformInt(rng, 4, std::max(4, scene.width / 4));
    const int h = UniformInt(rng, 4, std::max(4, scene.height / 4));
    const int x = UniformInt(rng, 0, scene.width - w);
    const int y = UniformInt(rng, 0, scene.height - h);
    Detection d;
    d.box = {double(x), double(y), double(x + w), double(y + h)};
    d.sco = UniformReal(rng, 0.0, 0.0099);
    d.occ = UniformReal(rng, 0.0, 0.0099);
    d.class_scores = PeakedScores(rng, k, UniformInt(rng, 0, k), 0.06);
    d.label = ArgmaxLabel(d.class_scores, kOodLabel);
    dets.push_back(std::move(d));
  }
  return dets;
}

double RasterOccupancyOracle(const BoundingBox& pred,
                             std::span<const BoundingBox> gts, int resolution) {
  if (resolution < 1) throw std::invalid_argument("resolution must be >= 1");
  const double dx = pred.width() / resolution;
  const double dy = pred.height() / resolution;
  long covered = 0;
  for (int j = 0; j < resolution; ++j) {
    const double y = pred.y1 + (j + 0.5) * dy;
    for (int i = 0; i < resolution; ++i) {
      const double x = pred.x1 + (i + 0.5) * dx;
      for (const BoundingBox& g : gts) {
        if (x >= g.x1 && x < g.x2 && y >= g.y1 && y < g.y2) {
          ++covered;
          break;
        }
      }
    }
  }
  return static_cast<double>(covered) /
         (static_cast<double>(resolution) * resolution);
}

}  // namespace occfilter
