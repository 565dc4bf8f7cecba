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

// Depth-based false-positive reduction.
//
// The depth map is closed (dilation then erosion with a square element) to
// remove small holes, then differentiated vertically with a Sobel kernel.
// Ground surfaces recede steadily with image row and show a large vertical
// depth change everywhere; objects standing on the ground are close to
// constant depth over their extent. A box is accepted when the fraction of
// its pixels with |change| < change_threshold reaches mu.
//
// change_threshold assumes depth on an 8-bit-like scale (0..255). Scale the
// depth map on load (see DepthScale in the harness) or adjust the threshold.

#ifndef OCCFILTER_DEPTH_FILTER_H_
#define OCCFILTER_DEPTH_FILTER_H_

#include <span>
#include <string>
#include <vector>

#include "occfilter/detection.h"
#include "occfilter/geometry.h"
#include "occfilter/raster.h"

namespace occfilter {

struct DfrConfig {
  int close_kernel = 10;
  int sobel_kernel = 5;
  double change_threshold = 10.0;
  double mu = 0.3;

  void Validate() const;
};

// Grayscale closing with a k x k square. For even k the dilation window
// spans [-k/2, k/2 - 1] and the erosion uses its reflection, so the pair is
// an adjunction and the result is a true closing (idempotent, extensive).
// Out-of-raster pixels are edge-replicated, which for max/min filters is the
// same as restricting the window to the raster.
DepthMap MorphologicalClose(const DepthMap& depth, int k);

// Separable kernels of the order-k Sobel first derivative: a binomial
// smoothing row of length k and the derivative row binomial(k - 2) * [-1 0 1].
struct SobelKernels {
  std::vector<double> smooth;
  std::vector<double> derivative;
};
SobelKernels MakeSobelKernels(int k);

// Correlation with the vertical Sobel kernel (smoothing across x, derivative
// across y), edge-replicated borders. Positive where depth grows downward.
// Throws std::invalid_argument unless k is odd and >= 3.
DepthChangeMap SobelY(const DepthMap& depth, int k);
// Same, reusing the storage of `depth`.
DepthChangeMap SobelYInPlace(DepthMap&& depth, int k);

// SobelY(MorphologicalClose(depth, close_kernel), sobel_kernel).
DepthChangeMap ComputeDepthChange(const DepthMap& depth, const DfrConfig& cfg);

// Fraction of in-box pixels with |change| < change_threshold. Throws
// std::invalid_argument when the clipped box covers no pixel.
double FlatnessProportion(const DepthChangeMap& change, const BoundingBox& box,
                          const DfrConfig& cfg);

struct DfrDecision {
  double flatness = 0.0;
  bool accepted = false;
  // Set when the box could not be evaluated; such boxes are rejected.
  std::string error;
};

// Per-detection decisions against a precomputed change map.
std::vector<DfrDecision> EvaluateDfr(std::span<const Detection> dets,
                                     const DepthChangeMap& change,
                                     const DfrConfig& cfg);

// Detections whose flatness proportion is >= mu, in input order. Boxes that
// cannot be evaluated are dropped and described in `diagnostics` when given.
std::vector<Detection> DfrFilter(
    std::span<const Detection> dets, const DepthMap& depth,
    const DfrConfig& cfg, std::vector<std::string>* diagnostics = nullptr);

}  // namespace occfilter

#endif  // OCCFILTER_DEPTH_FILTER_H_
