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

// Occupancy loss and the inference-time filtering cascade.

#ifndef OCCFILTER_OCCUPANCY_SCORING_H_
#define OCCFILTER_OCCUPANCY_SCORING_H_

#include <span>
#include <vector>

#include "occfilter/detection.h"

namespace occfilter {

inline constexpr double kOccupancyEpsilon = 1e-7;

struct FilterConfig {
  double mu_sco = 0.01;
  double mu_occ = 0.01;
  int budget = 100;
  // Occupancy loss weight. Only carried through configuration.
  double w_o = 1.0;

  // Throws std::invalid_argument on out-of-range fields.
  void Validate() const;
};

// Binary cross entropy between predicted occupancy and its target. The
// prediction is clamped into [eps, 1 - eps].
double OccupancyLoss(double predicted, double target);

// d OccupancyLoss / d predicted = (b - t) / (b (1 - b)) at the clamped b.
double OccupancyLossGradient(double predicted, double target);

// Index of the largest class score, mapped to kOodLabel when it is the last
// (OOD) entry. Returns `fallback` for empty scores. Ties go to the lowest
// index.
int ArgmaxLabel(std::span<const double> class_scores, int fallback);

// Keeps detections with sco >= mu_sco, relabels them by argmax and marks them
// standard.
std::vector<Detection> StandardFilter(std::span<const Detection> dets,
                                      const FilterConfig& cfg);

// StandardFilter plus detections with sco < mu_sco and occ >= mu_occ, which
// are relabeled OOD and marked recall-enhanced. Input order is preserved.
std::vector<Detection> OodRecallEnhancement(std::span<const Detection> dets,
                                            const FilterConfig& cfg);

enum class Selector { kKnown, kUnknown, kAll };

// sco for standard detections, occ for recall-enhanced ones.
double RankingScore(const Detection& d);

// Detections matching `selector`, sorted by RankingScore descending (stable in
// input order), truncated to k. Throws std::invalid_argument if k < 1.
std::vector<Detection> BudgetTopK(std::span<const Detection> dets, int k,
                                  Selector selector);

}  // namespace occfilter

#endif  // OCCFILTER_OCCUPANCY_SCORING_H_
