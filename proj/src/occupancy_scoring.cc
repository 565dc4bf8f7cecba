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

#include "occfilter/occupancy_scoring.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace occfilter {

namespace {

double ClampPrediction(double b) {
  return std::clamp(b, kOccupancyEpsilon, 1.0 - kOccupancyEpsilon);
}

bool Selected(const Detection& d, Selector selector) {
  switch (selector) {
    case Selector::kKnown:
      return !IsOod(d.label);
    case Selector::kUnknown:
      return IsOod(d.label);
    case Selector::kAll:
      return true;
  }
  return true;
}

}  // namespace

void FilterConfig::Validate() const {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(mu_sco)) {
    throw std::invalid_argument("mu_sco must lie in [0, 1], got " +
                                std::to_string(mu_sco));
  }
  if (!in_unit(mu_occ)) {
    throw std::invalid_argument("mu_occ must lie in [0, 1], got " +
                                std::to_string(mu_occ));
  }
  if (budget < 1) {
    throw std::invalid_argument("budget must be >= 1, got " +
                                std::to_string(budget));
  }
}

double OccupancyLoss(double predicted, double target) {
  const double b = ClampPrediction(predicted);
  return -target * std::log(b) - (1.0 - target) * std::log1p(-b);
}

double OccupancyLossGradient(double predicted, double target) {
  const double b = ClampPrediction(predicted);
  return (b - target) / (b * (1.0 - b));
}

int ArgmaxLabel(std::span<const double> class_scores, int fallback) {
  if (class_scores.empty()) return fallback;
  const auto it = std::max_element(class_scores.begin(), class_scores.end());
  const auto index = static_cast<int>(it - class_scores.begin());
  if (index == static_cast<int>(class_scores.size()) - 1) return kOodLabel;
  return index;
}

std::vector<Detection> StandardFilter(std::span<const Detection> dets,
                                      const FilterConfig& cfg) {
  std::vector<Detection> kept;
  for (const Detection& d : dets) {
    if (d.sco < cfg.mu_sco) continue;
    Detection out = d;
    out.label = ArgmaxLabel(d.class_scores, d.label);
    out.provenance = Provenance::kStandard;
    kept.push_back(std::move(out));
  }
  return kept;
}

std::vector<Detection> OodRecallEnhancement(std::span<const Detection> dets,
                                            const FilterConfig& cfg) {
  std::vector<Detection> kept;
  for (const Detection& d : dets) {
    Detection out = d;
    if (d.sco >= cfg.mu_sco) {
      out.label = ArgmaxLabel(d.class_scores, d.label);
      out.provenance = Provenance::kStandard;
    } else if (d.occ >= cfg.mu_occ) {
      out.label = kOodLabel;
      out.provenance = Provenance::kRecallEnhanced;
    } else {
      continue;
    }
    kept.push_back(std::move(out));
  }
  return kept;
}

double RankingScore(const Detection& d) {
  return d.provenance == Provenance::kRecallEnhanced ? d.occ : d.sco;
}

std::vector<Detection> BudgetTopK(std::span<const Detection> dets, int k,
                                  Selector selector) {
  if (k < 1) {
    throw std::invalid_argument("budget k must be >= 1, got " +
                                std::to_string(k));
  }
  std::vector<Detection> selected;
  for (const Detection& d : dets) {
    if (Selected(d, selector)) selected.push_back(d);
  }
  std::stable_sort(selected.begin(), selected.end(),
                   [](const Detection& a, const Detection& b) {
                     return RankingScore(a) > RankingScore(b);
                   });
  if (selected.size() > static_cast<std::size_t>(k)) selected.resize(k);
  return selected;
}

}  // namespace occfilter
