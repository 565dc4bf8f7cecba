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

#include "occfilter/detection.h"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace occfilter {

std::string_view ProvenanceName(Provenance p) {
  switch (p) {
    case Provenance::kStandard:
      return "standard";
    case Provenance::kRecallEnhanced:
      return "recall_enhanced";
  }
  return "standard";
}

std::optional<Provenance> ParseProvenance(std::string_view name) {
  if (name == "standard") return Provenance::kStandard;
  if (name == "recall_enhanced") return Provenance::kRecallEnhanced;
  return std::nullopt;
}

LabelSpace::LabelSpace(std::vector<std::string> known_names)
    : names_(std::move(known_names)) {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty() || names_[i] == kOodName) {
      throw std::invalid_argument("invalid known class name '" + names_[i] +
                                  "'");
    }
    if (std::find(names_.begin(), names_.begin() + i, names_[i]) !=
        names_.begin() + i) {
      throw std::invalid_argument("duplicate known class name '" + names_[i] +
                                  "'");
    }
  }
}

LabelSpace LabelSpace::AutonomousDriving() {
  return LabelSpace({"person", "rider", "car", "truck", "bicycle", "train",
                     "bus", "motorcycle"});
}

std::optional<int> LabelSpace::Find(std::string_view name) const {
  if (name == kOodName) return kOodLabel;
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) return std::nullopt;
  return static_cast<int>(it - names_.begin());
}

std::string LabelSpace::Name(int label) const {
  if (IsOod(label)) return std::string(kOodName);
  if (label < 0 || label >= num_known()) {
    throw std::out_of_range("label " + std::to_string(label) +
                            " outside the label space");
  }
  return names_[label];
}

}  // namespace occfilter
