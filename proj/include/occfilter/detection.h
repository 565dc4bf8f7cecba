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

#ifndef OCCFILTER_DETECTION_H_
#define OCCFILTER_DETECTION_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "occfilter/geometry.h"

namespace occfilter {

// Label of a detection or annotation: a known class index in [0, K) or the
// out-of-distribution marker.
inline constexpr int kOodLabel = -1;

inline bool IsOod(int label) { return label == kOodLabel; }

enum class Provenance { kStandard, kRecallEnhanced };

std::string_view ProvenanceName(Provenance p);
std::optional<Provenance> ParseProvenance(std::string_view name);

struct Detection {
  BoundingBox box;
  // K known-class probabilities followed by the OOD probability. May be empty
  // when the producer only reports a resolved label.
  std::vector<double> class_scores;
  // max class probability x objectness.
  double sco = 0.0;
  // Predicted occupancy.
  double occ = 0.0;
  int label = kOodLabel;
  Provenance provenance = Provenance::kStandard;

  friend bool operator==(const Detection&, const Detection&) = default;
};

// Names of the known classes; the OOD class is implicit and spelled "ood".
class LabelSpace {
 public:
  static constexpr std::string_view kOodName = "ood";

  LabelSpace() = default;
  explicit LabelSpace(std::vector<std::string> known_names);

  // person, rider, car, truck, bicycle, train, bus, motorcycle.
  static LabelSpace AutonomousDriving();

  int num_known() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& known_names() const { return names_; }

  // Index for a known name, kOodLabel for "ood", nullopt otherwise.
  std::optional<int> Find(std::string_view name) const;
  std::string Name(int label) const;

 private:
  std::vector<std::string> names_;
};

}  // namespace occfilter

#endif  // OCCFILTER_DETECTION_H_
