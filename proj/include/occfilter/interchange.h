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

// Line-delimited JSON interchange for detections, ground truth and
// annotations, plus the evaluation report. See docs/formats.md.

#ifndef OCCFILTER_INTERCHANGE_H_
#define OCCFILTER_INTERCHANGE_H_

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "occfilter/augment.h"
#include "occfilter/detection.h"
#include "occfilter/metrics.h"

namespace occfilter {

inline constexpr char kDetectionsSchema[] = "occfilter.detections";
inline constexpr char kGroundTruthSchema[] = "occfilter.ground_truth";
inline constexpr char kReportSchema[] = "occfilter.eval_report";
inline constexpr int kInterchangeVersion = 1;

// Malformed input; the message carries "path:line: reason".
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Image id -> records, in file order within each image.
using DetectionsByImage = std::map<std::string, std::vector<Detection>>;
using GroundTruthByImage = std::map<std::string, std::vector<GroundTruth>>;
using AnnotationsByImage = std::map<std::string, std::vector<Annotation>>;

// Non-fatal notes collected while loading (e.g. defaulted fields).
using Warnings = std::vector<std::string>;

DetectionsByImage LoadDetections(const std::string& path,
                                 const LabelSpace& labels,
                                 Warnings* warnings = nullptr);
void SaveDetections(const std::string& path, const DetectionsByImage& dets,
                    const LabelSpace& labels);

// Labels must resolve in `labels` ("ood" for unknown objects); an optional
// "known" field must agree with the label.
GroundTruthByImage LoadGroundTruth(const std::string& path,
                                   const LabelSpace& labels);
void SaveGroundTruth(const std::string& path, const GroundTruthByImage& gts,
                     const LabelSpace& labels);

// The ground-truth schema read with free-form source labels, as consumed by
// the augmentation tools before label remapping.
AnnotationsByImage LoadAnnotations(const std::string& path);
// Writes resolved labels when present, otherwise the source label.
void SaveAnnotations(const std::string& path, const AnnotationsByImage& anns,
                     const LabelSpace& labels);

// Self-describing key/value report (JSON object with a schema tag).
std::string ReportToJson(const EvalReport& report, const LabelSpace& labels);
void SaveReport(const std::string& path, const EvalReport& report,
                const LabelSpace& labels);
// Human-readable summary table.
std::string FormatReportTable(const EvalReport& report,
                              const LabelSpace& labels);

}  // namespace occfilter

#endif  // OCCFILTER_INTERCHANGE_H_
