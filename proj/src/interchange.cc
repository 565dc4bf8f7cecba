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

#include "occfilter/interchange.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace occfilter {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;

// Context for one record: reports errors as "path:line: message".
class Record {
 public:
  Record(const std::string& path, int line, Json value)
      : path_(path), line_(line), value_(std::move(value)) {}

  [[noreturn]] void Fail(const std::string& message) const {
    throw FormatError(Where() + ": " + message);
  }
  std::string Where() const { return path_ + ":" + std::to_string(line_); }

  bool Has(const char* key) const { return value_.contains(key); }

  std::string String(const char* key) const {
    if (!Has(key)) Fail(std::string("missing field '") + key + "'");
    const Json& v = value_.at(key);
    if (!v.is_string())
      Fail(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
  }

  double Number(const char* key) const {
    if (!Has(key)) Fail(std::string("missing field '") + key + "'");
    return AsNumber(value_.at(key), key);
  }

  double AsNumber(const Json& v, const char* key) const {
    if (!v.is_number())
      Fail(std::string("field '") + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d))
      Fail(std::string("field '") + key + "' is not finite");
    return d;
  }

  double Score(const char* key) const {
    const double v = Number(key);
    if (v < 0.0 || v > 1.0) {
      Fail(std::string("field '") + key + "' = " + FormatDouble(v) +
           " outside [0, 1]");
    }
    return v;
  }

  BoundingBox Box() const {
    BoundingBox b{Number("x1"), Number("y1"), Number("x2"), Number("y2")};
    if (!b.IsValid()) Fail("box requires x1 <= x2 and y1 <= y2");
    return b;
  }

  const Json& value() const { return value_; }

  static std::string FormatDouble(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
  }

 private:
  const std::string& path_;
  int line_;
  Json value_;
};

// Calls `handle` for every record after validating the header line.
void ForEachRecord(const std::string& path, const std::string& schema,
                   const std::function<void(const Record&)>& handle) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open file");
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json value;
    try {
      value = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": invalid JSON (" + e.what() + ")");
    }
    if (!value.is_object()) {
      throw FormatError(path + ":" + std::to_string(line_no) +
                        ": record must be a JSON object");
    }
    Record record(path, line_no, std::move(value));
    if (!header_seen) {
      if (!record.Has("schema")) record.Fail("missing schema header line");
      if (record.String("schema") != schema) {
        record.Fail("expected schema '" + schema + "', found '" +
                    record.String("schema") + "'");
      }
      if (record.Number("version") != kInterchangeVersion) {
        record.Fail("unsupported version");
      }
      header_seen = true;
      continue;
    }
    handle(record);
  }
}

std::string HeaderLine(const char* schema) {
  OrderedJson h;
  h["schema"] = schema;
  h["version"] = kInterchangeVersion;
  return h.dump();
}

void WriteLines(const std::string& path,
                const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path + ": cannot write file");
  for (const std::string& l : lines) out << l << '\n';
  if (!out) throw FormatError(path + ": write failed");
}

OrderedJson BoxFields(const std::string& image_id, const BoundingBox& b) {
  OrderedJson j;
  j["image_id"] = image_id;
  j["x1"] = b.x1;
  j["y1"] = b.y1;
  j["x2"] = b.x2;
  j["y2"] = b.y2;
  return j;
}

Json Optional(const std::optional<double>& v) {
  return v.has_value() ? Json(*v) : Json(nullptr);
}

}  // namespace

DetectionsByImage LoadDetections(const std::string& path,
                                 const LabelSpace& labels, Warnings* warnings) {
  DetectionsByImage out;
  ForEachRecord(path, kDetectionsSchema, [&](const Record& r) {
    Detection d;
    const std::string image_id = r.String("image_id");
    d.box = r.Box();
    const std::string label = r.String("label");
    const std::optional<int> resolved = labels.Find(label);
    if (!resolved) r.Fail("unknown label '" + label + "'");
    d.label = *resolved;
    d.sco = r.Score("sco");
    if (r.Has("occ")) {
      d.occ = r.Score("occ");
    } else if (warnings != nullptr) {
      warnings->push_back(r.Where() + ": missing 'occ', defaulted to 0");
    }
    if (r.Has("provenance")) {
      const auto p = ParseProvenance(r.String("provenance"));
      if (!p) r.Fail("unknown provenance '" + r.String("provenance") + "'");
      d.provenance = *p;
    }
    if (r.Has("class_scores")) {
      const Json& arr = r.value().at("class_scores");
      if (!arr.is_array()) r.Fail("'class_scores' must be an array");
      if (arr.size() != static_cast<std::size_t>(labels.num_known() + 1)) {
        r.Fail("'class_scores' must have " +
               std::to_string(labels.num_known() + 1) + " entries");
      }
      for (const Json& v : arr) {
        const double s = r.AsNumber(v, "class_scores");
        if (s < 0.0 || s > 1.0) r.Fail("class score outside [0, 1]");
        d.class_scores.push_back(s);
      }
    }
    out[image_id].push_back(std::move(d));
  });
  return out;
}

void SaveDetections(const std::string& path, const DetectionsByImage& dets,
                    const LabelSpace& labels) {
  std::vector<std::string> lines{HeaderLine(kDetectionsSchema)};
  for (const auto& [image_id, list] : dets) {
    for (const Detection& d : list) {
      OrderedJson j = BoxFields(image_id, d.box);
      j["label"] = labels.Name(d.label);
      j["sco"] = d.sco;
      j["occ"] = d.occ;
      j["provenance"] = std::string(ProvenanceName(d.provenance));
      if (!d.class_scores.empty()) j["class_scores"] = d.class_scores;
      lines.push_back(j.dump());
    }
  }
  WriteLines(path, lines);
}

GroundTruthByImage LoadGroundTruth(const std::string& path,
                                   const LabelSpace& labels) {
  GroundTruthByImage out;
  ForEachRecord(path, kGroundTruthSchema, [&](const Record& r) {
    GroundTruth g;
    const std::string image_id = r.String("image_id");
    g.box = r.Box();
    const std::string label = r.String("label");
    const std::optional<int> resolved = labels.Find(label);
    if (!resolved) r.Fail("unknown label '" + label + "'");
    g.label = *resolved;
    if (r.Has("known")) {
      const Json& k = r.value().at("known");
      if (!k.is_boolean()) r.Fail("'known' must be a boolean");
      if (k.get<bool>() != g.known()) {
        r.Fail("'known' flag disagrees with label '" + label + "'");
      }
    }
    out[image_id].push_back(g);
  });
  return out;
}

void SaveGroundTruth(const std::string& path, const GroundTruthByImage& gts,
                     const LabelSpace& labels) {
  std::vector<std::string> lines{HeaderLine(kGroundTruthSchema)};
  for (const auto& [image_id, list] : gts) {
    for (const GroundTruth& g : list) {
      OrderedJson j = BoxFields(image_id, g.box);
      j["label"] = labels.Name(g.label);
      j["known"] = g.known();
      lines.push_back(j.dump());
    }
  }
  WriteLines(path, lines);
}

AnnotationsByImage LoadAnnotations(const std::string& path) {
  AnnotationsByImage out;
  ForEachRecord(path, kGroundTruthSchema, [&](const Record& r) {
    Annotation a;
    const std::string image_id = r.String("image_id");
    a.box = r.Box();
    a.source_label = r.String("label");
    out[image_id].push_back(std::move(a));
  });
  return out;
}

void SaveAnnotations(const std::string& path, const AnnotationsByImage& anns,
                     const LabelSpace& labels) {
  std::vector<std::string> lines{HeaderLine(kGroundTruthSchema)};
  for (const auto& [image_id, list] : anns) {
    for (const Annotation& a : list) {
      OrderedJson j = BoxFields(image_id, a.box);
      if (a.label.has_value()) {
        j["label"] = labels.Name(*a.label);
        j["known"] = !IsOod(*a.label);
        j["source_label"] = a.source_label;
      } else {
        j["label"] = a.source_label;
      }
      lines.push_back(j.dump());
    }
  }
  WriteLines(path, lines);
}

std::string ReportToJson(const EvalReport& report, const LabelSpace& labels) {
  OrderedJson j;
  j["schema"] = kReportSchema;
  j["version"] = kInterchangeVersion;
  j["k"] = report.k;
  j["map_known_pct"] = Optional(report.map_known);
  j["ap50_known_pct"] = Optional(report.ap50_known);
  j["recall_at_k_pct"] = Optional(report.recall_at_k);
  j["fpr_at_k_permille"] = Optional(report.fpr_at_k);
  j["num_images"] = report.num_images;
  j["images_with_roi"] = report.images_with_roi;
  j["skipped_images"] = report.skipped_images;
  j["unknown_gt"] = report.unknown_gt;
  j["unknown_matched"] = report.unknown_matched;
  j["false_positives"] = report.false_positives;
  j["kept_unknown"] = report.kept_unknown;
  j["kept_known"] = report.kept_known;
  OrderedJson classes = OrderedJson::array();
  for (const ClassAp& c : report.per_class) {
    OrderedJson e;
    e["label"] = labels.num_known() > c.label ? labels.Name(c.label)
                                              : std::to_string(c.label);
    e["num_gt"] = c.num_gt;
    e["ap_pct"] = Optional(c.ap);
    e["ap50_pct"] = Optional(c.ap50);
    classes.push_back(e);
  }
  j["per_class"] = classes;
  j["diagnostics"] = report.diagnostics;
  return j.dump(2) + "\n";
}

void SaveReport(const std::string& path, const EvalReport& report,
                const LabelSpace& labels) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path + ": cannot write file");
  out << ReportToJson(report, labels);
  if (!out) throw FormatError(path + ": write failed");
}

std::string FormatReportTable(const EvalReport& report,
                              const LabelSpace& labels) {
  auto fmt = [](const std::optional<double>& v, const char* unit) {
    if (!v) return std::string("undefined");
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f %s", *v, unit);
    return std::string(buf);
  };
  std::ostringstream os;
  os << "images          " << report.num_images << " ("
     << report.images_with_roi << " with RoI, " << report.skipped_images
     << " skipped)\n";
  os << "mAP (known)     " << fmt(report.map_known, "%") << "\n";
  os << "AP50 (known)    " << fmt(report.ap50_known, "%") << "\n";
  os << "R@" << std::left << std::setw(13) << report.k
     << fmt(report.recall_at_k, "%") << "  (" << report.unknown_matched << "/"
     << report.unknown_gt << " unknown objects)\n";
  os << "FPR@" << std::left << std::setw(11) << report.k
     << fmt(report.fpr_at_k, "permille") << "  (" << report.false_positives
     << " false positives)\n";
  bool header = false;
  for (const ClassAp& c : report.per_class) {
    if (c.num_gt == 0) continue;
    if (!header) {
      os << "\nclass         #gt      AP    AP50\n";
      header = true;
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-12s %4d  %6.2f  %6.2f\n",
                  labels.Name(c.label).c_str(), c.num_gt, c.ap.value_or(0.0),
                  c.ap50.value_or(0.0));
    os << buf;
  }
  return os.str();
}

}  // namespace occfilter
