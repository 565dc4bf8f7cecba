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

#include "occfilter/pipeline.h"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <set>
#include <thread>

#include "json.hpp"
#include "occfilter/image_io.h"

namespace occfilter {

namespace {

using Json = nlohmann::json;
using OrderedJson = nlohmann::ordered_json;
namespace fs = std::filesystem;

template <typename T>
void Read(const Json& obj, const char* key, T& field) {
  if (!obj.contains(key)) return;
  try {
    field = obj.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config field '") + key + "': " + e.what());
  }
}

std::string Resolve(const fs::path& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (base / p).lexically_normal().string();
}

struct ImageOutcome {
  std::optional<ImageData> data;
  std::vector<Detection> kept;
  std::vector<std::string> diagnostics;
  std::string error;
};

}  // namespace

void PipelineConfig::Validate() const {
  try {
    filter.Validate();
    dfr.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (metrics.k < 1) throw ConfigError("metrics.k must be >= 1");
  if (!(metrics.iou_thr > 0.0 && metrics.iou_thr <= 1.0)) {
    throw ConfigError("metrics.iou_thr must lie in (0, 1]");
  }
  if (!(metrics.roi_fraction > 0.0 && metrics.roi_fraction <= 1.0)) {
    throw ConfigError("metrics.roi_fraction must lie in (0, 1]");
  }
  if (!(depth_scale > 0.0)) throw ConfigError("depth_scale must be positive");
  if (threshold_quantiles < 1) {
    throw ConfigError("mask2box.quantiles must be >= 1");
  }
  if (!std::is_sorted(thresholds.begin(), thresholds.end())) {
    throw ConfigError("mask2box.thresholds must be sorted ascending");
  }
  if (workers < 0) throw ConfigError("workers must be >= 0");
}

PipelineConfig LoadPipelineConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path + "': " + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");

  PipelineConfig cfg;
  const fs::path base = fs::path(path).parent_path();
  if (j.contains("filter")) {
    const Json& f = j["filter"];
    Read(f, "enabled", cfg.filter_enabled);
    Read(f, "mu_sco", cfg.filter.mu_sco);
    Read(f, "mu_occ", cfg.filter.mu_occ);
    Read(f, "budget", cfg.filter.budget);
    Read(f, "w_o", cfg.filter.w_o);
  }
  if (j.contains("dfr")) {
    const Json& d = j["dfr"];
    Read(d, "enabled", cfg.dfr_enabled);
    Read(d, "close_kernel", cfg.dfr.close_kernel);
    Read(d, "sobel_kernel", cfg.dfr.sobel_kernel);
    Read(d, "change_threshold", cfg.dfr.change_threshold);
    Read(d, "mu", cfg.dfr.mu);
  }
  if (j.contains("metrics")) {
    const Json& m = j["metrics"];
    Read(m, "k", cfg.metrics.k);
    Read(m, "iou_thr", cfg.metrics.iou_thr);
    Read(m, "roi_fraction", cfg.metrics.roi_fraction);
  }
  if (j.contains("label_space")) {
    std::vector<std::string> names;
    Read(j, "label_space", names);
    try {
      cfg.labels = LabelSpace(std::move(names));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (j.contains("paths")) {
    const Json& p = j["paths"];
    Read(p, "detections", cfg.detections_path);
    Read(p, "ground_truth", cfg.ground_truth_path);
    Read(p, "depth", cfg.depth_pattern);
    Read(p, "roi", cfg.roi_pattern);
    Read(p, "report", cfg.report_path);
  }
  cfg.detections_path = Resolve(base, cfg.detections_path);
  cfg.ground_truth_path = Resolve(base, cfg.ground_truth_path);
  cfg.depth_pattern = Resolve(base, cfg.depth_pattern);
  cfg.roi_pattern = Resolve(base, cfg.roi_pattern);
  cfg.report_path = Resolve(base, cfg.report_path);
  Read(j, "depth_scale", cfg.depth_scale);
  if (j.contains("mask2box")) {
    Read(j["mask2box"], "thresholds", cfg.thresholds);
    Read(j["mask2box"], "quantiles", cfg.threshold_quantiles);
  }
  Read(j, "workers", cfg.workers);
  cfg.Validate();
  return cfg;
}

std::string PipelineConfigToJson(const PipelineConfig& cfg) {
  OrderedJson j;
  j["filter"] = {{"enabled", cfg.filter_enabled},
                 {"mu_sco", cfg.filter.mu_sco},
                 {"mu_occ", cfg.filter.mu_occ},
                 {"budget", cfg.filter.budget},
                 {"w_o", cfg.filter.w_o}};
  j["dfr"] = {{"enabled", cfg.dfr_enabled},
              {"close_kernel", cfg.dfr.close_kernel},
              {"sobel_kernel", cfg.dfr.sobel_kernel},
              {"change_threshold", cfg.dfr.change_threshold},
              {"mu", cfg.dfr.mu}};
  j["metrics"] = {{"k", cfg.metrics.k},
                  {"iou_thr", cfg.metrics.iou_thr},
                  {"roi_fraction", cfg.metrics.roi_fraction}};
  j["label_space"] = cfg.labels.known_names();
  j["paths"] = {{"detections", cfg.detections_path},
                {"ground_truth", cfg.ground_truth_path},
                {"depth", cfg.depth_pattern},
                {"roi", cfg.roi_pattern},
                {"report", cfg.report_path}};
  j["depth_scale"] = cfg.depth_scale;
  j["mask2box"] = {{"thresholds", cfg.thresholds},
                   {"quantiles", cfg.threshold_quantiles}};
  j["workers"] = cfg.workers;
  return j.dump(2) + "\n";
}

std::string ExpandImagePattern(const std::string& pattern,
                               const std::string& image_id) {
  static constexpr std::string_view kToken = "{image_id}";
  std::string out = pattern;
  for (std::size_t pos = out.find(kToken); pos != std::string::npos;
       pos = out.find(kToken, pos + image_id.size())) {
    out.replace(pos, kToken.size(), image_id);
  }
  return out;
}

std::vector<Detection> ProcessImage(std::span<const Detection> dets,
                                    const DepthMap* depth,
                                    const PipelineConfig& cfg,
                                    std::vector<std::string>* diagnostics) {
  std::vector<Detection> current =
      cfg.filter_enabled ? OodRecallEnhancement(dets, cfg.filter)
                         : std::vector<Detection>(dets.begin(), dets.end());
  if (cfg.dfr_enabled) {
    if (depth == nullptr) {
      throw std::invalid_argument("depth map required for DFR is missing");
    }
    current = DfrFilter(current, *depth, cfg.dfr, diagnostics);
  }
  std::vector<Detection> kept =
      BudgetTopK(current, cfg.filter.budget, Selector::kKnown);
  std::vector<Detection> unknown =
      BudgetTopK(current, cfg.filter.budget, Selector::kUnknown);
  kept.insert(kept.end(), unknown.begin(), unknown.end());
  return kept;
}

PipelineResult RunPipeline(const PipelineConfig& cfg) {
  cfg.Validate();
  const DetectionsByImage dets =
      LoadDetections(cfg.detections_path, cfg.labels);
  const GroundTruthByImage gts =
      LoadGroundTruth(cfg.ground_truth_path, cfg.labels);
  return RunPipeline(cfg, dets, gts);
}

PipelineResult RunPipeline(const PipelineConfig& cfg,
                           const DetectionsByImage& detections,
                           const GroundTruthByImage& ground_truth,
                           const std::map<std::string, DepthMap>* depths,
                           const std::map<std::string, BinaryMask>* rois) {
  cfg.Validate();
  std::set<std::string> id_set;
  for (const auto& [id, _] : detections) id_set.insert(id);
  for (const auto& [id, _] : ground_truth) id_set.insert(id);
  const std::vector<std::string> ids(id_set.begin(), id_set.end());

  std::vector<ImageOutcome> outcomes(ids.size());
  auto run_one = [&](std::size_t i) {
    const std::string& id = ids[i];
    ImageOutcome& out = outcomes[i];
    try {
      ImageData data;
      data.image_id = id;
      if (auto it = ground_truth.find(id); it != ground_truth.end()) {
        data.ground_truth = it->second;
      }
      std::optional<DepthMap> loaded_depth;
      const DepthMap* depth = nullptr;
      if (cfg.dfr_enabled) {
        if (depths != nullptr) {
          if (auto it = depths->find(id); it != depths->end()) {
            depth = &it->second;
          }
        } else if (!cfg.depth_pattern.empty()) {
          loaded_depth = LoadDepth(ExpandImagePattern(cfg.depth_pattern, id),
                                   cfg.depth_scale);
          depth = &*loaded_depth;
        }
      }
      if (rois != nullptr) {
        if (auto it = rois->find(id); it != rois->end()) data.roi = it->second;
      } else if (!cfg.roi_pattern.empty()) {
        const std::string roi_path = ExpandImagePattern(cfg.roi_pattern, id);
        if (fs::exists(roi_path)) data.roi = LoadMask(roi_path);
      }
      static const std::vector<Detection> kNone;
      const auto it = detections.find(id);
      const std::vector<Detection>& raw =
          it != detections.end() ? it->second : kNone;
      std::vector<std::string> diag;
      data.detections = ProcessImage(raw, depth, cfg, &diag);
      for (std::string& d : diag) out.diagnostics.push_back(id + ": " + d);
      out.kept = data.detections;
      out.data = std::move(data);
    } catch (const std::exception& e) {
      out.error = e.what();
    }
  };

  unsigned workers = cfg.workers > 0 ? static_cast<unsigned>(cfg.workers)
                                     : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, ids.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < ids.size(); ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < ids.size(); i = next++) run_one(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  PipelineResult result;
  std::vector<ImageData> images;
  std::vector<std::string> diagnostics;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    ImageOutcome& o = outcomes[i];
    diagnostics.insert(diagnostics.end(), o.diagnostics.begin(),
                       o.diagnostics.end());
    if (!o.error.empty()) {
      result.skipped.push_back(ids[i] + ": " + o.error);
      continue;
    }
    result.kept[ids[i]] = std::move(o.kept);
    images.push_back(std::move(*o.data));
  }
  result.report = Evaluate(images, cfg.labels.num_known(), cfg.metrics);
  result.report.skipped_images = static_cast<int>(result.skipped.size());
  for (const std::string& s : result.skipped) {
    diagnostics.push_back("skipped " + s);
  }
  diagnostics.insert(diagnostics.end(), result.report.diagnostics.begin(),
                     result.report.diagnostics.end());
  result.report.diagnostics = std::move(diagnostics);
  return result;
}

}  // namespace occfilter
