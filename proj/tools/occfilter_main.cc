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

// occfilter command-line tool. Every subcommand reads an optional JSON config
// (--config) and applies its own flags on top.
//
// Exit status: 0 on success, 1 when some images were skipped, 2 on a fatal
// configuration or input error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "occfilter/augment.h"
#include "occfilter/bench.h"
#include "occfilter/depth_filter.h"
#include "occfilter/image_io.h"
#include "occfilter/interchange.h"
#include "occfilter/mask2box.h"
#include "occfilter/occupancy_scoring.h"
#include "occfilter/pipeline.h"
#include "occfilter/synth.h"

namespace occfilter {
namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitSkipped = 1;
constexpr int kExitFatal = 2;

template <typename T>
void Override(const std::optional<T>& flag, T& field) {
  if (flag) field = *flag;
}

void PrintWarnings(const Warnings& warnings) {
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
}

int ReportSkips(const std::vector<std::string>& skipped) {
  for (const std::string& s : skipped) std::cerr << "skipped " << s << "\n";
  return skipped.empty() ? kExitOk : kExitSkipped;
}

// ---------------------------------------------------------------- filter

struct FilterArgs {
  std::string input;
  std::string output;
  std::optional<double> mu_sco;
  std::optional<double> mu_occ;
  std::optional<int> budget;
  bool no_recall_enhancement = false;
};

int RunFilter(PipelineConfig cfg, const FilterArgs& args) {
  Override(args.mu_sco, cfg.filter.mu_sco);
  Override(args.mu_occ, cfg.filter.mu_occ);
  Override(args.budget, cfg.filter.budget);
  if (args.no_recall_enhancement) cfg.filter_enabled = false;
  cfg.dfr_enabled = false;
  cfg.Validate();

  Warnings warnings;
  const DetectionsByImage dets =
      LoadDetections(args.input, cfg.labels, &warnings);
  PrintWarnings(warnings);
  DetectionsByImage out;
  for (const auto& [id, list] : dets) {
    if (cfg.filter_enabled) {
      out[id] = ProcessImage(list, nullptr, cfg, nullptr);
    } else {
      // Standard filtering only, then the same per-selector budget.
      const std::vector<Detection> kept = StandardFilter(list, cfg.filter);
      std::vector<Detection> known =
          BudgetTopK(kept, cfg.filter.budget, Selector::kKnown);
      std::vector<Detection> unknown =
          BudgetTopK(kept, cfg.filter.budget, Selector::kUnknown);
      known.insert(known.end(), unknown.begin(), unknown.end());
      out[id] = std::move(known);
    }
  }
  SaveDetections(args.output, out, cfg.labels);
  return kExitOk;
}

// ---------------------------------------------------------------- dfr

struct DfrArgs {
  std::string input;
  std::string output;
  std::optional<std::string> depth;
  std::optional<double> depth_scale;
  std::optional<double> mu;
  std::optional<int> close_kernel;
  std::optional<int> sobel_kernel;
  std::optional<double> change_threshold;
};

int RunDfr(PipelineConfig cfg, const DfrArgs& args) {
  Override(args.depth, cfg.depth_pattern);
  Override(args.depth_scale, cfg.depth_scale);
  Override(args.mu, cfg.dfr.mu);
  Override(args.close_kernel, cfg.dfr.close_kernel);
  Override(args.sobel_kernel, cfg.dfr.sobel_kernel);
  Override(args.change_threshold, cfg.dfr.change_threshold);
  cfg.Validate();
  if (cfg.depth_pattern.empty()) {
    throw ConfigError(
        "dfr needs a depth path pattern (--depth or paths.depth)");
  }

  Warnings warnings;
  const DetectionsByImage dets =
      LoadDetections(args.input, cfg.labels, &warnings);
  PrintWarnings(warnings);
  DetectionsByImage out;
  std::vector<std::string> skipped;
  for (const auto& [id, list] : dets) {
    try {
      const DepthMap depth =
          LoadDepth(ExpandImagePattern(cfg.depth_pattern, id), cfg.depth_scale);
      std::vector<std::string> diagnostics;
      out[id] = DfrFilter(list, depth, cfg.dfr, &diagnostics);
      for (const std::string& d : diagnostics) {
        std::cerr << "warning: " << id << ": " << d << "\n";
      }
    } catch (const ImageIoError& e) {
      skipped.push_back(id + ": " + e.what());
    }
  }
  SaveDetections(args.output, out, cfg.labels);
  return ReportSkips(skipped);
}

// ---------------------------------------------------------------- mask2box

struct Mask2BoxArgs {
  std::string scores;
  std::string output;
  std::string image_id;
  double scale = 1.0;
  std::optional<std::vector<double>> thresholds;
  std::optional<int> quantiles;
};

int RunMask2Box(PipelineConfig cfg, const Mask2BoxArgs& args) {
  Override(args.thresholds, cfg.thresholds);
  Override(args.quantiles, cfg.threshold_quantiles);
  cfg.Validate();
  const ScoreMap scores = LoadScoreMap(args.scores, args.scale);
  const std::vector<double> grid =
      cfg.thresholds.empty()
          ? QuantileThresholds(scores, cfg.threshold_quantiles)
          : cfg.thresholds;
  const std::string id = args.image_id.empty()
                             ? fs::path(args.scores).stem().string()
                             : args.image_id;
  DetectionsByImage out;
  out[id] = MultiThresholdBoxes(scores, grid);
  SaveDetections(args.output, out, cfg.labels);
  return kExitOk;
}

// ---------------------------------------------------------------- eval

struct EvalArgs {
  std::optional<std::string> detections;
  std::optional<std::string> ground_truth;
  std::optional<std::string> depth;
  std::optional<std::string> roi;
  std::optional<std::string> report;
  std::optional<double> depth_scale;
  std::optional<bool> dfr;
  std::optional<bool> filter;
  std::optional<double> mu;
  std::optional<int> k;
  std::optional<double> iou_thr;
  std::optional<int> workers;
};

int RunEval(PipelineConfig cfg, const EvalArgs& args) {
  Override(args.detections, cfg.detections_path);
  Override(args.ground_truth, cfg.ground_truth_path);
  Override(args.depth, cfg.depth_pattern);
  Override(args.roi, cfg.roi_pattern);
  Override(args.report, cfg.report_path);
  Override(args.depth_scale, cfg.depth_scale);
  Override(args.dfr, cfg.dfr_enabled);
  Override(args.filter, cfg.filter_enabled);
  Override(args.mu, cfg.dfr.mu);
  Override(args.k, cfg.metrics.k);
  Override(args.iou_thr, cfg.metrics.iou_thr);
  Override(args.workers, cfg.workers);
  cfg.Validate();
  if (cfg.detections_path.empty() || cfg.ground_truth_path.empty()) {
    throw ConfigError("eval needs detection and ground-truth paths");
  }
  if (cfg.dfr_enabled && cfg.depth_pattern.empty()) {
    throw ConfigError("DFR is enabled but no depth path pattern is set");
  }

  const PipelineResult result = RunPipeline(cfg);
  std::cout << FormatReportTable(result.report, cfg.labels);
  if (!cfg.report_path.empty()) {
    SaveReport(cfg.report_path, result.report, cfg.labels);
  }
  return ReportSkips(result.skipped);
}

// ---------------------------------------------------------------- augment

struct AugmentArgs {
  std::vector<std::string> driving;
  std::vector<std::string> auxiliary;
  std::string annotations;
  std::optional<std::string> mixup;
  std::optional<double> lambda;
  std::string out_image;
  std::string out_annotations;
  int canvas_width = 640;
  int canvas_height = 640;
  std::uint64_t seed = 0;
};

// Annotations are keyed by the image file stem.
LabeledImage LoadLabeled(const std::string& path,
                         const AnnotationsByImage& anns,
                         const LabelSpaceMap& map) {
  LabeledImage image;
  image.pixels = LoadRgb(path);
  image.source = fs::path(path).stem().string();
  if (auto it = anns.find(image.source); it != anns.end()) {
    image.annotations = it->second;
  }
  return RemapLabels(image, map);
}

LabelSpaceMap VocabularyMap(const LabelSpace& space,
                            const AnnotationsByImage& anns,
                            const std::vector<std::string>& paths,
                            bool all_ood) {
  std::vector<std::string> vocab;
  for (const std::string& p : paths) {
    auto it = anns.find(fs::path(p).stem().string());
    if (it == anns.end()) continue;
    for (const Annotation& a : it->second) vocab.push_back(a.source_label);
  }
  if (!all_ood) return LabelSpaceMap::FromVocabulary(space, vocab);
  LabelSpaceMap map(space);
  for (const std::string& v : vocab) {
    map.Add(v, std::string(LabelSpace::kOodName));
  }
  return map;
}

int RunAugment(PipelineConfig cfg, const AugmentArgs& args) {
  const AnnotationsByImage anns = args.annotations.empty()
                                      ? AnnotationsByImage{}
                                      : LoadAnnotations(args.annotations);
  // Driving labels keep their class when it is in the label space; every
  // auxiliary object becomes OOD.
  const LabelSpaceMap driving_map =
      VocabularyMap(cfg.labels, anns, args.driving, false);
  const LabelSpaceMap aux_map =
      VocabularyMap(cfg.labels, anns, args.auxiliary, true);
  const std::array<LabeledImage, 2> driving = {
      LoadLabeled(args.driving[0], anns, driving_map),
      LoadLabeled(args.driving[1], anns, driving_map)};
  const std::array<LabeledImage, 2> aux = {
      LoadLabeled(args.auxiliary[0], anns, aux_map),
      LoadLabeled(args.auxiliary[1], anns, aux_map)};

  LabeledImage composite =
      MosaicPlus(driving, aux,
                 CanvasSize{args.canvas_width, args.canvas_height}, args.seed);
  if (args.mixup) {
    const LabeledImage other = LoadLabeled(*args.mixup, anns, driving_map);
    const double lambda =
        args.lambda ? *args.lambda : SampleMixupLambda(args.seed + 1);
    composite = MixupBlend(composite, other, lambda);
  }
  SaveRgbPng(args.out_image, composite.pixels);
  if (!args.out_annotations.empty()) {
    AnnotationsByImage out;
    out[fs::path(args.out_image).stem().string()] = composite.annotations;
    SaveAnnotations(args.out_annotations, out, cfg.labels);
  }
  return kExitOk;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string out_dir;
  int num_scenes = 10;
  std::uint64_t seed = 0;
  int width = 320;
  int height = 240;
};

int RunSynth(PipelineConfig cfg, const SynthArgs& args) {
  if (args.num_scenes < 1) throw ConfigError("--scenes must be >= 1");
  SceneParams params;
  params.width = args.width;
  params.height = args.height;
  params.horizon = args.height / 3;
  params.num_known_classes = cfg.labels.num_known();
  try {
    params.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const fs::path root(args.out_dir);
  fs::create_directories(root / "depth");
  fs::create_directories(root / "roi");
  DetectionsByImage dets;
  GroundTruthByImage gts;
  for (int i = 0; i < args.num_scenes; ++i) {
    const std::uint64_t seed = args.seed + static_cast<std::uint64_t>(i);
    char id_buf[32];
    std::snprintf(id_buf, sizeof(id_buf), "scene_%04d", i);
    const std::string id = id_buf;
    const SyntheticScene scene = GenerateScene(params, seed);
    SaveDepthPgm((root / "depth" / (id + ".pgm")).string(), scene.depth, 0.01);
    SaveMaskPgm((root / "roi" / (id + ".pgm")).string(), scene.roi);
    gts[id] = scene.ground_truth;
    dets[id] = PlantDetections(scene, params, seed ^ 0x9e3779b97f4a7c15ULL);
  }
  SaveDetections((root / "detections.jsonl").string(), dets, cfg.labels);
  SaveGroundTruth((root / "gt.jsonl").string(), gts, cfg.labels);

  PipelineConfig out = cfg;
  out.detections_path = "detections.jsonl";
  out.ground_truth_path = "gt.jsonl";
  out.depth_pattern = "depth/{image_id}.pgm";
  out.roi_pattern = "roi/{image_id}.pgm";
  out.report_path = "report.json";
  out.depth_scale = 0.01;
  std::ofstream config(root / "config.json");
  config << PipelineConfigToJson(out);
  if (!config)
    throw ImageIoError("cannot write " + (root / "config.json").string());
  std::cout << "wrote " << args.num_scenes << " scenes to " << root.string()
            << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::string stage = "all";
  int width = 2048;
  int height = 1024;
  int boxes = 100;
  int repetitions = 100;
  int warmup = 3;
  std::uint64_t seed = 0;
};

void PrintStats(const std::string& stage, const LatencyStats& s) {
  std::printf(
      "%-10s mean %8.3f ms  stddev %7.3f  min %8.3f  max %8.3f  (n=%d)\n",
      stage.c_str(), s.mean_ms, s.stddev_ms, s.min_ms, s.max_ms, s.repetitions);
}

int RunBench(PipelineConfig cfg, const BenchArgs& args) {
  cfg.Validate();
  if (args.width < 8 || args.height < 8 || args.boxes < 1) {
    throw ConfigError("bench needs width, height >= 8 and boxes >= 1");
  }
  std::mt19937_64 rng(args.seed);
  std::uniform_real_distribution<float> noise(0.0f, 0.05f);
  std::vector<float> values(static_cast<std::size_t>(args.width) * args.height);
  for (int y = 0; y < args.height; ++y) {
    for (int x = 0; x < args.width; ++x) {
      values[static_cast<std::size_t>(y) * args.width + x] =
          5.0f + 0.1f * y + noise(rng);
    }
  }
  const DepthMap depth(args.width, args.height, std::move(values));

  std::uniform_real_distribution<double> ux(0.0, args.width - 4.0);
  std::uniform_real_distribution<double> uy(0.0, args.height - 4.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  std::vector<Detection> dets;
  for (int i = 0; i < args.boxes; ++i) {
    Detection d;
    const double x = ux(rng), y = uy(rng);
    d.box = {x, y, std::min<double>(args.width, x + 4 + 200 * u01(rng)),
             std::min<double>(args.height, y + 4 + 200 * u01(rng))};
    d.sco = u01(rng);
    d.occ = u01(rng);
    d.label = u01(rng) < 0.5 ? kOodLabel : static_cast<int>(u01(rng) * 8);
    dets.push_back(d);
  }

  const bool all = args.stage == "all";
  if (all || args.stage == "dfr") {
    PrintStats("dfr", BenchRuntime(
                          [&] {
                            const DepthChangeMap change =
                                ComputeDepthChange(depth, cfg.dfr);
                            for (const Detection& d : dets) {
                              (void)FlatnessProportion(change, d.box, cfg.dfr);
                            }
                          },
                          args.repetitions, args.warmup));
  }
  if (all || args.stage == "filter") {
    PrintStats(
        "filter",
        BenchRuntime([&] { (void)ProcessImage(dets, nullptr, cfg, nullptr); },
                     args.repetitions, args.warmup));
  }
  if (all || args.stage == "mask2box") {
    std::vector<float> s(depth.values().begin(), depth.values().end());
    const ScoreMap scores(args.width, args.height, std::move(s));
    const std::vector<double> grid = QuantileThresholds(scores, 16);
    PrintStats("mask2box",
               BenchRuntime([&] { (void)MultiThresholdBoxes(scores, grid); },
                            args.repetitions, args.warmup));
  }
  return kExitOk;
}

int Main(int argc, char** argv) {
  CLI::App app{"Occupancy-based OOD detection filtering and evaluation"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  app.add_option("--config", config_path, "JSON pipeline configuration")
      ->check(CLI::ExistingFile);

  FilterArgs filter_args;
  CLI::App* filter = app.add_subcommand(
      "filter", "Standard filtering, OOD recall enhancement and budget");
  filter->add_option("-i,--input", filter_args.input, "Detections file")
      ->required();
  filter->add_option("-o,--output", filter_args.output, "Kept detections file")
      ->required();
  filter->add_option("--mu-sco", filter_args.mu_sco, "Confidence threshold");
  filter->add_option("--mu-occ", filter_args.mu_occ,
                     "Occupancy threshold for rescued unknowns");
  filter->add_option("--budget", filter_args.budget,
                     "Detections kept per image and selector");
  filter->add_flag("--no-recall-enhancement", filter_args.no_recall_enhancement,
                   "Keep only sco >= mu-sco");

  DfrArgs dfr_args;
  CLI::App* dfr =
      app.add_subcommand("dfr", "Depth-based false-positive reduction");
  dfr->add_option("-i,--input", dfr_args.input, "Detections file")->required();
  dfr->add_option("-o,--output", dfr_args.output, "Kept detections file")
      ->required();
  dfr->add_option("--depth", dfr_args.depth,
                  "Depth path pattern with {image_id}");
  dfr->add_option("--depth-scale", dfr_args.depth_scale,
                  "Depth per stored unit");
  dfr->add_option("--mu", dfr_args.mu, "Minimum flatness proportion");
  dfr->add_option("--close-kernel", dfr_args.close_kernel,
                  "Closing window size");
  dfr->add_option("--sobel-kernel", dfr_args.sobel_kernel, "Odd Sobel size");
  dfr->add_option("--change-threshold", dfr_args.change_threshold,
                  "Flat when |change| is below this");

  Mask2BoxArgs m2b_args;
  CLI::App* m2b =
      app.add_subcommand("mask2box", "Anomaly score map to OOD detections");
  m2b->add_option("-i,--scores", m2b_args.scores, "Score map (PFM, PGM or PNG)")
      ->required()
      ->check(CLI::ExistingFile);
  m2b->add_option("-o,--output", m2b_args.output, "Detections file")
      ->required();
  m2b->add_option("--image-id", m2b_args.image_id, "Defaults to the file stem");
  m2b->add_option("--scale", m2b_args.scale, "Multiplier for stored samples");
  m2b->add_option("--thresholds", m2b_args.thresholds,
                  "Comma-separated thresholds")
      ->delimiter(',');
  m2b->add_option("--quantiles", m2b_args.quantiles,
                  "Quantile grid size when no thresholds are given");

  EvalArgs eval_args;
  CLI::App* eval = app.add_subcommand("eval", "Run the pipeline and evaluate");
  eval->add_option("--detections", eval_args.detections, "Detections file");
  eval->add_option("--ground-truth", eval_args.ground_truth,
                   "Ground-truth file");
  eval->add_option("--depth", eval_args.depth,
                   "Depth path pattern with {image_id}");
  eval->add_option("--roi", eval_args.roi,
                   "RoI mask path pattern with {image_id}");
  eval->add_option("--report", eval_args.report, "Report output path");
  eval->add_option("--depth-scale", eval_args.depth_scale,
                   "Depth per stored unit");
  eval->add_flag("--dfr,!--no-dfr", eval_args.dfr, "Toggle depth filtering");
  eval->add_flag("--filter,!--no-filter", eval_args.filter,
                 "Toggle recall enhancement");
  eval->add_option("--mu", eval_args.mu, "Minimum flatness proportion");
  eval->add_option("-k", eval_args.k, "Metric budget per image");
  eval->add_option("--iou-thr", eval_args.iou_thr, "Matching IoU threshold");
  eval->add_option("--workers", eval_args.workers,
                   "Worker threads, 0 for all cores");

  AugmentArgs aug_args;
  CLI::App* aug =
      app.add_subcommand("augment", "Mosaic+ and Mixup composition");
  aug->add_option("--driving", aug_args.driving)
      ->required()
      ->expected(2)
      ->check(CLI::ExistingFile);
  aug->add_option("--auxiliary", aug_args.auxiliary)
      ->required()
      ->expected(2)
      ->check(CLI::ExistingFile);
  aug->add_option("--annotations", aug_args.annotations,
                  "Annotations keyed by image file stem");
  aug->add_option("--mixup", aug_args.mixup, "Blend the mosaic with this image")
      ->check(CLI::ExistingFile);
  aug->add_option("--lambda", aug_args.lambda, "Mixup weight of the mosaic")
      ->check(CLI::Range(0.0, 1.0));
  aug->add_option("--canvas-width", aug_args.canvas_width);
  aug->add_option("--canvas-height", aug_args.canvas_height);
  aug->add_option("--seed", aug_args.seed, "Random seed");
  aug->add_option("--out-image", aug_args.out_image, "Output PNG")->required();
  aug->add_option("--out-annotations", aug_args.out_annotations,
                  "Output annotations file");

  SynthArgs synth_args;
  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic dataset");
  synth->add_option("-o,--out", synth_args.out_dir, "Output directory")
      ->required();
  synth->add_option("--scenes", synth_args.num_scenes, "Number of scenes");
  synth->add_option("--seed", synth_args.seed, "Random seed");
  synth->add_option("--width", synth_args.width);
  synth->add_option("--height", synth_args.height);

  BenchArgs bench_args;
  CLI::App* bench = app.add_subcommand("bench", "Stage latency measurement");
  bench->add_option("--stage", bench_args.stage)
      ->check(CLI::IsMember({"all", "dfr", "filter", "mask2box"}));
  bench->add_option("--width", bench_args.width);
  bench->add_option("--height", bench_args.height);
  bench->add_option("--boxes", bench_args.boxes, "Boxes per frame");
  bench->add_option("--repetitions", bench_args.repetitions, "Timed runs");
  bench->add_option("--warmup", bench_args.warmup, "Untimed runs first");
  bench->add_option("--seed", bench_args.seed);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitFatal;
  }

  try {
    const PipelineConfig cfg = config_path.empty()
                                   ? PipelineConfig{}
                                   : LoadPipelineConfig(config_path);
    if (filter->parsed()) return RunFilter(cfg, filter_args);
    if (dfr->parsed()) return RunDfr(cfg, dfr_args);
    if (m2b->parsed()) return RunMask2Box(cfg, m2b_args);
    if (eval->parsed()) return RunEval(cfg, eval_args);
    if (aug->parsed()) return RunAugment(cfg, aug_args);
    if (synth->parsed()) return RunSynth(cfg, synth_args);
    if (bench->parsed()) return RunBench(cfg, bench_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}

}  // namespace
}  // namespace occfilter

int main(int argc, char** argv) { return occfilter::Main(argc, argv); }
