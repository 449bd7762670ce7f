// Copyright (c) the LogoForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "logoforge/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "logoforge/coco_io.hpp"
#include "logoforge/dataset_ops.hpp"
#include "logoforge/eval.hpp"
#include "logoforge/image_io.hpp"
#include "logoforge/pipeline.hpp"
#include "logoforge/postprocess.hpp"
#include "logoforge/visualize.hpp"

namespace logoforge {

namespace fs = std::filesystem;

namespace {

enum class LogLevel { quiet = 0, info = 1, debug = 2 };

LogLevel log_level() {
  const char* env = std::getenv("LOGOFORGE_LOG");
  if (!env) return LogLevel::info;
  const std::string v = env;
  if (v == "quiet") return LogLevel::quiet;
  if (v == "debug") return LogLevel::debug;
  return LogLevel::info;
}

void info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cout << msg << "\n";
}

int fail_usage(const std::string& msg) {
  std::cerr << "error: " << msg << "\n";
  return 2;
}

int cmd_augment(const std::string& config_path, const std::string& ann_path,
                const std::string& images_dir, const std::string& out_dir,
                std::optional<std::int64_t> seed, int workers) {
  Pipeline pipeline = build_pipeline([&] {
    PipelineConfig cfg = parse_pipeline_config(read_text_file(config_path));
    if (seed) cfg.global_seed = static_cast<std::uint64_t>(*seed);
    return cfg;
  }());
  const Dataset ds = load_coco_file(ann_path);

  const RunResult result = run_dataset(pipeline, ds, images_dir, out_dir, workers);
  save_coco_file(result.dataset, (fs::path(out_dir) / "annotations.json").string());

  const auto& stages = pipeline.config().stages;
  std::cout << "passes: " << result.stats.total_passes << "\n";
  for (std::size_t i = 0; i < stages.size(); ++i) {
    const long fires = result.stats.stage_fires[i];
    const double rate = result.stats.total_passes
                            ? 100.0 * fires / result.stats.total_passes
                            : 0.0;
    char line[160];
    std::snprintf(line, sizeof(line), "stage %zu %-20s fired %ld/%ld (%.1f%%)", i,
                  stage_kind_name(stages[i].kind), fires, result.stats.total_passes, rate);
    std::cout << line << "\n";
  }

  if (!result.stats.failures.empty()) {
    std::cerr << result.stats.failures.size() << " pass(es) failed:\n";
    for (const RunFailure& f : result.stats.failures)
      std::cerr << "  image " << f.image_id << ": " << f.message << "\n";
    return 1;
  }
  info("wrote " + std::to_string(result.dataset.images.size()) + " images to " + out_dir);
  return 0;
}

std::map<std::int64_t, std::vector<Detection>> group_by_image(
    const std::vector<Detection>& dets) {
  std::map<std::int64_t, std::vector<Detection>> out;
  for (const Detection& d : dets) out[d.image_id].push_back(d);
  return out;
}

int cmd_postprocess(const std::string& dets_path, const std::string& variants_path,
                    const std::string& mode, double factor, double iou_thresh,
                    const std::string& out_path) {
  if (factor < 0.0 || factor > 1.0)
    return fail_usage("--factor " + std::to_string(factor) + " outside [0,1]");
  if (iou_thresh < 0.0 || iou_thresh > 1.0)
    return fail_usage("--iou " + std::to_string(iou_thresh) + " outside [0,1]");

  std::vector<Detection> fused;
  if (mode == "tta-fuse") {
    if (variants_path.empty()) return fail_usage("mode tta-fuse needs --variants");
    const TtaSidecar sidecar = load_tta_sidecar(variants_path);
    for (const ImageInfo& im : sidecar.images) {
      std::vector<std::pair<TtaVariant, std::vector<Detection>>> per_variant;
      for (const auto& [variant, dets] : sidecar.variants) {
        std::vector<Detection> mine;
        for (const Detection& d : dets)
          if (d.image_id == im.id) mine.push_back(d);
        per_variant.emplace_back(variant, std::move(mine));
      }
      const std::vector<Detection> one =
          tta_fuse(per_variant, im.width, im.height, iou_thresh);
      fused.insert(fused.end(), one.begin(), one.end());
    }
  } else if (mode == "nms" || mode == "major-suppress") {
    if (dets_path.empty()) return fail_usage("mode " + mode + " needs --dets");
    const std::vector<Detection> dets = load_detections_file(dets_path);
    for (auto& [image_id, image_dets] : group_by_image(dets)) {
      const std::vector<Detection> one =
          mode == "nms" ? nms(image_dets, iou_thresh)
                        : major_class_suppress(image_dets, SuppressionParams{factor});
      fused.insert(fused.end(), one.begin(), one.end());
    }
  } else {
    return fail_usage("unknown mode \"" + mode + "\"");
  }

  save_detections_file(fused, out_path);
  info("wrote " + std::to_string(fused.size()) + " detections to " + out_path);
  return 0;
}

int cmd_eval(const std::string& gt_path, const std::string& dets_path,
             const std::string& thresholds_csv, const std::string& out_path) {
  std::vector<double> thresholds = default_iou_thresholds();
  if (!thresholds_csv.empty()) {
    thresholds.clear();
    std::istringstream ss(thresholds_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        thresholds.push_back(std::stod(item));
      } catch (const std::exception&) {
        return fail_usage("bad threshold \"" + item + "\" in --thresholds");
      }
    }
    if (thresholds.empty()) return fail_usage("--thresholds parsed to an empty list");
  }

  const Dataset gt = load_coco_file(gt_path);
  const std::vector<Detection> dets = load_detections_file(dets_path);
  const EvalReport report = evaluate(dets, gt, thresholds);
  std::cout << report.to_table();
  if (!out_path.empty()) {
    write_text_file(out_path, report.to_json());
    info("wrote report to " + out_path);
  }
  return 0;
}

int cmd_split(const std::string& ann_path, int per_class, std::int64_t seed,
              const std::string& out_train, const std::string& out_val) {
  const Dataset ds = load_coco_file(ann_path);
  const SplitResult split = split_dataset(ds, per_class, static_cast<std::uint64_t>(seed));
  save_coco_file(split.train, out_train);
  save_coco_file(split.val, out_val);
  info("train: " + std::to_string(split.train.images.size()) + " images, val: " +
       std::to_string(split.val.images.size()) + " images");
  return 0;
}

int cmd_merge(const std::string& a_path, const std::string& b_path,
              const std::string& out_path) {
  const Dataset merged = merge_datasets(load_coco_file(a_path), load_coco_file(b_path));
  save_coco_file(merged, out_path);
  info("merged: " + std::to_string(merged.images.size()) + " images, " +
       std::to_string(merged.categories.size()) + " categories");
  return 0;
}

int cmd_visualize(const std::string& ann_path, const std::string& images_dir,
                  const std::string& out_dir, const std::string& dets_path) {
  const Dataset ds = load_coco_file(ann_path);
  std::map<std::int64_t, std::vector<Detection>> dets_by_image;
  const bool use_dets = !dets_path.empty();
  if (use_dets) dets_by_image = group_by_image(load_detections_file(dets_path));

  fs::create_directories(out_dir);
  int failures = 0;
  for (const ImageInfo& im : ds.images) {
    try {
      const ImageBuffer img = load_image((fs::path(images_dir) / im.file_name).string());
      ImageBuffer rendered;
      if (use_dets) {
        rendered = render_detections(img, dets_by_image[im.id], ds.categories);
      } else {
        std::vector<Annotation> anns;
        for (const Annotation& a : ds.annotations)
          if (a.image_id == im.id) anns.push_back(a);
        rendered = render_annotations(img, anns, ds.categories);
      }
      const std::string name = fs::path(im.file_name).stem().string() + ".png";
      save_image(rendered, (fs::path(out_dir) / name).string());
      if (log_level() >= LogLevel::debug) info("rendered " + name);
    } catch (const std::exception& e) {
      std::cerr << "image " << im.id << ": " << e.what() << "\n";
      ++failures;
    }
  }
  if (failures) {
    std::cerr << failures << " image(s) failed\n";
    return 1;
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"logoforge: deterministic detection-dataset tooling "
               "(augmentation, post-processing, evaluation)"};
  app.require_subcommand(1);

  // augment
  auto* aug = app.add_subcommand("augment", "run an augmentation pipeline over a dataset");
  std::string aug_config, aug_ann, aug_images, aug_out;
  std::int64_t aug_seed = 0;
  bool aug_seed_set = false;
  int aug_workers = 1;
  aug->add_option("--config", aug_config, "pipeline config JSON")->required();
  aug->add_option("--ann", aug_ann, "COCO annotations JSON")->required();
  aug->add_option("--images", aug_images, "directory with the source images")->required();
  aug->add_option("--out", aug_out, "output directory")->required();
  aug->add_option("--seed", aug_seed, "override the config's global_seed")
      ->each([&aug_seed_set](const std::string&) { aug_seed_set = true; });
  aug->add_option("--workers", aug_workers, "worker threads")->default_val(1);

  // postprocess
  auto* post = app.add_subcommand("postprocess", "NMS, TTA fusion, major-class suppression");
  std::string post_dets, post_variants, post_mode, post_out;
  double post_factor = 0.3, post_iou = 0.5;
  post->add_option("--dets", post_dets, "detection JSON (nms / major-suppress modes)");
  post->add_option("--variants", post_variants, "TTA sidecar JSON (tta-fuse mode)");
  post->add_option("--mode", post_mode, "one of: nms, major-suppress, tta-fuse")->required();
  post->add_option("--factor", post_factor, "suppression factor")->default_val(0.3);
  post->add_option("--iou", post_iou, "NMS IoU threshold")->default_val(0.5);
  post->add_option("--out", post_out, "output detection JSON")->required();

  // eval
  auto* ev = app.add_subcommand("eval", "COCO-style mAP evaluation");
  std::string ev_gt, ev_dets, ev_thresholds, ev_out = "eval_report.json";
  ev->add_option("--gt", ev_gt, "ground-truth COCO JSON")->required();
  ev->add_option("--dets", ev_dets, "detection JSON")->required();
  ev->add_option("--thresholds", ev_thresholds, "comma-separated IoU thresholds");
  ev->add_option("--out", ev_out, "report JSON path")->default_val("eval_report.json");

  // split
  auto* sp = app.add_subcommand("split", "per-class holdout split");
  std::string sp_ann, sp_train, sp_val;
  int sp_per_class = 5;
  std::int64_t sp_seed = 0;
  sp->add_option("--ann", sp_ann, "COCO annotations JSON")->required();
  sp->add_option("--per-class", sp_per_class, "images held out per category")->default_val(5);
  sp->add_option("--seed", sp_seed, "split seed")->default_val(0);
  sp->add_option("--out-train", sp_train, "train output JSON")->required();
  sp->add_option("--out-val", sp_val, "val output JSON")->required();

  // merge
  auto* mg = app.add_subcommand("merge", "merge two datasets, unifying categories by name");
  std::string mg_a, mg_b, mg_out;
  mg->add_option("-a,--first", mg_a, "first COCO JSON")->required();
  mg->add_option("-b,--second", mg_b, "second COCO JSON")->required();
  mg->add_option("--out", mg_out, "merged output JSON")->required();

  // visualize
  auto* vz = app.add_subcommand("visualize", "render box overlays to PNG");
  std::string vz_ann, vz_images, vz_out, vz_dets;
  vz->add_option("--ann", vz_ann, "COCO annotations JSON")->required();
  vz->add_option("--images", vz_images, "directory with the source images")->required();
  vz->add_option("--out", vz_out, "output directory")->required();
  vz->add_option("--dets", vz_dets, "optional detection JSON to draw instead of GT");

  std::vector<const char*> argv;
  argv.push_back("logoforge");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (aug->parsed())
      return cmd_augment(aug_config, aug_ann, aug_images, aug_out,
                         aug_seed_set ? std::optional<std::int64_t>(aug_seed) : std::nullopt,
                         aug_workers);
    if (post->parsed())
      return cmd_postprocess(post_dets, post_variants, post_mode, post_factor, post_iou,
                             post_out);
    if (ev->parsed()) return cmd_eval(ev_gt, ev_dets, ev_thresholds, ev_out);
    if (sp->parsed()) return cmd_split(sp_ann, sp_per_class, sp_seed, sp_train, sp_val);
    if (mg->parsed()) return cmd_merge(mg_a, mg_b, mg_out);
    if (vz->parsed()) return cmd_visualize(vz_ann, vz_images, vz_out, vz_dets);
  } catch (const ParseError& e) {
    return fail_usage(e.what());
  } catch (const IoError& e) {
    return fail_usage(e.what());
  } catch (const Error& e) {
    return fail_usage(e.what());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace logoforge
