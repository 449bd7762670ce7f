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

#include "logoforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <map>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <json.hpp>

#include "logoforge/image_io.hpp"

namespace logoforge {

using json = nlohmann::json;

const char* stage_kind_name(StageKind kind) {
  switch (kind) {
    case StageKind::scale_jitter: return "scale_jitter";
    case StageKind::rotate90: return "rotate90";
    case StageKind::hflip: return "hflip";
    case StageKind::simple_mixup: return "simple_mixup";
    case StageKind::strong_color_jitter: return "strong_color_jitter";
    case StageKind::rand_augment: return "rand_augment";
    case StageKind::resize_to: return "resize_to";
    case StageKind::pad_to: return "pad_to";
  }
  return "?";
}

namespace {

StageKind stage_kind_from_name(const std::string& name, const std::string& where) {
  for (StageKind k : {StageKind::scale_jitter, StageKind::rotate90, StageKind::hflip,
                      StageKind::simple_mixup, StageKind::strong_color_jitter,
                      StageKind::rand_augment, StageKind::resize_to, StageKind::pad_to})
    if (name == stage_kind_name(k)) return k;
  throw ParseError(where + ": unknown stage kind \"" + name + "\"");
}

void reject_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ParseError(where + ": unknown key \"" + it.key() + "\"");
  }
}

double get_number(const json& obj, const char* key, double fallback,
                  const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) throw ParseError(where + ": \"" + key + "\" must be a number");
  return it->get<double>();
}

int get_int(const json& obj, const char* key, int fallback, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer())
    throw ParseError(where + ": \"" + key + "\" must be an integer");
  return it->get<int>();
}

std::pair<double, double> get_range(const json& obj, const char* key,
                                    std::pair<double, double> fallback,
                                    const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number())
    throw ParseError(where + ": \"" + key + "\" must be a [min, max] number pair");
  return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

StageSpec parse_stage(const json& obj, const std::string& where) {
  if (!obj.is_object()) throw ParseError(where + ": stage must be an object");
  const auto kind_it = obj.find("kind");
  if (kind_it == obj.end() || !kind_it->is_string())
    throw ParseError(where + ": stage needs a string \"kind\"");

  StageSpec stage;
  stage.kind = stage_kind_from_name(kind_it->get<std::string>(), where);
  // rotate90 defaults to a coin flip; every other stage defaults to always-on
  const double default_prob = stage.kind == StageKind::rotate90 ? 0.5 : 1.0;
  stage.probability = get_number(obj, "probability", default_prob, where);

  std::vector<std::string> allowed = {"kind", "probability"};
  switch (stage.kind) {
    case StageKind::scale_jitter: {
      allowed.insert(allowed.end(), {"min_ratio", "max_ratio", "filter"});
      ScaleJitterStage s;
      s.range.min_ratio = get_number(obj, "min_ratio", s.range.min_ratio, where);
      s.range.max_ratio = get_number(obj, "max_ratio", s.range.max_ratio, where);
      if (obj.contains("filter")) {
        const std::string f = obj["filter"].is_string() ? obj["filter"].get<std::string>() : "";
        if (f == "bilinear") s.filter = ResampleFilter::bilinear;
        else if (f == "nearest") s.filter = ResampleFilter::nearest;
        else throw ParseError(where + ": \"filter\" must be \"bilinear\" or \"nearest\"");
      }
      stage.params = s;
      break;
    }
    case StageKind::rotate90:
      stage.params = Rotate90Stage{};
      break;
    case StageKind::hflip:
      stage.params = HflipStage{};
      break;
    case StageKind::simple_mixup: {
      allowed.insert(allowed.end(), {"alpha", "min_ratio", "max_ratio"});
      MixupStage s;
      s.params.alpha = get_number(obj, "alpha", s.params.alpha, where);
      s.params.jitter.min_ratio = get_number(obj, "min_ratio", s.params.jitter.min_ratio, where);
      s.params.jitter.max_ratio = get_number(obj, "max_ratio", s.params.jitter.max_ratio, where);
      stage.params = s;
      break;
    }
    case StageKind::strong_color_jitter: {
      allowed.insert(allowed.end(),
                     {"p_invert", "p_swap", "p_blur", "p_gauss_noise", "p_impulse",
                      "brightness", "contrast", "saturation", "hue", "blur_sigma",
                      "noise_std", "impulse_fraction"});
      ColorJitterStage s;
      ColorJitterParams& p = s.params;
      p.p_invert = get_number(obj, "p_invert", p.p_invert, where);
      p.p_swap = get_number(obj, "p_swap", p.p_swap, where);
      p.p_blur = get_number(obj, "p_blur", p.p_blur, where);
      p.p_gauss_noise = get_number(obj, "p_gauss_noise", p.p_gauss_noise, where);
      p.p_impulse = get_number(obj, "p_impulse", p.p_impulse, where);
      std::tie(p.brightness_min, p.brightness_max) =
          get_range(obj, "brightness", {p.brightness_min, p.brightness_max}, where);
      std::tie(p.contrast_min, p.contrast_max) =
          get_range(obj, "contrast", {p.contrast_min, p.contrast_max}, where);
      std::tie(p.saturation_min, p.saturation_max) =
          get_range(obj, "saturation", {p.saturation_min, p.saturation_max}, where);
      std::tie(p.hue_min_deg, p.hue_max_deg) =
          get_range(obj, "hue", {p.hue_min_deg, p.hue_max_deg}, where);
      std::tie(p.blur_sigma_min, p.blur_sigma_max) =
          get_range(obj, "blur_sigma", {p.blur_sigma_min, p.blur_sigma_max}, where);
      std::tie(p.noise_std_min, p.noise_std_max) =
          get_range(obj, "noise_std", {p.noise_std_min, p.noise_std_max}, where);
      std::tie(p.impulse_fraction_min, p.impulse_fraction_max) = get_range(
          obj, "impulse_fraction", {p.impulse_fraction_min, p.impulse_fraction_max}, where);
      stage.params = s;
      break;
    }
    case StageKind::rand_augment: {
      allowed.insert(allowed.end(), {"n_ops", "magnitude", "op_pool"});
      RandAugmentStage s;
      s.params.n_ops = get_int(obj, "n_ops", s.params.n_ops, where);
      s.params.magnitude = get_int(obj, "magnitude", s.params.magnitude, where);
      if (obj.contains("op_pool")) {
        if (!obj["op_pool"].is_array())
          throw ParseError(where + ": \"op_pool\" must be an array of op names");
        s.params.op_pool.clear();
        for (const json& o : obj["op_pool"]) {
          if (!o.is_string())
            throw ParseError(where + ": \"op_pool\" must be an array of op names");
          s.params.op_pool.push_back(ra_op_from_name(o.get<std::string>()));
        }
      }
      stage.params = s;
      break;
    }
    case StageKind::resize_to: {
      allowed.insert(allowed.end(), {"width", "height"});
      ResizeToStage s;
      s.width = get_int(obj, "width", 0, where);
      s.height = get_int(obj, "height", 0, where);
      stage.params = s;
      break;
    }
    case StageKind::pad_to: {
      allowed.insert(allowed.end(), {"width", "height", "fill"});
      PadToStage s;
      s.width = get_int(obj, "width", 0, where);
      s.height = get_int(obj, "height", 0, where);
      const int fill = get_int(obj, "fill", 0, where);
      if (fill < 0 || fill > 255) throw ParseError(where + ": \"fill\" must be in [0,255]");
      s.fill = static_cast<std::uint8_t>(fill);
      stage.params = s;
      break;
    }
  }
  reject_unknown_keys(obj, allowed, where);
  return stage;
}

}  // namespace

PipelineConfig parse_pipeline_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ParseError("parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!root.is_object()) throw ParseError("config: top level must be an object");
  reject_unknown_keys(root, {"stages", "global_seed", "output_resolution", "passes_per_image"},
                      "config");

  PipelineConfig cfg;
  if (root.contains("global_seed")) {
    if (!root["global_seed"].is_number_integer())
      throw ParseError("config: \"global_seed\" must be an integer");
    cfg.global_seed = root["global_seed"].get<std::uint64_t>();
  }
  cfg.output_resolution = get_int(root, "output_resolution", cfg.output_resolution, "config");
  cfg.passes_per_image = get_int(root, "passes_per_image", cfg.passes_per_image, "config");

  if (root.contains("stages")) {
    if (!root["stages"].is_array()) throw ParseError("config: \"stages\" must be an array");
    std::size_t i = 0;
    for (const json& stage : root["stages"])
      cfg.stages.push_back(parse_stage(stage, "config: stages[" + std::to_string(i++) + "]"));
  }
  return cfg;
}

PipelineConfig full_recipe_config(int resolution, std::uint64_t seed) {
  PipelineConfig cfg;
  cfg.global_seed = seed;
  cfg.output_resolution = resolution;

  StageSpec mixup;
  mixup.kind = StageKind::simple_mixup;
  mixup.probability = 0.5;
  mixup.params = MixupStage{};
  cfg.stages.push_back(mixup);

  StageSpec rot;
  rot.kind = StageKind::rotate90;
  rot.probability = 0.5;
  rot.params = Rotate90Stage{};
  cfg.stages.push_back(rot);

  StageSpec scj;
  scj.kind = StageKind::strong_color_jitter;
  scj.probability = 1.0;
  scj.params = ColorJitterStage{};
  cfg.stages.push_back(scj);

  StageSpec ra;
  ra.kind = StageKind::rand_augment;
  ra.probability = 1.0;
  ra.params = RandAugmentStage{};
  cfg.stages.push_back(ra);

  StageSpec resize;
  resize.kind = StageKind::resize_to;
  resize.probability = 1.0;
  resize.params = ResizeToStage{resolution, resolution};
  cfg.stages.push_back(resize);
  return cfg;
}

Pipeline build_pipeline(const PipelineConfig& cfg) {
  if (cfg.output_resolution < 1)
    throw Error("pipeline: output_resolution must be >= 1");
  if (cfg.passes_per_image < 0)
    throw Error("pipeline: passes_per_image must be >= 0");

  PipelineConfig resolved = cfg;
  for (std::size_t i = 0; i < resolved.stages.size(); ++i) {
    StageSpec& stage = resolved.stages[i];
    const std::string where = "pipeline: stage " + std::to_string(i) + " (" +
                              stage_kind_name(stage.kind) + ")";
    if (stage.probability < 0.0 || stage.probability > 1.0)
      throw Error(where + ": probability " + std::to_string(stage.probability) +
                  " outside [0,1]");

    if (auto* s = std::get_if<ScaleJitterStage>(&stage.params)) {
      if (s->range.min_ratio <= 0 || s->range.min_ratio > s->range.max_ratio)
        throw Error(where + ": need 0 < min_ratio <= max_ratio");
    } else if (auto* m = std::get_if<MixupStage>(&stage.params)) {
      if (m->params.alpha <= 0.0 || m->params.alpha >= 1.0)
        throw Error(where + ": alpha must be in (0,1)");
      if (m->params.jitter.min_ratio <= 0 ||
          m->params.jitter.min_ratio > m->params.jitter.max_ratio)
        throw Error(where + ": need 0 < min_ratio <= max_ratio");
    } else if (auto* c = std::get_if<ColorJitterStage>(&stage.params)) {
      const ColorJitterParams& p = c->params;
      for (double prob : {p.p_invert, p.p_swap, p.p_blur, p.p_gauss_noise, p.p_impulse})
        if (prob < 0.0 || prob > 1.0)
          throw Error(where + ": probabilities must be in [0,1]");
      auto bad_range = [](double lo, double hi) { return lo > hi; };
      if (bad_range(p.brightness_min, p.brightness_max) ||
          bad_range(p.contrast_min, p.contrast_max) ||
          bad_range(p.saturation_min, p.saturation_max) ||
          bad_range(p.hue_min_deg, p.hue_max_deg) ||
          bad_range(p.blur_sigma_min, p.blur_sigma_max) ||
          bad_range(p.noise_std_min, p.noise_std_max) ||
          bad_range(p.impulse_fraction_min, p.impulse_fraction_max))
        throw Error(where + ": range minima must not exceed maxima");
      if (p.brightness_min < 0 || p.contrast_min < 0 || p.saturation_min < 0 ||
          p.blur_sigma_min < 0 || p.noise_std_min < 0 || p.impulse_fraction_min < 0)
        throw Error(where + ": magnitude ranges must be non-negative");
      if (p.impulse_fraction_max > 1)
        throw Error(where + ": impulse_fraction must stay within [0,1]");
    } else if (auto* r = std::get_if<RandAugmentStage>(&stage.params)) {
      RandAugmentParams& p = r->params;
      if (p.n_ops < 0) throw Error(where + ": n_ops must be >= 0");
      if (p.magnitude < 0 || p.magnitude > 30)
        throw Error(where + ": magnitude must be in [0,30]");
      if (p.n_ops > 0 && p.op_pool.empty()) throw Error(where + ": op_pool is empty");
    } else if (auto* rz = std::get_if<ResizeToStage>(&stage.params)) {
      if (rz->width == 0) rz->width = resolved.output_resolution;
      if (rz->height == 0) rz->height = resolved.output_resolution;
      if (rz->width < 1 || rz->height < 1) throw Error(where + ": dims must be >= 1");
    } else if (auto* pd = std::get_if<PadToStage>(&stage.params)) {
      if (pd->width < 1 || pd->height < 1) throw Error(where + ": dims must be >= 1");
    }
  }
  return Pipeline(std::move(resolved));
}

namespace {

Sample apply_stage(const StageSpec& stage, Sample s, RandomStream& rs,
                   const PartnerProvider& partner) {
  switch (stage.kind) {
    case StageKind::scale_jitter: {
      const auto& p = std::get<ScaleJitterStage>(stage.params);
      const double ratio = rs.uniform(p.range.min_ratio, p.range.max_ratio);
      return scale_jitter(s, ratio, p.filter);
    }
    case StageKind::rotate90:
      return rotate90(s, RotationChoice{static_cast<int>(rs.uniform_int(1, 3))});
    case StageKind::hflip:
      return hflip(s);
    case StageKind::simple_mixup: {
      const auto& p = std::get<MixupStage>(stage.params);
      if (!partner) return s;
      std::optional<Sample> other = partner(rs);
      if (!other) return s;
      const double ra = rs.uniform(p.params.jitter.min_ratio, p.params.jitter.max_ratio);
      const double rb = rs.uniform(p.params.jitter.min_ratio, p.params.jitter.max_ratio);
      return simple_mixup(s, *other, p.params, {ra, rb});
    }
    case StageKind::strong_color_jitter: {
      const auto& p = std::get<ColorJitterStage>(stage.params);
      s.image = strong_color_jitter(s.image, p.params, rs);
      return s;
    }
    case StageKind::rand_augment: {
      const auto& p = std::get<RandAugmentStage>(stage.params);
      s.image = rand_augment(s.image, p.params, rs);
      return s;
    }
    case StageKind::resize_to: {
      const auto& p = std::get<ResizeToStage>(stage.params);
      return resize_to(s, p.width, p.height);
    }
    case StageKind::pad_to: {
      const auto& p = std::get<PadToStage>(stage.params);
      return pad_to(s, p.width, p.height, p.fill);
    }
  }
  return s;
}

}  // namespace

Sample apply_pipeline(const Pipeline& p, const Sample& s, const PartnerProvider& partner,
                      const SeedContext& ctx, std::vector<long>* fire_counts) {
  const PipelineConfig& cfg = p.config();
  if (fire_counts && fire_counts->size() != cfg.stages.size())
    fire_counts->assign(cfg.stages.size(), 0);

  Sample cur = s;
  for (std::size_t i = 0; i < cfg.stages.size(); ++i) {
    const StageSpec& stage = cfg.stages[i];
    RandomStream rs(derive_seed({cfg.global_seed, static_cast<std::uint64_t>(ctx.image_id),
                                 static_cast<std::uint64_t>(ctx.pass_index),
                                 static_cast<std::uint64_t>(i)}));
    if (!rs.bernoulli(stage.probability)) continue;
    if (fire_counts) ++(*fire_counts)[i];
    cur = apply_stage(stage, std::move(cur), rs, partner);
  }
  return clip_and_filter(cur);
}

RunResult run_dataset(const Pipeline& p, const Dataset& ds, const std::string& image_root,
                      const std::string& out_root, int workers) {
  namespace fs = std::filesystem;
  fs::create_directories(out_root);

  // deterministic task order: images ascending by id, then pass index
  std::vector<const ImageInfo*> images;
  images.reserve(ds.images.size());
  for (const ImageInfo& im : ds.images) images.push_back(&im);
  std::sort(images.begin(), images.end(),
            [](const ImageInfo* a, const ImageInfo* b) { return a->id < b->id; });

  std::unordered_map<std::int64_t, std::vector<Annotation>> anns_by_image;
  for (const Annotation& a : ds.annotations) anns_by_image[a.image_id].push_back(a);

  struct Task {
    std::size_t image_idx;
    int pass;
  };
  std::vector<Task> tasks;
  const int passes = p.config().passes_per_image;
  for (std::size_t i = 0; i < images.size(); ++i)
    for (int pass = 0; pass < passes; ++pass) tasks.push_back({i, pass});

  struct TaskOutput {
    bool ok = false;
    std::string error;
    std::int64_t source_image_id = 0;
    std::string file_name;
    int width = 0;
    int height = 0;
    std::vector<Annotation> annotations;
  };
  std::vector<TaskOutput> outputs(tasks.size());

  std::vector<long> fire_totals(p.config().stages.size(), 0);
  std::mutex fire_mutex;

  auto load_sample = [&](const ImageInfo& info) {
    ImageBuffer img = load_image((fs::path(image_root) / info.file_name).string());
    if (img.width != info.width || img.height != info.height)
      throw Error("image " + std::to_string(info.id) + " (\"" + info.file_name +
                  "\"): stored dims " + std::to_string(info.width) + "x" +
                  std::to_string(info.height) + " but file decodes to " +
                  std::to_string(img.width) + "x" + std::to_string(img.height));
    Sample s;
    s.image_id = info.id;
    s.image = std::move(img);
    auto it = anns_by_image.find(info.id);
    if (it != anns_by_image.end()) s.annotations = it->second;
    return s;
  };

  auto run_task = [&](std::size_t task_idx) {
    const Task& task = tasks[task_idx];
    const ImageInfo& info = *images[task.image_idx];
    TaskOutput& out = outputs[task_idx];
    out.source_image_id = info.id;
    try {
      Sample sample = load_sample(info);

      PartnerProvider partner;
      if (images.size() >= 2) {
        partner = [&, self = task.image_idx](RandomStream& rs) -> std::optional<Sample> {
          const std::int64_t draw =
              rs.uniform_int(0, static_cast<std::int64_t>(images.size()) - 2);
          std::size_t other = static_cast<std::size_t>(draw);
          if (other >= self) ++other;  // skip the current image
          return load_sample(*images[other]);
        };
      }

      std::vector<long> fires(p.config().stages.size(), 0);
      Sample result = apply_pipeline(p, sample, partner, SeedContext{info.id, task.pass},
                                     &fires);
      {
        std::lock_guard<std::mutex> lock(fire_mutex);
        for (std::size_t i = 0; i < fires.size(); ++i) fire_totals[i] += fires[i];
      }

      out.file_name = std::to_string(info.id) + "_" + std::to_string(task.pass) + ".png";
      save_image(result.image, (fs::path(out_root) / out.file_name).string());
      out.width = result.image.width;
      out.height = result.image.height;
      out.annotations = std::move(result.annotations);
      out.ok = true;
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
  };

  const int n_workers = std::max(1, workers);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      run_task(i);
    }
  };
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_workers));
    for (int i = 0; i < n_workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  // merge in task order: deterministic regardless of scheduling
  RunResult result;
  result.dataset.categories = ds.categories;
  result.stats.total_passes = static_cast<long>(tasks.size());
  result.stats.stage_fires = fire_totals;

  std::int64_t next_image_id = 0;
  std::int64_t next_ann_id = 0;
  for (const TaskOutput& out : outputs) {
    if (!out.ok) {
      result.stats.failures.push_back({out.source_image_id, out.error});
      continue;
    }
    const std::int64_t image_id = ++next_image_id;
    result.dataset.images.push_back(ImageInfo{image_id, out.file_name, out.width, out.height});
    for (Annotation a : out.annotations) {
      a.id = ++next_ann_id;
      a.image_id = image_id;
      result.dataset.annotations.push_back(a);
    }
  }
  return result;
}

}  // namespace logoforge
