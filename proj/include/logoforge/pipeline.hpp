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

#ifndef LOGOFORGE_PIPELINE_HPP
#define LOGOFORGE_PIPELINE_HPP

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "logoforge/geometry.hpp"
#include "logoforge/photometric.hpp"
#include "logoforge/random.hpp"
#include "logoforge/types.hpp"

namespace logoforge {

enum class StageKind {
  scale_jitter,
  rotate90,
  hflip,
  simple_mixup,
  strong_color_jitter,
  rand_augment,
  resize_to,
  pad_to,
};

const char* stage_kind_name(StageKind kind);

struct ScaleJitterStage {
  ScaleJitterParams range;
  ResampleFilter filter = ResampleFilter::bilinear;
};
struct Rotate90Stage {};  // n drawn uniformly from {1,2,3} when the stage fires
struct HflipStage {};
struct MixupStage {
  MixupParams params;
};
struct ColorJitterStage {
  ColorJitterParams params;
};
struct RandAugmentStage {
  RandAugmentParams params;
};
struct ResizeToStage {
  int width = 0;  // 0 = use the config's output_resolution
  int height = 0;
};
struct PadToStage {
  int width = 0;
  int height = 0;
  std::uint8_t fill = 0;
};

using StageParams = std::variant<ScaleJitterStage, Rotate90Stage, HflipStage, MixupStage,
                                 ColorJitterStage, RandAugmentStage, ResizeToStage,
                                 PadToStage>;

struct StageSpec {
  StageKind kind = StageKind::hflip;
  double probability = 1.0;
  StageParams params;
};

struct PipelineConfig {
  std::vector<StageSpec> stages;
  std::uint64_t global_seed = 0;
  int output_resolution = 1200;
  int passes_per_image = 1;
};

/// Strict JSON reader for the config file format documented in the README.
/// Unknown keys are rejected with a diagnostic naming the offending path.
PipelineConfig parse_pipeline_config(const std::string& json_text);

/// The full augmentation recipe: simple_mixup (p=0.5), rotate90 (p=0.5),
/// strong_color_jitter, rand_augment(n=1, m=10), square resize.
PipelineConfig full_recipe_config(int resolution, std::uint64_t seed);

/// Validated, executable stage list. Construct through build_pipeline.
class Pipeline {
 public:
  const PipelineConfig& config() const { return cfg_; }

 private:
  friend Pipeline build_pipeline(const PipelineConfig& cfg);
  explicit Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {}
  PipelineConfig cfg_;
};

/// Validates stage parameters; errors name the failing stage index.
/// resize_to stages with zero dims are resolved against output_resolution.
Pipeline build_pipeline(const PipelineConfig& cfg);

/// Supplies the second sample when a mixup stage fires, drawing any
/// randomness from the given stream. Returning nullopt (e.g. single-image
/// dataset) turns that mixup stage into a no-op.
using PartnerProvider = std::function<std::optional<Sample>(RandomStream&)>;

struct SeedContext {
  std::int64_t image_id = 0;
  int pass_index = 0;
};

/// Runs the stage list in order. Stage i fires iff the first draw of the
/// stream seeded with derive_seed({global_seed, image_id, pass_index, i})
/// lands below its probability; the stage's own randomness continues on the
/// same stream, so outputs depend only on (config, sample, seed context).
/// A final clip_and_filter always runs.
Sample apply_pipeline(const Pipeline& p, const Sample& s, const PartnerProvider& partner,
                      const SeedContext& ctx, std::vector<long>* fire_counts = nullptr);

struct RunFailure {
  std::int64_t image_id = 0;
  std::string message;
};

struct RunStats {
  long total_passes = 0;
  std::vector<long> stage_fires;  // parallel to config().stages
  std::vector<RunFailure> failures;
};

struct RunResult {
  Dataset dataset;
  RunStats stats;
};

/// Materializes passes_per_image augmented variants of every image as
/// "{image_id}_{pass}.png" under out_root and returns the dataset that
/// references them. Output bytes are identical for any worker count.
/// Unreadable images are collected as failures; the run continues.
RunResult run_dataset(const Pipeline& p, const Dataset& ds, const std::string& image_root,
                      const std::string& out_root, int workers);

}  // namespace logoforge

#endif  // LOGOFORGE_PIPELINE_HPP
