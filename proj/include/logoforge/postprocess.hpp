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

#ifndef LOGOFORGE_POSTPROCESS_HPP
#define LOGOFORGE_POSTPROCESS_HPP

#include <string>
#include <utility>
#include <vector>

#include "logoforge/types.hpp"

namespace logoforge {

/// One inference pass of a TTA sweep: the resolution the detector ran at
/// and whether the input was mirrored.
struct TtaVariant {
  int width = 0;
  int height = 0;
  bool hflipped = false;
};

struct SuppressionParams {
  double factor = 0.3;  // multiplier for non-major-class scores, in [0,1]
};

/// Intersection over union, in [0,1]. Symmetric.
double iou(const BBox& a, const BBox& b);

/// Greedy class-wise NMS. Within each category, keeps the highest-score box
/// and removes same-category boxes with IoU strictly above the threshold
/// against any kept box. All detections must share one image_id. Output is
/// sorted by descending score, ties by ascending input index.
std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_thresh);

/// Maps detections produced at a variant's resolution (mirrored if the
/// variant says so) back to original-image coordinates.
std::vector<Detection> map_to_original(const std::vector<Detection>& dets,
                                       const TtaVariant& variant, int original_w,
                                       int original_h);

/// Multi-variant fusion: map every list to original coordinates,
/// concatenate, class-wise NMS, clip to original bounds.
std::vector<Detection> tta_fuse(
    const std::vector<std::pair<TtaVariant, std::vector<Detection>>>& per_variant,
    int original_w, int original_h, double iou_thresh);

/// The category of the single highest-score detection is the image's major
/// class (ties: lowest category id, then lowest input index). Everything
/// else has its score scaled by params.factor. Output ordered by
/// descending adjusted score.
std::vector<Detection> major_class_suppress(const std::vector<Detection>& dets,
                                            const SuppressionParams& params);

/// TTA sidecar document:
///   {"images":   [{"id", "width", "height"}],                // original dims
///    "variants": [{"width", "height", "hflip", "detections": <path>}]}
/// Detection paths are resolved relative to the sidecar's directory.
struct TtaSidecar {
  std::vector<ImageInfo> images;  // file_name unused here
  std::vector<std::pair<TtaVariant, std::vector<Detection>>> variants;
};

TtaSidecar load_tta_sidecar(const std::string& path);

}  // namespace logoforge

#endif  // LOGOFORGE_POSTPROCESS_HPP
