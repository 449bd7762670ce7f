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

#ifndef LOGOFORGE_GEOMETRY_HPP
#define LOGOFORGE_GEOMETRY_HPP

#include <utility>

#include "logoforge/types.hpp"

namespace logoforge {

struct ScaleJitterParams {
  double min_ratio = 0.1;
  double max_ratio = 2.0;
};

struct MixupParams {
  double alpha = 0.5;  // weight of the first sample, in (0,1)
  ScaleJitterParams jitter;
};

/// Quarter-turns clockwise, n in {0,1,2,3}.
struct RotationChoice {
  int n = 0;
};

enum class ResampleFilter { bilinear, nearest };

// Box transforms in continuous coordinates. These are the exact affine
// companions of the pixel-index maps below; tests compare them against
// rasterized-mask oracles.
BBox scale_box(const BBox& b, double sx, double sy);
BBox hflip_box(const BBox& b, int image_width);
BBox rotate90_box(const BBox& b, int n, int image_width, int image_height);

/// Dimensions after scale_jitter: round(d * ratio), floored at 1.
std::pair<int, int> scaled_dims(int width, int height, double ratio);

ImageBuffer resize_image(const ImageBuffer& img, int new_w, int new_h,
                         ResampleFilter filter = ResampleFilter::bilinear);

/// Uniform rescale by `ratio` (aspect preserved). Boxes are scaled by the
/// realized per-axis ratios new/old, then clipped and filtered.
Sample scale_jitter(const Sample& s, double ratio,
                    ResampleFilter filter = ResampleFilter::bilinear);

/// n=1 maps pixel (x,y) of a WxH image to (H-1-y, x); n=2 and n=3 compose.
/// Box areas and annotation count are preserved exactly.
Sample rotate90(const Sample& s, RotationChoice rot);

/// Pixel column x -> W-1-x; box (x,y,w,h) -> (W-x-w, y, w, h).
Sample hflip(const Sample& s);

/// Grows the canvas to target dims, content anchored top-left, new area
/// filled with `fill`. Boxes are unchanged. Throws when target < source.
Sample pad_to(const Sample& s, int target_w, int target_h, std::uint8_t fill = 0);

/// Intersects every box with the image rectangle and drops boxes whose
/// clipped width or height falls below min_box_size.
Sample clip_and_filter(const Sample& s, double min_box_size = 1.0);

/// Deterministic resize to exact dims; aspect may change. Boxes follow the
/// per-axis ratios and are clipped afterwards.
Sample resize_to(const Sample& s, int new_w, int new_h,
                 ResampleFilter filter = ResampleFilter::bilinear);

/// Scale-jitters both samples by their ratios, pads them to the common
/// (max-width, max-height) shape with zero fill, and blends pixelwise:
/// round(alpha*a' + (1-alpha)*b'). Annotations are the clip-filtered union
/// of both sides, each keeping its own hard label; no deduplication. The
/// result keeps a's image_id.
Sample simple_mixup(const Sample& a, const Sample& b, const MixupParams& params,
                    std::pair<double, double> ratios);

}  // namespace logoforge

#endif  // LOGOFORGE_GEOMETRY_HPP
