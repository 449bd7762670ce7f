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

#ifndef LOGOFORGE_PHOTOMETRIC_HPP
#define LOGOFORGE_PHOTOMETRIC_HPP

#include <array>
#include <vector>

#include "logoforge/random.hpp"
#include "logoforge/types.hpp"

namespace logoforge {

// Color-space ops only; none of these touch annotations or dimensions.

struct ColorJitterParams {
  double p_invert = 0.1;
  double p_swap = 0.2;
  double p_blur = 0.2;
  double p_gauss_noise = 0.2;
  double p_impulse = 0.2;
  double brightness_min = 0.6, brightness_max = 1.4;
  double contrast_min = 0.6, contrast_max = 1.4;
  double saturation_min = 0.6, saturation_max = 1.4;
  double hue_min_deg = -18.0, hue_max_deg = 18.0;
  double blur_sigma_min = 0.5, blur_sigma_max = 2.0;
  double noise_std_min = 2.0, noise_std_max = 15.0;
  double impulse_fraction_min = 0.01, impulse_fraction_max = 0.05;
};

enum class RaOp {
  autocontrast,
  equalize,
  posterize,
  solarize,
  color,
  contrast,
  brightness,
  sharpness,
};

const std::vector<RaOp>& default_rand_augment_pool();
const char* ra_op_name(RaOp op);
RaOp ra_op_from_name(const std::string& name);  // throws ParseError

struct RandAugmentParams {
  int n_ops = 1;
  int magnitude = 10;  // 0..30
  std::vector<RaOp> op_pool = default_rand_augment_pool();
};

/// x -> 255 - x on every channel.
ImageBuffer invert(const ImageBuffer& img);

ImageBuffer adjust_brightness(const ImageBuffer& img, double factor);
/// (x - m)*factor + m with m = mean Rec.601 luma of the image.
ImageBuffer adjust_contrast(const ImageBuffer& img, double factor);
/// Blend each pixel with its own Rec.601 luma; factor 0 is grayscale.
ImageBuffer adjust_saturation(const ImageBuffer& img, double factor);
/// Rotate hue in HSV space by the given degrees.
ImageBuffer adjust_hue(const ImageBuffer& img, double degrees);

/// Fixed order: brightness, contrast, saturation, hue. Neutral parameters
/// (factor 1, hue 0) skip their stage so the neutral call is exact identity.
ImageBuffer adjust_bcsh(const ImageBuffer& img, double brightness, double contrast,
                        double saturation, double hue_degrees);

/// Output channel i reads input channel perm[i].
ImageBuffer swap_channels(const ImageBuffer& img, const std::array<int, 3>& perm);

/// Separable convolution, kernel radius ceil(3*sigma), reflect border.
/// sigma 0 is the identity.
ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma);

/// x -> clip(round(x + N(0, std^2))) per channel, row-major draw order.
ImageBuffer gaussian_noise(const ImageBuffer& img, double stddev, RandomStream& rng);

/// Each pixel independently hit with probability `fraction`; hit pixels
/// become pure black or pure white, equal odds.
ImageBuffer impulse_noise(const ImageBuffer& img, double fraction, RandomStream& rng);

/// The composite jitter: invert gate, bcsh with sampled parameters, channel
/// swap gate, then blur / gaussian noise / impulse noise gates, in that
/// order. All randomness comes from the supplied stream.
ImageBuffer strong_color_jitter(const ImageBuffer& img, const ColorJitterParams& params,
                                RandomStream& rng);

// RandAugment primitives, exposed for direct testing.
ImageBuffer autocontrast(const ImageBuffer& img);
ImageBuffer equalize(const ImageBuffer& img);
ImageBuffer posterize(const ImageBuffer& img, int bits);
ImageBuffer solarize(const ImageBuffer& img, int threshold);
ImageBuffer adjust_sharpness(const ImageBuffer& img, double factor);

/// Applies n_ops ops drawn uniformly (with replacement) from the pool.
/// Strength maps linearly from magnitude/30 into each op's range; the
/// enhancement ops (color/contrast/brightness/sharpness) draw a random
/// direction. magnitude 30 solarize inverts every pixel.
ImageBuffer rand_augment(const ImageBuffer& img, const RandAugmentParams& params,
                         RandomStream& rng);

}  // namespace logoforge

#endif  // LOGOFORGE_PHOTOMETRIC_HPP
