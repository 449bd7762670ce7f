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

#include "logoforge/photometric.hpp"

#include <algorithm>
#include <cmath>

namespace logoforge {

namespace {

std::uint8_t clamp_round_u8(double v) {
  const long r = std::lround(v);
  return static_cast<std::uint8_t>(std::clamp(r, 0L, 255L));
}

double rec601_luma(double r, double g, double b) {
  return 0.299 * r + 0.587 * g + 0.114 * b;
}

double mean_luma(const ImageBuffer& img) {
  double sum = 0;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i)
    sum += rec601_luma(img.pixels[i * 3], img.pixels[i * 3 + 1], img.pixels[i * 3 + 2]);
  return sum / static_cast<double>(n);
}

/// Symmetric reflection: -1 -> 0, n -> n-1. Folds until in range so it
/// stays valid when the kernel radius exceeds the image size.
int reflect_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

ImageBuffer apply_lut(const ImageBuffer& img, const std::array<std::uint8_t, 256>& lut,
                      int channel /* -1 = all */) {
  ImageBuffer out = img;
  const std::size_t n = out.pixels.size();
  if (channel < 0) {
    for (std::size_t i = 0; i < n; ++i) out.pixels[i] = lut[out.pixels[i]];
  } else {
    for (std::size_t i = static_cast<std::size_t>(channel); i < n; i += 3)
      out.pixels[i] = lut[out.pixels[i]];
  }
  return out;
}

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
  const double mx = std::max({r, g, b});
  const double mn = std::min({r, g, b});
  const double delta = mx - mn;
  v = mx;
  s = (mx <= 0.0) ? 0.0 : delta / mx;
  if (delta <= 0.0) {
    h = 0.0;
  } else if (mx == r) {
    h = 60.0 * std::fmod((g - b) / delta, 6.0);
  } else if (mx == g) {
    h = 60.0 * ((b - r) / delta + 2.0);
  } else {
    h = 60.0 * ((r - g) / delta + 4.0);
  }
  if (h < 0.0) h += 360.0;
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
  const double c = v * s;
  const double hh = h / 60.0;
  const double x = c * (1.0 - std::fabs(std::fmod(hh, 2.0) - 1.0));
  double r1 = 0, g1 = 0, b1 = 0;
  if (hh < 1.0) {
    r1 = c; g1 = x;
  } else if (hh < 2.0) {
    r1 = x; g1 = c;
  } else if (hh < 3.0) {
    g1 = c; b1 = x;
  } else if (hh < 4.0) {
    g1 = x; b1 = c;
  } else if (hh < 5.0) {
    r1 = x; b1 = c;
  } else {
    r1 = c; b1 = x;
  }
  const double m = v - c;
  r = r1 + m;
  g = g1 + m;
  b = b1 + m;
}

const std::array<std::array<int, 3>, 6> kChannelPerms = {{
    {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0},
}};

}  // namespace

ImageBuffer invert(const ImageBuffer& img) {
  ImageBuffer out = img;
  for (std::uint8_t& p : out.pixels) p = static_cast<std::uint8_t>(255 - p);
  return out;
}

ImageBuffer adjust_brightness(const ImageBuffer& img, double factor) {
  if (factor < 0) throw Error("adjust_brightness: factor must be >= 0");
  std::array<std::uint8_t, 256> lut;
  for (int v = 0; v < 256; ++v) lut[v] = clamp_round_u8(v * factor);
  return apply_lut(img, lut, -1);
}

ImageBuffer adjust_contrast(const ImageBuffer& img, double factor) {
  if (factor < 0) throw Error("adjust_contrast: factor must be >= 0");
  const double m = mean_luma(img);
  std::array<std::uint8_t, 256> lut;
  for (int v = 0; v < 256; ++v) lut[v] = clamp_round_u8((v - m) * factor + m);
  return apply_lut(img, lut, -1);
}

ImageBuffer adjust_saturation(const ImageBuffer& img, double factor) {
  if (factor < 0) throw Error("adjust_saturation: factor must be >= 0");
  ImageBuffer out = img;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) {
    const double y = rec601_luma(img.pixels[i * 3], img.pixels[i * 3 + 1],
                                 img.pixels[i * 3 + 2]);
    for (int c = 0; c < 3; ++c)
      out.pixels[i * 3 + c] = clamp_round_u8(y + (img.pixels[i * 3 + c] - y) * factor);
  }
  return out;
}

ImageBuffer adjust_hue(const ImageBuffer& img, double degrees) {
  if (degrees < -180.0 || degrees > 180.0)
    throw Error("adjust_hue: degrees must be in [-180,180]");
  ImageBuffer out = img;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) {
    double h, s, v;
    rgb_to_hsv(img.pixels[i * 3] / 255.0, img.pixels[i * 3 + 1] / 255.0,
               img.pixels[i * 3 + 2] / 255.0, h, s, v);
    h = std::fmod(h + degrees, 360.0);
    if (h < 0.0) h += 360.0;
    double r, g, b;
    hsv_to_rgb(h, s, v, r, g, b);
    out.pixels[i * 3 + 0] = clamp_round_u8(r * 255.0);
    out.pixels[i * 3 + 1] = clamp_round_u8(g * 255.0);
    out.pixels[i * 3 + 2] = clamp_round_u8(b * 255.0);
  }
  return out;
}

ImageBuffer adjust_bcsh(const ImageBuffer& img, double brightness, double contrast,
                        double saturation, double hue_degrees) {
  ImageBuffer out = img;
  if (brightness != 1.0) out = adjust_brightness(out, brightness);
  if (contrast != 1.0) out = adjust_contrast(out, contrast);
  if (saturation != 1.0) out = adjust_saturation(out, saturation);
  if (hue_degrees != 0.0) out = adjust_hue(out, hue_degrees);
  return out;
}

ImageBuffer swap_channels(const ImageBuffer& img, const std::array<int, 3>& perm) {
  bool seen[3] = {false, false, false};
  for (int p : perm) {
    if (p < 0 || p > 2 || seen[p]) throw Error("swap_channels: not a permutation of (0,1,2)");
    seen[p] = true;
  }
  ImageBuffer out = img;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < 3; ++c)
      out.pixels[i * 3 + c] = img.pixels[i * 3 + perm[c]];
  return out;
}

ImageBuffer gaussian_blur(const ImageBuffer& img, double sigma) {
  if (sigma < 0) throw Error("gaussian_blur: sigma must be >= 0");
  if (sigma == 0.0) return img;

  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double sum = 0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma));
    sum += kernel[i + radius];
  }
  for (double& k : kernel) k /= sum;

  const int W = img.width, H = img.height;
  std::vector<float> tmp(static_cast<std::size_t>(W) * H * 3);

  // horizontal
  for (int y = 0; y < H; ++y) {
    const std::uint8_t* srow = img.row(y);
    float* trow = tmp.data() + static_cast<std::size_t>(y) * W * 3;
    for (int x = 0; x < W; ++x) {
      double acc[3] = {0, 0, 0};
      for (int k = -radius; k <= radius; ++k) {
        const int sx = reflect_index(x + k, W);
        const double kw = kernel[k + radius];
        acc[0] += kw * srow[sx * 3 + 0];
        acc[1] += kw * srow[sx * 3 + 1];
        acc[2] += kw * srow[sx * 3 + 2];
      }
      trow[x * 3 + 0] = static_cast<float>(acc[0]);
      trow[x * 3 + 1] = static_cast<float>(acc[1]);
      trow[x * 3 + 2] = static_cast<float>(acc[2]);
    }
  }

  // vertical
  ImageBuffer out(W, H);
  for (int y = 0; y < H; ++y) {
    std::uint8_t* drow = out.row(y);
    for (int x = 0; x < W; ++x) {
      double acc[3] = {0, 0, 0};
      for (int k = -radius; k <= radius; ++k) {
        const int sy = reflect_index(y + k, H);
        const float* tpx = tmp.data() + (static_cast<std::size_t>(sy) * W + x) * 3;
        const double kw = kernel[k + radius];
        acc[0] += kw * tpx[0];
        acc[1] += kw * tpx[1];
        acc[2] += kw * tpx[2];
      }
      drow[x * 3 + 0] = clamp_round_u8(acc[0]);
      drow[x * 3 + 1] = clamp_round_u8(acc[1]);
      drow[x * 3 + 2] = clamp_round_u8(acc[2]);
    }
  }
  return out;
}

ImageBuffer gaussian_noise(const ImageBuffer& img, double stddev, RandomStream& rng) {
  if (stddev < 0) throw Error("gaussian_noise: std must be >= 0");
  if (stddev == 0.0) return img;
  ImageBuffer out = img;
  for (std::uint8_t& p : out.pixels) p = clamp_round_u8(p + rng.normal(0.0, stddev));
  return out;
}

ImageBuffer impulse_noise(const ImageBuffer& img, double fraction, RandomStream& rng) {
  if (fraction < 0.0 || fraction > 1.0)
    throw Error("impulse_noise: fraction must be in [0,1]");
  if (fraction == 0.0) return img;
  ImageBuffer out = img;
  const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
  for (std::size_t i = 0; i < n; ++i) {
    if (!rng.bernoulli(fraction)) continue;
    const std::uint8_t v = rng.bernoulli(0.5) ? 255 : 0;
    out.pixels[i * 3 + 0] = v;
    out.pixels[i * 3 + 1] = v;
    out.pixels[i * 3 + 2] = v;
  }
  return out;
}

ImageBuffer strong_color_jitter(const ImageBuffer& img, const ColorJitterParams& params,
                                RandomStream& rng) {
  ImageBuffer out = img;
  if (rng.bernoulli(params.p_invert)) out = invert(out);

  const double b = rng.uniform(params.brightness_min, params.brightness_max);
  const double c = rng.uniform(params.contrast_min, params.contrast_max);
  const double s = rng.uniform(params.saturation_min, params.saturation_max);
  const double h = rng.uniform(params.hue_min_deg, params.hue_max_deg);
  out = adjust_bcsh(out, b, c, s, h);

  if (rng.bernoulli(params.p_swap))
    out = swap_channels(out, kChannelPerms[static_cast<std::size_t>(rng.uniform_int(0, 5))]);
  if (rng.bernoulli(params.p_blur))
    out = gaussian_blur(out, rng.uniform(params.blur_sigma_min, params.blur_sigma_max));
  if (rng.bernoulli(params.p_gauss_noise))
    out = gaussian_noise(out, rng.uniform(params.noise_std_min, params.noise_std_max), rng);
  if (rng.bernoulli(params.p_impulse))
    out = impulse_noise(out, rng.uniform(params.impulse_fraction_min, params.impulse_fraction_max), rng);
  return out;
}

ImageBuffer autocontrast(const ImageBuffer& img) {
  ImageBuffer out = img;
  for (int c = 0; c < 3; ++c) {
    int lo = 255, hi = 0;
    for (std::size_t i = static_cast<std::size_t>(c); i < img.pixels.size(); i += 3) {
      lo = std::min<int>(lo, img.pixels[i]);
      hi = std::max<int>(hi, img.pixels[i]);
    }
    if (hi <= lo) continue;
    std::array<std::uint8_t, 256> lut{};
    for (int v = 0; v < 256; ++v)
      lut[v] = clamp_round_u8((v - lo) * 255.0 / (hi - lo));
    out = apply_lut(out, lut, c);
  }
  return out;
}

ImageBuffer equalize(const ImageBuffer& img) {
  ImageBuffer out = img;
  for (int c = 0; c < 3; ++c) {
    long hist[256] = {0};
    for (std::size_t i = static_cast<std::size_t>(c); i < img.pixels.size(); i += 3)
      ++hist[img.pixels[i]];

    // classic PIL scheme: ignore the last occupied level when sizing steps
    long total = 0;
    int last_nonzero = -1;
    int occupied = 0;
    for (int v = 0; v < 256; ++v) {
      if (hist[v] > 0) {
        total += hist[v];
        last_nonzero = v;
        ++occupied;
      }
    }
    if (occupied <= 1) continue;
    const long step = (total - hist[last_nonzero]) / 255;
    if (step == 0) continue;

    std::array<std::uint8_t, 256> lut{};
    long n = step / 2;
    for (int v = 0; v < 256; ++v) {
      lut[v] = static_cast<std::uint8_t>(std::clamp(n / step, 0L, 255L));
      n += hist[v];
    }
    out = apply_lut(out, lut, c);
  }
  return out;
}

ImageBuffer posterize(const ImageBuffer& img, int bits) {
  if (bits < 1 || bits > 8) throw Error("posterize: bits must be in [1,8]");
  const std::uint8_t mask = static_cast<std::uint8_t>(0xff << (8 - bits));
  ImageBuffer out = img;
  for (std::uint8_t& p : out.pixels) p = static_cast<std::uint8_t>(p & mask);
  return out;
}

ImageBuffer solarize(const ImageBuffer& img, int threshold) {
  if (threshold < 0 || threshold > 256) throw Error("solarize: threshold must be in [0,256]");
  ImageBuffer out = img;
  for (std::uint8_t& p : out.pixels)
    if (p >= threshold) p = static_cast<std::uint8_t>(255 - p);
  return out;
}

ImageBuffer adjust_sharpness(const ImageBuffer& img, double factor) {
  if (factor < 0) throw Error("adjust_sharpness: factor must be >= 0");
  // smoothing kernel [[1,1,1],[1,5,1],[1,1,1]]/13, reflect border
  const int W = img.width, H = img.height;
  ImageBuffer out(W, H);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      for (int c = 0; c < 3; ++c) {
        double acc = 0;
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            const double kw = (dx == 0 && dy == 0) ? 5.0 : 1.0;
            acc += kw * img.at(reflect_index(x + dx, W), reflect_index(y + dy, H), c);
          }
        }
        const double smooth = acc / 13.0;
        out.at(x, y, c) = clamp_round_u8(smooth + factor * (img.at(x, y, c) - smooth));
      }
    }
  }
  return out;
}

const std::vector<RaOp>& default_rand_augment_pool() {
  static const std::vector<RaOp> pool = {
      RaOp::autocontrast, RaOp::equalize, RaOp::posterize,  RaOp::solarize,
      RaOp::color,        RaOp::contrast, RaOp::brightness, RaOp::sharpness,
  };
  return pool;
}

const char* ra_op_name(RaOp op) {
  switch (op) {
    case RaOp::autocontrast: return "autocontrast";
    case RaOp::equalize: return "equalize";
    case RaOp::posterize: return "posterize";
    case RaOp::solarize: return "solarize";
    case RaOp::color: return "color";
    case RaOp::contrast: return "contrast";
    case RaOp::brightness: return "brightness";
    case RaOp::sharpness: return "sharpness";
  }
  return "?";
}

RaOp ra_op_from_name(const std::string& name) {
  for (RaOp op : default_rand_augment_pool())
    if (name == ra_op_name(op)) return op;
  throw ParseError("unknown rand_augment op \"" + name + "\"");
}

ImageBuffer rand_augment(const ImageBuffer& img, const RandAugmentParams& params,
                         RandomStream& rng) {
  if (params.n_ops < 0) throw Error("rand_augment: n_ops must be >= 0");
  if (params.magnitude < 0 || params.magnitude > 30)
    throw Error("rand_augment: magnitude must be in [0,30]");
  if (params.n_ops > 0 && params.op_pool.empty())
    throw Error("rand_augment: op pool is empty");

  const double m = params.magnitude / 30.0;
  ImageBuffer out = img;
  for (int k = 0; k < params.n_ops; ++k) {
    const RaOp op = params.op_pool[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(params.op_pool.size()) - 1))];
    switch (op) {
      case RaOp::autocontrast:
        out = autocontrast(out);
        break;
      case RaOp::equalize:
        out = equalize(out);
        break;
      case RaOp::posterize:
        out = posterize(out, 8 - static_cast<int>(std::lround(4.0 * m)));
        break;
      case RaOp::solarize:
        out = solarize(out, static_cast<int>(std::lround(255.0 * (1.0 - m))));
        break;
      case RaOp::color:
      case RaOp::contrast:
      case RaOp::brightness:
      case RaOp::sharpness: {
        const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
        const double factor = 1.0 + sign * 0.9 * m;
        if (op == RaOp::color) out = adjust_saturation(out, factor);
        else if (op == RaOp::contrast) out = adjust_contrast(out, factor);
        else if (op == RaOp::brightness) out = adjust_brightness(out, factor);
        else out = adjust_sharpness(out, factor);
        break;
      }
    }
  }
  return out;
}

}  // namespace logoforge
