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

#include "logoforge/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace logoforge {

namespace {

std::uint8_t clamp_round_u8(double v) {
  const long r = std::lround(v);
  return static_cast<std::uint8_t>(std::clamp(r, 0L, 255L));
}

void check_sample(const Sample& s, const char* op) {
  if (s.image.width < 1 || s.image.height < 1 ||
      s.image.pixels.size() !=
          static_cast<std::size_t>(s.image.width) * s.image.height * 3)
    throw Error(std::string(op) + ": malformed image buffer");
}

}  // namespace

BBox scale_box(const BBox& b, double sx, double sy) {
  return BBox{b.x * sx, b.y * sy, b.w * sx, b.h * sy};
}

BBox hflip_box(const BBox& b, int image_width) {
  return BBox{image_width - b.x - b.w, b.y, b.w, b.h};
}

BBox rotate90_box(const BBox& b, int n, int image_width, int image_height) {
  const double W = image_width, H = image_height;
  switch (((n % 4) + 4) % 4) {
    case 0: return b;
    case 1: return BBox{H - b.y - b.h, b.x, b.h, b.w};
    case 2: return BBox{W - b.x - b.w, H - b.y - b.h, b.w, b.h};
    default: return BBox{b.y, W - b.x - b.w, b.h, b.w};
  }
}

std::pair<int, int> scaled_dims(int width, int height, double ratio) {
  const int nw = std::max(1L, std::lround(width * ratio));
  const int nh = std::max(1L, std::lround(height * ratio));
  return {nw, nh};
}

ImageBuffer resize_image(const ImageBuffer& img, int new_w, int new_h,
                         ResampleFilter filter) {
  if (new_w < 1 || new_h < 1) throw Error("resize_image: target dims must be >= 1");
  if (new_w == img.width && new_h == img.height) return img;

  ImageBuffer out(new_w, new_h);
  const double x_scale = static_cast<double>(img.width) / new_w;
  const double y_scale = static_cast<double>(img.height) / new_h;

  if (filter == ResampleFilter::nearest) {
    for (int y = 0; y < new_h; ++y) {
      const int sy = std::min(img.height - 1,
                              static_cast<int>((y + 0.5) * y_scale));
      const std::uint8_t* src_row = img.row(sy);
      std::uint8_t* dst_row = out.row(y);
      for (int x = 0; x < new_w; ++x) {
        const int sx = std::min(img.width - 1,
                                static_cast<int>((x + 0.5) * x_scale));
        dst_row[x * 3 + 0] = src_row[sx * 3 + 0];
        dst_row[x * 3 + 1] = src_row[sx * 3 + 1];
        dst_row[x * 3 + 2] = src_row[sx * 3 + 2];
      }
    }
    return out;
  }

  // bilinear, half-pixel-center convention
  for (int y = 0; y < new_h; ++y) {
    const double sy = (y + 0.5) * y_scale - 0.5;
    const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, img.height - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fy = std::clamp(sy - y0, 0.0, 1.0);
    const std::uint8_t* row0 = img.row(y0);
    const std::uint8_t* row1 = img.row(y1);
    std::uint8_t* dst_row = out.row(y);
    for (int x = 0; x < new_w; ++x) {
      const double sx = (x + 0.5) * x_scale - 0.5;
      const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, img.width - 1);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double fx = std::clamp(sx - x0, 0.0, 1.0);
      for (int c = 0; c < 3; ++c) {
        const double top = row0[x0 * 3 + c] * (1.0 - fx) + row0[x1 * 3 + c] * fx;
        const double bot = row1[x0 * 3 + c] * (1.0 - fx) + row1[x1 * 3 + c] * fx;
        dst_row[x * 3 + c] = clamp_round_u8(top * (1.0 - fy) + bot * fy);
      }
    }
  }
  return out;
}

Sample scale_jitter(const Sample& s, double ratio, ResampleFilter filter) {
  check_sample(s, "scale_jitter");
  if (ratio <= 0) throw Error("scale_jitter: ratio must be > 0");

  const auto [nw, nh] = scaled_dims(s.image.width, s.image.height, ratio);
  const double sx = static_cast<double>(nw) / s.image.width;
  const double sy = static_cast<double>(nh) / s.image.height;

  Sample out;
  out.image_id = s.image_id;
  out.image = resize_image(s.image, nw, nh, filter);
  out.annotations = s.annotations;
  for (Annotation& a : out.annotations) a.bbox = scale_box(a.bbox, sx, sy);
  return clip_and_filter(out);
}

Sample rotate90(const Sample& s, RotationChoice rot) {
  check_sample(s, "rotate90");
  if (rot.n < 0 || rot.n > 3) throw Error("rotate90: n must be in {0,1,2,3}");
  if (rot.n == 0) return s;

  const int W = s.image.width, H = s.image.height;
  const bool swap_dims = (rot.n % 2) == 1;
  ImageBuffer dst(swap_dims ? H : W, swap_dims ? W : H);

  const ImageBuffer& src = s.image;
  for (int y = 0; y < dst.height; ++y) {
    std::uint8_t* drow = dst.row(y);
    for (int x = 0; x < dst.width; ++x) {
      int sx_px = 0, sy_px = 0;
      switch (rot.n) {
        case 1: sx_px = y;             sy_px = H - 1 - x; break;
        case 2: sx_px = W - 1 - x;     sy_px = H - 1 - y; break;
        default: sx_px = W - 1 - y;    sy_px = x;         break;  // n == 3
      }
      const std::uint8_t* spx = src.row(sy_px) + sx_px * 3;
      drow[x * 3 + 0] = spx[0];
      drow[x * 3 + 1] = spx[1];
      drow[x * 3 + 2] = spx[2];
    }
  }

  Sample out;
  out.image_id = s.image_id;
  out.image = std::move(dst);
  out.annotations = s.annotations;
  for (Annotation& a : out.annotations) a.bbox = rotate90_box(a.bbox, rot.n, W, H);
  return out;
}

Sample hflip(const Sample& s) {
  check_sample(s, "hflip");
  const int W = s.image.width, H = s.image.height;

  Sample out;
  out.image_id = s.image_id;
  out.image = ImageBuffer(W, H);
  for (int y = 0; y < H; ++y) {
    const std::uint8_t* srow = s.image.row(y);
    std::uint8_t* drow = out.image.row(y);
    for (int x = 0; x < W; ++x) {
      const int mx = W - 1 - x;
      drow[x * 3 + 0] = srow[mx * 3 + 0];
      drow[x * 3 + 1] = srow[mx * 3 + 1];
      drow[x * 3 + 2] = srow[mx * 3 + 2];
    }
  }
  out.annotations = s.annotations;
  for (Annotation& a : out.annotations) a.bbox = hflip_box(a.bbox, W);
  return out;
}

Sample pad_to(const Sample& s, int target_w, int target_h, std::uint8_t fill) {
  check_sample(s, "pad_to");
  if (target_w < s.image.width || target_h < s.image.height)
    throw Error("pad_to: target " + std::to_string(target_w) + "x" +
                std::to_string(target_h) + " smaller than source " +
                std::to_string(s.image.width) + "x" + std::to_string(s.image.height));
  if (target_w == s.image.width && target_h == s.image.height) return s;

  Sample out;
  out.image_id = s.image_id;
  out.annotations = s.annotations;
  out.image = ImageBuffer(target_w, target_h, fill);
  for (int y = 0; y < s.image.height; ++y)
    std::copy_n(s.image.row(y), static_cast<std::size_t>(s.image.width) * 3,
                out.image.row(y));
  return out;
}

Sample clip_and_filter(const Sample& s, double min_box_size) {
  Sample out;
  out.image_id = s.image_id;
  out.image = s.image;
  const double W = s.image.width, H = s.image.height;
  for (const Annotation& a : s.annotations) {
    const double x0 = std::max(0.0, a.bbox.x);
    const double y0 = std::max(0.0, a.bbox.y);
    const double x1 = std::min(W, a.bbox.right());
    const double y1 = std::min(H, a.bbox.bottom());
    if (x1 - x0 < min_box_size || y1 - y0 < min_box_size) continue;
    Annotation kept = a;
    kept.bbox = BBox{x0, y0, x1 - x0, y1 - y0};
    out.annotations.push_back(kept);
  }
  return out;
}

Sample resize_to(const Sample& s, int new_w, int new_h, ResampleFilter filter) {
  check_sample(s, "resize_to");
  const double sx = static_cast<double>(new_w) / s.image.width;
  const double sy = static_cast<double>(new_h) / s.image.height;

  Sample out;
  out.image_id = s.image_id;
  out.image = resize_image(s.image, new_w, new_h, filter);
  out.annotations = s.annotations;
  for (Annotation& a : out.annotations) a.bbox = scale_box(a.bbox, sx, sy);
  return clip_and_filter(out);
}

Sample simple_mixup(const Sample& a, const Sample& b, const MixupParams& params,
                    std::pair<double, double> ratios) {
  if (params.alpha <= 0.0 || params.alpha >= 1.0)
    throw Error("simple_mixup: alpha must be in (0,1)");
  auto in_range = [&params](double r) {
    return r >= params.jitter.min_ratio && r <= params.jitter.max_ratio;
  };
  if (!in_range(ratios.first) || !in_range(ratios.second))
    throw Error("simple_mixup: ratio outside configured jitter range");

  const Sample aj = scale_jitter(a, ratios.first);
  const Sample bj = scale_jitter(b, ratios.second);

  const int W = std::max(aj.image.width, bj.image.width);
  const int H = std::max(aj.image.height, bj.image.height);
  const Sample ap = pad_to(aj, W, H, 0);
  const Sample bp = pad_to(bj, W, H, 0);

  Sample out;
  out.image_id = a.image_id;
  out.image = ImageBuffer(W, H);
  const double alpha = params.alpha;
  for (std::size_t i = 0; i < out.image.pixels.size(); ++i)
    out.image.pixels[i] =
        clamp_round_u8(alpha * ap.image.pixels[i] + (1.0 - alpha) * bp.image.pixels[i]);

  // union of both sides, hard labels, b re-homed onto a's image_id
  out.annotations = ap.annotations;
  for (Annotation ann : bp.annotations) {
    ann.image_id = a.image_id;
    out.annotations.push_back(ann);
  }
  return clip_and_filter(out);
}

}  // namespace logoforge
