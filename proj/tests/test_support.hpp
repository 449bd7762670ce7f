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
//
// Shared test helpers: random generators and independent oracles. The
// oracles deliberately duplicate math (their own IoU, their own pixel maps)
// so they never share a code path with the library they check.

#ifndef LOGOFORGE_TEST_SUPPORT_HPP
#define LOGOFORGE_TEST_SUPPORT_HPP

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "logoforge/random.hpp"
#include "logoforge/types.hpp"

namespace logoforge::testing {

// ---------------------------------------------------------------------------
// scratch directories

class TempDir {
 public:
  explicit TempDir(const std::string& label) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("logoforge_" + label + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& rel = "") const {
    return rel.empty() ? path_.string() : (path_ / rel).string();
  }

 private:
  std::filesystem::path path_;
};

// ---------------------------------------------------------------------------
// generators

inline ImageBuffer random_image(RandomStream& rng, int w, int h) {
  ImageBuffer img(w, h);
  for (std::uint8_t& p : img.pixels)
    p = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
  return img;
}

/// Integer-aligned box inside a w x h image, at least 1x1.
inline BBox random_int_box(RandomStream& rng, int w, int h) {
  const int bw = static_cast<int>(rng.uniform_int(1, w));
  const int bh = static_cast<int>(rng.uniform_int(1, h));
  const int x = static_cast<int>(rng.uniform_int(0, w - bw));
  const int y = static_cast<int>(rng.uniform_int(0, h - bh));
  return BBox{static_cast<double>(x), static_cast<double>(y),
              static_cast<double>(bw), static_cast<double>(bh)};
}

inline Sample random_sample(RandomStream& rng, int max_dim = 16, int max_boxes = 4) {
  const int w = static_cast<int>(rng.uniform_int(1, max_dim));
  const int h = static_cast<int>(rng.uniform_int(1, max_dim));
  Sample s;
  s.image_id = rng.uniform_int(1, 1000);
  s.image = random_image(rng, w, h);
  const int n = static_cast<int>(rng.uniform_int(0, max_boxes));
  for (int i = 0; i < n; ++i) {
    Annotation a;
    a.id = i + 1;
    a.image_id = s.image_id;
    a.category_id = rng.uniform_int(1, 3);
    a.bbox = random_int_box(rng, w, h);
    s.annotations.push_back(a);
  }
  return s;
}

/// Valid dataset: every image single-category, >= min_per_cat images per
/// category, boxes inside bounds. Suitable for split/merge property tests.
inline Dataset random_dataset(RandomStream& rng, int n_cats = 3, int min_per_cat = 3,
                              int extra = 4) {
  Dataset ds;
  for (int c = 1; c <= n_cats; ++c)
    ds.categories.push_back({c, "brand" + std::to_string(c)});
  std::int64_t next_img = 1, next_ann = 1;
  for (int c = 1; c <= n_cats; ++c) {
    const int count = min_per_cat + static_cast<int>(rng.uniform_int(0, extra));
    for (int i = 0; i < count; ++i) {
      const int w = static_cast<int>(rng.uniform_int(8, 32));
      const int h = static_cast<int>(rng.uniform_int(8, 32));
      const std::int64_t id = next_img++;
      ds.images.push_back(
          {id, "img_" + std::to_string(id) + ".png", w, h});
      const int boxes = static_cast<int>(rng.uniform_int(1, 3));
      for (int b = 0; b < boxes; ++b)
        ds.annotations.push_back({next_ann++, id, c, random_int_box(rng, w, h)});
    }
  }
  return ds;
}

// ---------------------------------------------------------------------------
// pixel-mask oracles for the geometric ops

using Mask = std::vector<std::uint8_t>;  // w*h, row-major

/// Pixel (px,py) is inside the box iff its center lands in [x,x+w) x [y,y+h).
inline Mask rasterize_box(const BBox& b, int w, int h) {
  Mask m(static_cast<std::size_t>(w) * h, 0);
  for (int py = 0; py < h; ++py)
    for (int px = 0; px < w; ++px)
      if (px + 0.5 >= b.x && px + 0.5 < b.x + b.w && py + 0.5 >= b.y &&
          py + 0.5 < b.y + b.h)
        m[static_cast<std::size_t>(py) * w + px] = 1;
  return m;
}

inline Mask rotate_mask_cw(const Mask& m, int w, int h, int n) {
  if (n == 0) return m;
  Mask out;
  int cw = w, ch = h;
  Mask cur = m;
  for (int k = 0; k < n; ++k) {
    out.assign(cur.size(), 0);
    const int nw = ch, nh = cw;  // quarter turn swaps dims
    for (int y = 0; y < ch; ++y)
      for (int x = 0; x < cw; ++x)
        if (cur[static_cast<std::size_t>(y) * cw + x])
          out[static_cast<std::size_t>(x) * nw + (ch - 1 - y)] = 1;
    cur = out;
    cw = nw;
    ch = nh;
  }
  return cur;
}

inline Mask hflip_mask(const Mask& m, int w, int h) {
  Mask out(m.size(), 0);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out[static_cast<std::size_t>(y) * w + (w - 1 - x)] =
          m[static_cast<std::size_t>(y) * w + x];
  return out;
}

/// Nearest-neighbor mask rescale with the half-pixel-center convention.
inline Mask scale_mask_nearest(const Mask& m, int w, int h, int nw, int nh) {
  Mask out(static_cast<std::size_t>(nw) * nh, 0);
  for (int y = 0; y < nh; ++y) {
    const int sy = std::min(h - 1, static_cast<int>((y + 0.5) * h / nh));
    for (int x = 0; x < nw; ++x) {
      const int sx = std::min(w - 1, static_cast<int>((x + 0.5) * w / nw));
      out[static_cast<std::size_t>(y) * nw + x] =
          m[static_cast<std::size_t>(sy) * w + sx];
    }
  }
  return out;
}

/// Tight integer bounding box of the set pixels; empty mask -> nullopt.
inline std::optional<BBox> tight_bbox(const Mask& m, int w, int h) {
  int x0 = w, y0 = h, x1 = -1, y1 = -1;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (m[static_cast<std::size_t>(y) * w + x]) {
        x0 = std::min(x0, x);
        y0 = std::min(y0, y);
        x1 = std::max(x1, x);
        y1 = std::max(y1, y);
      }
  if (x1 < 0) return std::nullopt;
  return BBox{static_cast<double>(x0), static_cast<double>(y0),
              static_cast<double>(x1 - x0 + 1), static_cast<double>(y1 - y0 + 1)};
}

// ---------------------------------------------------------------------------
// dense 2D gaussian convolution oracle (reflect border), double precision

inline std::vector<double> dense_gaussian_blur(const ImageBuffer& img, double sigma) {
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> kernel(2 * radius + 1);
  double ksum = 0;
  for (int i = -radius; i <= radius; ++i) {
    kernel[i + radius] = std::exp(-(static_cast<double>(i) * i) / (2 * sigma * sigma));
    ksum += kernel[i + radius];
  }
  for (double& k : kernel) k /= ksum;

  auto reflect = [](int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
  };

  const int W = img.width, H = img.height;
  std::vector<double> out(static_cast<std::size_t>(W) * H * 3, 0.0);
  for (int y = 0; y < H; ++y)
    for (int x = 0; x < W; ++x)
      for (int c = 0; c < 3; ++c) {
        double acc = 0;
        for (int dy = -radius; dy <= radius; ++dy)
          for (int dx = -radius; dx <= radius; ++dx)
            acc += kernel[dy + radius] * kernel[dx + radius] *
                   img.at(reflect(x + dx, W), reflect(y + dy, H), c);
        out[(static_cast<std::size_t>(y) * W + x) * 3 + c] = acc;
      }
  return out;
}

// ---------------------------------------------------------------------------
// brute-force greedy NMS oracle

inline double ref_iou(const BBox& a, const BBox& b) {
  const double x0 = std::max(a.x, b.x), y0 = std::max(a.y, b.y);
  const double x1 = std::min(a.x + a.w, b.x + b.w);
  const double y1 = std::min(a.y + a.h, b.y + b.h);
  const double inter = std::max(0.0, x1 - x0) * std::max(0.0, y1 - y0);
  const double uni = a.w * a.h + b.w * b.h - inter;
  return uni <= 0 ? 0.0 : inter / uni;
}

inline std::vector<Detection> ref_nms(const std::vector<Detection>& dets,
                                      double thresh) {
  std::vector<bool> alive(dets.size(), true);
  std::vector<Detection> kept;
  for (;;) {
    int best = -1;
    for (std::size_t i = 0; i < dets.size(); ++i)
      if (alive[i] && (best < 0 || dets[i].score > dets[static_cast<std::size_t>(best)].score))
        best = static_cast<int>(i);
    if (best < 0) break;
    alive[static_cast<std::size_t>(best)] = false;
    kept.push_back(dets[static_cast<std::size_t>(best)]);
    for (std::size_t i = 0; i < dets.size(); ++i)
      if (alive[i] && dets[i].category_id == dets[static_cast<std::size_t>(best)].category_id &&
          ref_iou(dets[i].bbox, dets[static_cast<std::size_t>(best)].bbox) > thresh)
        alive[i] = false;
  }
  return kept;
}

// ---------------------------------------------------------------------------
// naive PR-curve evaluator oracle

/// 101-point AP straight from the definition: for each grid recall r, the
/// best precision among prefixes whose recall reaches r.
inline double ref_average_precision(const std::vector<bool>& flags, std::size_t n_gt) {
  std::vector<double> prec, rec;
  std::size_t tp = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) ++tp;
    prec.push_back(static_cast<double>(tp) / static_cast<double>(i + 1));
    rec.push_back(static_cast<double>(tp) / static_cast<double>(n_gt));
  }
  double ap = 0;
  for (int t = 0; t <= 100; ++t) {
    const double r = t / 100.0;
    double best = 0;
    for (std::size_t i = 0; i < flags.size(); ++i)
      if (rec[i] >= r) best = std::max(best, prec[i]);
    ap += best;
  }
  return ap / 101.0;
}

/// Full mAP oracle. Independent matching loop, canonical (score, box)
/// ordering, mean over categories with GT then thresholds.
inline double ref_map(const std::vector<Detection>& dets, const Dataset& gt,
                      const std::vector<double>& thresholds) {
  double sum = 0;
  std::size_t cells = 0;
  for (const Category& cat : gt.categories) {
    std::vector<Annotation> gts;
    for (const Annotation& a : gt.annotations)
      if (a.category_id == cat.id) gts.push_back(a);
    if (gts.empty()) continue;

    std::vector<Detection> mine;
    for (const Detection& d : dets)
      if (d.category_id == cat.id) mine.push_back(d);
    std::sort(mine.begin(), mine.end(), [](const Detection& a, const Detection& b) {
      if (a.score != b.score) return a.score > b.score;
      if (a.bbox.x != b.bbox.x) return a.bbox.x < b.bbox.x;
      if (a.bbox.y != b.bbox.y) return a.bbox.y < b.bbox.y;
      if (a.bbox.w != b.bbox.w) return a.bbox.w < b.bbox.w;
      if (a.bbox.h != b.bbox.h) return a.bbox.h < b.bbox.h;
      return a.image_id < b.image_id;
    });

    for (double t : thresholds) {
      std::vector<bool> taken(gts.size(), false);
      std::vector<bool> flags;
      for (const Detection& d : mine) {
        int best = -1;
        double best_iou = 0;
        for (std::size_t g = 0; g < gts.size(); ++g) {
          if (taken[g] || gts[g].image_id != d.image_id) continue;
          const double v = ref_iou(d.bbox, gts[g].bbox);
          if (v >= t && v > best_iou) {
            best_iou = v;
            best = static_cast<int>(g);
          }
        }
        if (best >= 0) taken[static_cast<std::size_t>(best)] = true;
        flags.push_back(best >= 0);
      }
      sum += ref_average_precision(flags, gts.size());
      ++cells;
    }
  }
  return cells ? sum / static_cast<double>(cells) : 0.0;
}

// ---------------------------------------------------------------------------
// output-tree hashing for determinism checks

inline std::uint64_t fnv1a(const void* data, std::size_t n, std::uint64_t h) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t hash_tree(const std::filesystem::path& root) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::recursive_directory_iterator(root))
    if (entry.is_regular_file()) files.push_back(entry.path());
  std::sort(files.begin(), files.end());

  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& f : files) {
    const std::string rel = std::filesystem::relative(f, root).string();
    h = fnv1a(rel.data(), rel.size(), h);
    std::ifstream in(f, std::ios::binary);
    std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                            std::istreambuf_iterator<char>());
    h = fnv1a(bytes.data(), bytes.size(), h);
  }
  return h;
}

}  // namespace logoforge::testing

#endif  // LOGOFORGE_TEST_SUPPORT_HPP
