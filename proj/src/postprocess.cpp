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

#include "logoforge/postprocess.hpp"

#include <algorithm>
#include <filesystem>
#include <numeric>

#include <json.hpp>

#include "logoforge/coco_io.hpp"

namespace logoforge {

namespace {

void check_single_image(const std::vector<Detection>& dets, const char* op) {
  for (const Detection& d : dets)
    if (d.image_id != dets.front().image_id)
      throw Error(std::string(op) + ": detections span multiple image_ids (" +
                  std::to_string(dets.front().image_id) + " and " +
                  std::to_string(d.image_id) + ")");
}

/// Input indices ordered by descending score, ties by ascending index.
std::vector<std::size_t> score_order(const std::vector<Detection>& dets) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&dets](std::size_t a, std::size_t b) {
    return dets[a].score > dets[b].score;
  });
  return order;
}

}  // namespace

double iou(const BBox& a, const BBox& b) {
  const double ix = std::max(0.0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const double iy = std::max(0.0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  return uni <= 0.0 ? 0.0 : inter / uni;
}

std::vector<Detection> nms(const std::vector<Detection>& dets, double iou_thresh) {
  if (iou_thresh < 0.0 || iou_thresh > 1.0)
    throw Error("nms: iou threshold must be in [0,1]");
  if (dets.empty()) return {};
  check_single_image(dets, "nms");

  std::vector<Detection> kept;
  for (std::size_t idx : score_order(dets)) {
    const Detection& cand = dets[idx];
    bool suppressed = false;
    for (const Detection& k : kept) {
      if (k.category_id != cand.category_id) continue;
      if (iou(k.bbox, cand.bbox) > iou_thresh) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) kept.push_back(cand);
  }
  return kept;
}

std::vector<Detection> map_to_original(const std::vector<Detection>& dets,
                                       const TtaVariant& variant, int original_w,
                                       int original_h) {
  if (variant.width < 1 || variant.height < 1)
    throw Error("map_to_original: variant resolution must be >= 1x1");
  const double sx = static_cast<double>(original_w) / variant.width;
  const double sy = static_cast<double>(original_h) / variant.height;

  std::vector<Detection> out = dets;
  for (Detection& d : out) {
    BBox b = d.bbox;
    if (variant.hflipped) b.x = variant.width - b.x - b.w;
    d.bbox = BBox{b.x * sx, b.y * sy, b.w * sx, b.h * sy};
  }
  return out;
}

std::vector<Detection> tta_fuse(
    const std::vector<std::pair<TtaVariant, std::vector<Detection>>>& per_variant,
    int original_w, int original_h, double iou_thresh) {
  std::vector<Detection> pooled;
  for (const auto& [variant, dets] : per_variant) {
    const std::vector<Detection> mapped =
        map_to_original(dets, variant, original_w, original_h);
    pooled.insert(pooled.end(), mapped.begin(), mapped.end());
  }
  std::vector<Detection> fused = nms(pooled, iou_thresh);

  std::vector<Detection> out;
  out.reserve(fused.size());
  for (Detection d : fused) {
    const double x0 = std::clamp(d.bbox.x, 0.0, static_cast<double>(original_w));
    const double y0 = std::clamp(d.bbox.y, 0.0, static_cast<double>(original_h));
    const double x1 = std::clamp(d.bbox.right(), 0.0, static_cast<double>(original_w));
    const double y1 = std::clamp(d.bbox.bottom(), 0.0, static_cast<double>(original_h));
    if (x1 - x0 <= 0.0 || y1 - y0 <= 0.0) continue;
    d.bbox = BBox{x0, y0, x1 - x0, y1 - y0};
    out.push_back(d);
  }
  return out;
}

std::vector<Detection> major_class_suppress(const std::vector<Detection>& dets,
                                            const SuppressionParams& params) {
  if (params.factor < 0.0 || params.factor > 1.0)
    throw Error("major_class_suppress: factor must be in [0,1]");
  if (dets.empty()) return {};
  check_single_image(dets, "major_class_suppress");

  std::size_t best = 0;
  for (std::size_t i = 1; i < dets.size(); ++i) {
    if (dets[i].score > dets[best].score ||
        (dets[i].score == dets[best].score &&
         dets[i].category_id < dets[best].category_id))
      best = i;
  }
  const std::int64_t major = dets[best].category_id;

  std::vector<Detection> out = dets;
  for (Detection& d : out)
    if (d.category_id != major) d.score *= params.factor;

  std::vector<Detection> sorted;
  sorted.reserve(out.size());
  for (std::size_t idx : score_order(out)) sorted.push_back(out[idx]);
  return sorted;
}

TtaSidecar load_tta_sidecar(const std::string& path) {
  using json = nlohmann::json;
  json root;
  try {
    root = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!root.is_object() || !root.contains("images") || !root.contains("variants"))
    throw ParseError(path + ": sidecar needs top-level \"images\" and \"variants\"");

  TtaSidecar sidecar;
  for (const json& im : root["images"]) {
    if (!im.contains("id") || !im.contains("width") || !im.contains("height"))
      throw ParseError(path + ": sidecar image needs id, width, height");
    sidecar.images.push_back(ImageInfo{im["id"].get<std::int64_t>(), "",
                                       im["width"].get<int>(), im["height"].get<int>()});
  }
  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  for (const json& v : root["variants"]) {
    if (!v.contains("width") || !v.contains("height") || !v.contains("hflip") ||
        !v.contains("detections"))
      throw ParseError(path + ": sidecar variant needs width, height, hflip, detections");
    TtaVariant variant{v["width"].get<int>(), v["height"].get<int>(),
                       v["hflip"].get<bool>()};
    const std::string det_path = (base / v["detections"].get<std::string>()).string();
    sidecar.variants.emplace_back(variant, load_detections_file(det_path));
  }
  return sidecar;
}

}  // namespace logoforge
