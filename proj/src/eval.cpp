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

#include "logoforge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <json.hpp>

#include "logoforge/postprocess.hpp"

namespace logoforge {

namespace {

/// Canonical detection order: score desc, then box coordinates, category and
/// image ascending. Fully identical records compare equal and are
/// interchangeable, so evaluation is invariant under permutations of the
/// detection list (and under container iteration order).
bool canonical_before(const Detection& a, const Detection& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.bbox.x != b.bbox.x) return a.bbox.x < b.bbox.x;
  if (a.bbox.y != b.bbox.y) return a.bbox.y < b.bbox.y;
  if (a.bbox.w != b.bbox.w) return a.bbox.w < b.bbox.w;
  if (a.bbox.h != b.bbox.h) return a.bbox.h < b.bbox.h;
  if (a.category_id != b.category_id) return a.category_id < b.category_id;
  return a.image_id < b.image_id;
}

}  // namespace

std::vector<std::pair<std::size_t, bool>> match_detections(
    const std::vector<Detection>& dets, const std::vector<BBox>& gts,
    double iou_thresh) {
  std::vector<std::size_t> order(dets.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&dets](std::size_t a, std::size_t b) {
    if (canonical_before(dets[a], dets[b])) return true;
    if (canonical_before(dets[b], dets[a])) return false;
    return a < b;
  });

  std::vector<bool> gt_taken(gts.size(), false);
  std::vector<std::pair<std::size_t, bool>> out;
  out.reserve(dets.size());
  for (std::size_t idx : order) {
    double best_iou = 0;
    std::size_t best_gt = gts.size();
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (gt_taken[g]) continue;
      const double v = iou(dets[idx].bbox, gts[g]);
      if (v >= iou_thresh && v > best_iou) {
        best_iou = v;
        best_gt = g;
      }
    }
    const bool matched = best_gt < gts.size();
    if (matched) gt_taken[best_gt] = true;
    out.emplace_back(idx, matched);
  }
  return out;
}

std::optional<double> average_precision(const std::vector<bool>& flags,
                                        std::size_t n_gt) {
  if (n_gt == 0) return std::nullopt;

  std::vector<double> precision(flags.size()), recall(flags.size());
  std::size_t tp = 0;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) ++tp;
    precision[i] = static_cast<double>(tp) / static_cast<double>(i + 1);
    recall[i] = static_cast<double>(tp) / static_cast<double>(n_gt);
  }
  // precision envelope, monotone non-increasing from the right
  for (std::size_t i = flags.size(); i-- > 1;)
    precision[i - 1] = std::max(precision[i - 1], precision[i]);

  double ap = 0;
  for (int t = 0; t <= 100; ++t) {
    const double r = t / 100.0;
    const auto it = std::lower_bound(recall.begin(), recall.end(), r);
    if (it != recall.end())
      ap += precision[static_cast<std::size_t>(it - recall.begin())];
  }
  return ap / 101.0;
}

std::vector<double> default_iou_thresholds() {
  std::vector<double> out;
  for (int i = 0; i < 10; ++i) out.push_back((50 + 5 * i) / 100.0);
  return out;
}

EvalReport evaluate(const std::vector<Detection>& dets, const Dataset& gt,
                    const std::vector<double>& thresholds) {
  if (thresholds.empty()) throw Error("evaluate: threshold list is empty");

  std::unordered_set<std::int64_t> known_categories;
  for (const Category& c : gt.categories) known_categories.insert(c.id);
  for (const Detection& d : dets)
    if (!known_categories.count(d.category_id))
      throw Error("evaluate: detection cites unknown category " +
                  std::to_string(d.category_id));

  // (category, image) -> GT boxes, in annotation order
  std::map<std::int64_t, std::unordered_map<std::int64_t, std::vector<BBox>>> gt_boxes;
  std::map<std::int64_t, std::int64_t> gt_count;
  for (const Annotation& a : gt.annotations) {
    gt_boxes[a.category_id][a.image_id].push_back(a.bbox);
    ++gt_count[a.category_id];
  }
  std::map<std::int64_t, std::unordered_map<std::int64_t, std::vector<Detection>>>
      det_by_cat_img;
  for (const Detection& d : dets) det_by_cat_img[d.category_id][d.image_id].push_back(d);

  std::vector<Category> cats = gt.categories;
  std::sort(cats.begin(), cats.end(),
            [](const Category& a, const Category& b) { return a.id < b.id; });

  EvalReport report;
  report.thresholds = thresholds;

  double ap_sum = 0;
  std::size_t ap_cells = 0;
  double ap50_sum = 0;
  std::size_t ap50_cells = 0;

  for (const Category& cat : cats) {
    CategoryEval ce;
    ce.category_id = cat.id;
    ce.name = cat.name;
    ce.n_gt = gt_count.count(cat.id) ? gt_count[cat.id] : 0;
    if (ce.n_gt == 0) {
      report.categories.push_back(std::move(ce));
      continue;
    }

    // pool detections of this category across images once, canonical order
    std::vector<Detection> cat_dets;
    if (det_by_cat_img.count(cat.id))
      for (const auto& [img_id, v] : det_by_cat_img[cat.id])
        cat_dets.insert(cat_dets.end(), v.begin(), v.end());
    std::sort(cat_dets.begin(), cat_dets.end(), canonical_before);

    for (double t : thresholds) {
      // matched flags per image, then pooled by canonical global order
      std::unordered_map<std::int64_t, std::vector<bool>> flags_by_img;
      std::unordered_map<std::int64_t, std::size_t> next_in_img;
      if (det_by_cat_img.count(cat.id)) {
        for (const auto& [img_id, img_dets] : det_by_cat_img[cat.id]) {
          static const std::vector<BBox> kNone;
          const auto& boxes = gt_boxes[cat.id].count(img_id)
                                  ? gt_boxes[cat.id][img_id]
                                  : kNone;
          const auto matches = match_detections(img_dets, boxes, t);
          // matches are in canonical order within the image already
          std::vector<bool> flags;
          flags.reserve(matches.size());
          for (const auto& [idx, ok] : matches) flags.push_back(ok);
          flags_by_img[img_id] = std::move(flags);
        }
      }

      std::vector<bool> pooled;
      pooled.reserve(cat_dets.size());
      std::int64_t tp = 0;
      for (const Detection& d : cat_dets) {
        auto& cursor = next_in_img[d.image_id];
        const bool ok = flags_by_img[d.image_id][cursor++];
        pooled.push_back(ok);
        if (ok) ++tp;
      }

      EvalCell cell;
      cell.iou_thresh = t;
      cell.ap = average_precision(pooled, static_cast<std::size_t>(ce.n_gt)).value();
      cell.tp = tp;
      cell.fp = static_cast<std::int64_t>(pooled.size()) - tp;
      ce.cells.push_back(cell);

      ap_sum += cell.ap;
      ++ap_cells;
    }
    ce.mean_ap = 0;
    for (const EvalCell& c : ce.cells) ce.mean_ap += c.ap;
    ce.mean_ap /= static_cast<double>(ce.cells.size());
    report.categories.push_back(std::move(ce));
  }

  // standalone AP50, computed even when 0.50 is not in the threshold list
  const bool have_50 =
      std::find(thresholds.begin(), thresholds.end(), 0.50) != thresholds.end();
  std::map<std::int64_t, double> ap50_by_cat;
  if (!have_50) {
    const EvalReport sub = evaluate(dets, gt, {0.50});
    for (const CategoryEval& ce : sub.categories)
      if (ce.n_gt > 0) ap50_by_cat[ce.category_id] = ce.cells.front().ap;
  }
  for (const CategoryEval& ce : report.categories) {
    if (ce.n_gt == 0) continue;
    double ap = 0;
    if (have_50) {
      for (const EvalCell& cell : ce.cells)
        if (cell.iou_thresh == 0.50) ap = cell.ap;
    } else {
      ap = ap50_by_cat[ce.category_id];
    }
    ap50_sum += ap;
    ++ap50_cells;
  }

  report.map = ap_cells ? ap_sum / static_cast<double>(ap_cells) : 0.0;
  report.ap50 = ap50_cells ? ap50_sum / static_cast<double>(ap50_cells) : 0.0;
  return report;
}

std::string EvalReport::to_table() const {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);

  std::size_t name_w = 8;
  for (const CategoryEval& ce : categories) name_w = std::max(name_w, ce.name.size());

  os << std::string(name_w, ' ') << "  " << "   n_gt" << "  " << "AP@0.50" << "  "
     << "mean AP" << "\n";
  for (const CategoryEval& ce : categories) {
    os << ce.name << std::string(name_w - ce.name.size(), ' ') << "  ";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%7lld", static_cast<long long>(ce.n_gt));
    os << buf << "  ";
    if (ce.n_gt == 0) {
      os << "      -" << "  " << "      -" << "   (no ground truth; excluded)\n";
      continue;
    }
    double ap50_cell = 0;
    for (const EvalCell& c : ce.cells)
      if (c.iou_thresh == 0.50) ap50_cell = c.ap;
    std::snprintf(buf, sizeof(buf), "%7.4f", ap50_cell);
    os << buf << "  ";
    std::snprintf(buf, sizeof(buf), "%7.4f", ce.mean_ap);
    os << buf << "\n";
  }
  os << "\n";
  os << "mAP@[";
  os.precision(2);
  os << thresholds.front() << ":" << thresholds.back() << "] = ";
  os.precision(4);
  os << map << "\n";
  os << "AP50 = " << ap50 << "\n";
  return os.str();
}

std::string EvalReport::to_json() const {
  nlohmann::ordered_json root;
  root["thresholds"] = thresholds;
  root["map"] = map;
  root["ap50"] = ap50;
  root["categories"] = nlohmann::ordered_json::array();
  for (const CategoryEval& ce : categories) {
    nlohmann::ordered_json c;
    c["id"] = ce.category_id;
    c["name"] = ce.name;
    c["n_gt"] = ce.n_gt;
    if (ce.n_gt == 0) {
      c["excluded"] = true;
    } else {
      c["mean_ap"] = ce.mean_ap;
      c["cells"] = nlohmann::ordered_json::array();
      for (const EvalCell& cell : ce.cells)
        c["cells"].push_back({{"iou", cell.iou_thresh},
                              {"ap", cell.ap},
                              {"tp", cell.tp},
                              {"fp", cell.fp}});
    }
    root["categories"].push_back(std::move(c));
  }
  return root.dump(2);
}

}  // namespace logoforge
