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

#ifndef LOGOFORGE_EVAL_HPP
#define LOGOFORGE_EVAL_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "logoforge/types.hpp"

namespace logoforge {

/// Greedy single-image, single-class matching. Detections are visited in
/// canonical order (descending score, ties by box coordinates so results
/// never depend on input order); each is matched to the not-yet-matched GT
/// box with the highest IoU >= iou_thresh. Returns (input index, matched)
/// in visit order.
std::vector<std::pair<std::size_t, bool>> match_detections(
    const std::vector<Detection>& dets, const std::vector<BBox>& gts,
    double iou_thresh);

/// 101-point interpolated AP over the recall grid {0, 0.01, ..., 1.00}.
/// `flags` are TP/FP indicators ordered by descending score. Empty when
/// n_gt == 0 (an excluded cell).
std::optional<double> average_precision(const std::vector<bool>& flags, std::size_t n_gt);

struct EvalCell {
  double iou_thresh = 0;
  double ap = 0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
};

struct CategoryEval {
  std::int64_t category_id = 0;
  std::string name;
  std::int64_t n_gt = 0;          // GT boxes of this category; 0 excludes the row
  std::vector<EvalCell> cells;    // one per threshold, empty when n_gt == 0
  double mean_ap = 0;             // mean over cells
};

struct EvalReport {
  std::vector<double> thresholds;
  std::vector<CategoryEval> categories;  // ascending category id
  double map = 0;   // mean over included categories, then thresholds
  double ap50 = 0;  // mean over included categories at IoU 0.50

  std::string to_table() const;
  std::string to_json() const;
};

std::vector<double> default_iou_thresholds();  // {0.50, 0.55, ..., 0.95}

/// COCO-style evaluation of detections against ground truth. Detections
/// citing a category absent from gt raise an error naming it; detections on
/// unknown images simply never match.
EvalReport evaluate(const std::vector<Detection>& dets, const Dataset& gt,
                    const std::vector<double>& thresholds = default_iou_thresholds());

}  // namespace logoforge

#endif  // LOGOFORGE_EVAL_HPP
