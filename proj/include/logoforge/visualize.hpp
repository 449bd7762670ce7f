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

#ifndef LOGOFORGE_VISUALIZE_HPP
#define LOGOFORGE_VISUALIZE_HPP

#include <array>
#include <string>
#include <vector>

#include "logoforge/types.hpp"

namespace logoforge {

using Rgb = std::array<std::uint8_t, 3>;

/// Stable, high-contrast color keyed by category id.
Rgb category_color(std::int64_t category_id);

void draw_box_outline(ImageBuffer& img, const BBox& box, Rgb color, int thickness = 2);

/// 5x7 bitmap text, top-left anchored. Pixels outside the image are skipped.
void draw_text(ImageBuffer& img, int x, int y, const std::string& text, Rgb color);

/// Ground-truth overlay: outlines plus "name" tags.
ImageBuffer render_annotations(const ImageBuffer& img,
                               const std::vector<Annotation>& annotations,
                               const std::vector<Category>& categories);

/// Detection overlay: outlines plus "name:score" tags.
ImageBuffer render_detections(const ImageBuffer& img, const std::vector<Detection>& dets,
                              const std::vector<Category>& categories);

}  // namespace logoforge

#endif  // LOGOFORGE_VISUALIZE_HPP
