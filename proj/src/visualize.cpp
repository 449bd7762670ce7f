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

#include "logoforge/visualize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "logoforge/random.hpp"

namespace logoforge {

namespace {

// classic 5x7 font, one byte per column, bit 0 = top row; ASCII 0x20..0x7e
const std::uint8_t kFont5x7[95][5] = {
    {0x00, 0x00, 0x00, 0x00, 0x00}, {0x00, 0x00, 0x5f, 0x00, 0x00},
    {0x00, 0x07, 0x00, 0x07, 0x00}, {0x14, 0x7f, 0x14, 0x7f, 0x14},
    {0x24, 0x2a, 0x7f, 0x2a, 0x12}, {0x23, 0x13, 0x08, 0x64, 0x62},
    {0x36, 0x49, 0x55, 0x22, 0x50}, {0x00, 0x05, 0x03, 0x00, 0x00},
    {0x00, 0x1c, 0x22, 0x41, 0x00}, {0x00, 0x41, 0x22, 0x1c, 0x00},
    {0x14, 0x08, 0x3e, 0x08, 0x14}, {0x08, 0x08, 0x3e, 0x08, 0x08},
    {0x00, 0x50, 0x30, 0x00, 0x00}, {0x08, 0x08, 0x08, 0x08, 0x08},
    {0x00, 0x60, 0x60, 0x00, 0x00}, {0x20, 0x10, 0x08, 0x04, 0x02},
    {0x3e, 0x51, 0x49, 0x45, 0x3e}, {0x00, 0x42, 0x7f, 0x40, 0x00},
    {0x42, 0x61, 0x51, 0x49, 0x46}, {0x21, 0x41, 0x45, 0x4b, 0x31},
    {0x18, 0x14, 0x12, 0x7f, 0x10}, {0x27, 0x45, 0x45, 0x45, 0x39},
    {0x3c, 0x4a, 0x49, 0x49, 0x30}, {0x01, 0x71, 0x09, 0x05, 0x03},
    {0x36, 0x49, 0x49, 0x49, 0x36}, {0x06, 0x49, 0x49, 0x29, 0x1e},
    {0x00, 0x36, 0x36, 0x00, 0x00}, {0x00, 0x56, 0x36, 0x00, 0x00},
    {0x08, 0x14, 0x22, 0x41, 0x00}, {0x14, 0x14, 0x14, 0x14, 0x14},
    {0x00, 0x41, 0x22, 0x14, 0x08}, {0x02, 0x01, 0x51, 0x09, 0x06},
    {0x32, 0x49, 0x79, 0x41, 0x3e}, {0x7e, 0x11, 0x11, 0x11, 0x7e},
    {0x7f, 0x49, 0x49, 0x49, 0x36}, {0x3e, 0x41, 0x41, 0x41, 0x22},
    {0x7f, 0x41, 0x41, 0x22, 0x1c}, {0x7f, 0x49, 0x49, 0x49, 0x41},
    {0x7f, 0x09, 0x09, 0x09, 0x01}, {0x3e, 0x41, 0x49, 0x49, 0x7a},
    {0x7f, 0x08, 0x08, 0x08, 0x7f}, {0x00, 0x41, 0x7f, 0x41, 0x00},
    {0x20, 0x40, 0x41, 0x3f, 0x01}, {0x7f, 0x08, 0x14, 0x22, 0x41},
    {0x7f, 0x40, 0x40, 0x40, 0x40}, {0x7f, 0x02, 0x0c, 0x02, 0x7f},
    {0x7f, 0x04, 0x08, 0x10, 0x7f}, {0x3e, 0x41, 0x41, 0x41, 0x3e},
    {0x7f, 0x09, 0x09, 0x09, 0x06}, {0x3e, 0x41, 0x51, 0x21, 0x5e},
    {0x7f, 0x09, 0x19, 0x29, 0x46}, {0x46, 0x49, 0x49, 0x49, 0x31},
    {0x01, 0x01, 0x7f, 0x01, 0x01}, {0x3f, 0x40, 0x40, 0x40, 0x3f},
    {0x1f, 0x20, 0x40, 0x20, 0x1f}, {0x3f, 0x40, 0x38, 0x40, 0x3f},
    {0x63, 0x14, 0x08, 0x14, 0x63}, {0x07, 0x08, 0x70, 0x08, 0x07},
    {0x61, 0x51, 0x49, 0x45, 0x43}, {0x00, 0x7f, 0x41, 0x41, 0x00},
    {0x02, 0x04, 0x08, 0x10, 0x20}, {0x00, 0x41, 0x41, 0x7f, 0x00},
    {0x04, 0x02, 0x01, 0x02, 0x04}, {0x40, 0x40, 0x40, 0x40, 0x40},
    {0x00, 0x01, 0x02, 0x04, 0x00}, {0x20, 0x54, 0x54, 0x54, 0x78},
    {0x7f, 0x48, 0x44, 0x44, 0x38}, {0x38, 0x44, 0x44, 0x44, 0x20},
    {0x38, 0x44, 0x44, 0x48, 0x7f}, {0x38, 0x54, 0x54, 0x54, 0x18},
    {0x08, 0x7e, 0x09, 0x01, 0x02}, {0x0c, 0x52, 0x52, 0x52, 0x3e},
    {0x7f, 0x08, 0x04, 0x04, 0x78}, {0x00, 0x44, 0x7d, 0x40, 0x00},
    {0x20, 0x40, 0x44, 0x3d, 0x00}, {0x7f, 0x10, 0x28, 0x44, 0x00},
    {0x00, 0x41, 0x7f, 0x40, 0x00}, {0x7c, 0x04, 0x18, 0x04, 0x78},
    {0x7c, 0x08, 0x04, 0x04, 0x78}, {0x38, 0x44, 0x44, 0x44, 0x38},
    {0x7c, 0x14, 0x14, 0x14, 0x08}, {0x08, 0x14, 0x14, 0x18, 0x7c},
    {0x7c, 0x08, 0x04, 0x04, 0x08}, {0x48, 0x54, 0x54, 0x54, 0x20},
    {0x04, 0x3f, 0x44, 0x40, 0x20}, {0x3c, 0x40, 0x40, 0x20, 0x7c},
    {0x1c, 0x20, 0x40, 0x20, 0x1c}, {0x3c, 0x40, 0x30, 0x40, 0x3c},
    {0x44, 0x28, 0x10, 0x28, 0x44}, {0x0c, 0x50, 0x50, 0x50, 0x3c},
    {0x44, 0x64, 0x54, 0x4c, 0x44}, {0x00, 0x08, 0x36, 0x41, 0x00},
    {0x00, 0x00, 0x7f, 0x00, 0x00}, {0x00, 0x41, 0x36, 0x08, 0x00},
    {0x10, 0x08, 0x08, 0x10, 0x08},
};

void put_pixel(ImageBuffer& img, int x, int y, Rgb color) {
  if (x < 0 || y < 0 || x >= img.width || y >= img.height) return;
  std::uint8_t* p = img.row(y) + x * 3;
  p[0] = color[0];
  p[1] = color[1];
  p[2] = color[2];
}

std::string category_name(const std::vector<Category>& categories, std::int64_t id) {
  for (const Category& c : categories)
    if (c.id == id) return c.name;
  return "cat" + std::to_string(id);
}

}  // namespace

Rgb category_color(std::int64_t category_id) {
  const std::uint64_t h = mix64(static_cast<std::uint64_t>(category_id));
  // keep channels away from very dark values so outlines stay visible
  return Rgb{static_cast<std::uint8_t>(64 + (h & 0xbf)),
             static_cast<std::uint8_t>(64 + ((h >> 8) & 0xbf)),
             static_cast<std::uint8_t>(64 + ((h >> 16) & 0xbf))};
}

void draw_box_outline(ImageBuffer& img, const BBox& box, Rgb color, int thickness) {
  const int x0 = static_cast<int>(std::lround(box.x));
  const int y0 = static_cast<int>(std::lround(box.y));
  const int x1 = static_cast<int>(std::lround(box.right())) - 1;
  const int y1 = static_cast<int>(std::lround(box.bottom())) - 1;
  for (int t = 0; t < thickness; ++t) {
    for (int x = x0 - t; x <= x1 + t; ++x) {
      put_pixel(img, x, y0 - t, color);
      put_pixel(img, x, y1 + t, color);
    }
    for (int y = y0 - t; y <= y1 + t; ++y) {
      put_pixel(img, x0 - t, y, color);
      put_pixel(img, x1 + t, y, color);
    }
  }
}

void draw_text(ImageBuffer& img, int x, int y, const std::string& text, Rgb color) {
  int cx = x;
  for (char ch : text) {
    if (ch < 0x20 || ch > 0x7e) ch = '?';
    const std::uint8_t* glyph = kFont5x7[ch - 0x20];
    for (int col = 0; col < 5; ++col)
      for (int row = 0; row < 7; ++row)
        if (glyph[col] & (1u << row)) put_pixel(img, cx + col, y + row, color);
    cx += 6;
  }
}

namespace {

void draw_tag(ImageBuffer& img, const BBox& box, const std::string& label, Rgb color) {
  const int text_w = static_cast<int>(label.size()) * 6 + 2;
  const int x0 = static_cast<int>(std::lround(box.x));
  int y0 = static_cast<int>(std::lround(box.y)) - 9;
  if (y0 < 0) y0 = static_cast<int>(std::lround(box.y)) + 1;
  for (int y = y0; y < y0 + 9; ++y)
    for (int x = x0; x < x0 + text_w; ++x) put_pixel(img, x, y, color);
  const Rgb ink{0, 0, 0};
  draw_text(img, x0 + 1, y0 + 1, label, ink);
}

}  // namespace

ImageBuffer render_annotations(const ImageBuffer& img,
                               const std::vector<Annotation>& annotations,
                               const std::vector<Category>& categories) {
  ImageBuffer out = img;
  for (const Annotation& a : annotations) {
    const Rgb color = category_color(a.category_id);
    draw_box_outline(out, a.bbox, color);
    draw_tag(out, a.bbox, category_name(categories, a.category_id), color);
  }
  return out;
}

ImageBuffer render_detections(const ImageBuffer& img, const std::vector<Detection>& dets,
                              const std::vector<Category>& categories) {
  ImageBuffer out = img;
  for (const Detection& d : dets) {
    const Rgb color = category_color(d.category_id);
    draw_box_outline(out, d.bbox, color);
    char score[16];
    std::snprintf(score, sizeof(score), "%.2f", d.score);
    draw_tag(out, d.bbox, category_name(categories, d.category_id) + ":" + score, color);
  }
  return out;
}

}  // namespace logoforge
