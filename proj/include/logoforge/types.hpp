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

#ifndef LOGOFORGE_TYPES_HPP
#define LOGOFORGE_TYPES_HPP

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace logoforge {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed or contract-violating input documents (JSON, configs).
struct ParseError : Error {
  using Error::Error;
};

/// File-system and codec failures; the message carries the path.
struct IoError : Error {
  using Error::Error;
};

/// Decoded raster: 3 interleaved 8-bit channels (RGB), row-major.
struct ImageBuffer {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  ImageBuffer() = default;
  ImageBuffer(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h),
        pixels(static_cast<std::size_t>(w) * static_cast<std::size_t>(h) * 3, fill) {
    if (w < 1 || h < 1) throw Error("ImageBuffer: dimensions must be >= 1");
  }

  std::size_t size_bytes() const { return pixels.size(); }

  std::uint8_t at(int x, int y, int c) const {
    assert(x >= 0 && x < width && y >= 0 && y < height && c >= 0 && c < 3);
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }
  std::uint8_t& at(int x, int y, int c) {
    assert(x >= 0 && x < width && y >= 0 && y < height && c >= 0 && c < 3);
    return pixels[(static_cast<std::size_t>(y) * width + x) * 3 + c];
  }

  const std::uint8_t* row(int y) const {
    return pixels.data() + static_cast<std::size_t>(y) * width * 3;
  }
  std::uint8_t* row(int y) {
    return pixels.data() + static_cast<std::size_t>(y) * width * 3;
  }

  bool operator==(const ImageBuffer&) const = default;
};

/// Axis-aligned box in pixel coordinates, (x, y) = top-left corner.
struct BBox {
  double x = 0;
  double y = 0;
  double w = 0;
  double h = 0;

  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double area() const { return w * h; }

  bool operator==(const BBox&) const = default;
};

struct Annotation {
  std::int64_t id = 0;
  std::int64_t image_id = 0;
  std::int64_t category_id = 0;
  BBox bbox;

  bool operator==(const Annotation&) const = default;
};

struct Category {
  std::int64_t id = 0;
  std::string name;

  bool operator==(const Category&) const = default;
};

struct ImageInfo {
  std::int64_t id = 0;
  std::string file_name;
  int width = 0;
  int height = 0;

  bool operator==(const ImageInfo&) const = default;
};

/// COCO-style collection. Referential integrity is checked by
/// validate_dataset, not enforced on mutation.
struct Dataset {
  std::vector<ImageInfo> images;
  std::vector<Annotation> annotations;
  std::vector<Category> categories;

  bool operator==(const Dataset&) const = default;
};

/// A decoded image plus the annotations that live on it.
struct Sample {
  ImageBuffer image;
  std::vector<Annotation> annotations;
  std::int64_t image_id = 0;
};

/// Predicted box with confidence in [0,1].
struct Detection {
  std::int64_t image_id = 0;
  std::int64_t category_id = 0;
  BBox bbox;
  double score = 0;

  bool operator==(const Detection&) const = default;
};

}  // namespace logoforge

#endif  // LOGOFORGE_TYPES_HPP
