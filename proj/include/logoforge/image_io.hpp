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

#ifndef LOGOFORGE_IMAGE_IO_HPP
#define LOGOFORGE_IMAGE_IO_HPP

#include <string>

#include "logoforge/types.hpp"

namespace logoforge {

enum class ImageFormat { png, jpeg };

/// Decodes a PNG or JPEG file (sniffed by magic bytes, not extension) into
/// an 8-bit RGB buffer. Grayscale is expanded, palettes resolved, and alpha
/// composited over black. Throws IoError with the path on unsupported or
/// truncated input.
ImageBuffer load_image(const std::string& path);

/// PNG is lossless: save(png) then load is pixel-exact. JPEG encodes at
/// quality 95 and is for previews only.
void save_image(const ImageBuffer& img, const std::string& path,
                ImageFormat format = ImageFormat::png);

}  // namespace logoforge

#endif  // LOGOFORGE_IMAGE_IO_HPP
