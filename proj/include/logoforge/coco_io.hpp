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

#ifndef LOGOFORGE_COCO_IO_HPP
#define LOGOFORGE_COCO_IO_HPP

#include <string>
#include <vector>

#include "logoforge/types.hpp"

namespace logoforge {

// COCO-style annotation document:
//   {"images":      [{"id", "file_name", "width", "height"}],
//    "annotations": [{"id", "image_id", "category_id", "bbox": [x, y, w, h]}],
//    "categories":  [{"id", "name"}]}
// Unknown keys are ignored on read and never emitted on write.

/// Throws ParseError on malformed JSON (message carries the byte offset),
/// on a missing required key, and on referential violations (the message
/// lists every violation from validate_dataset).
Dataset parse_coco(const std::string& document);

/// Fixed key order (images, annotations, categories); numbers use the
/// shortest round-trippable form, so parse_coco(write_coco(ds)) == ds.
/// Throws Error when the dataset fails validation.
std::string write_coco(const Dataset& ds);

// Detection document: flat ordered array of
//   {"image_id", "category_id", "bbox": [x, y, w, h], "score"}

/// Order-preserving. Throws ParseError naming the record index when a
/// score falls outside [0,1] or a record is malformed.
std::vector<Detection> parse_detections(const std::string& document);

std::string write_detections(const std::vector<Detection>& dets);

/// Convenience file wrappers; errors carry the path.
Dataset load_coco_file(const std::string& path);
void save_coco_file(const Dataset& ds, const std::string& path);
std::vector<Detection> load_detections_file(const std::string& path);
void save_detections_file(const std::vector<Detection>& dets, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace logoforge

#endif  // LOGOFORGE_COCO_IO_HPP
