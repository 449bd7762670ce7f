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

#include "logoforge/coco_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "logoforge/dataset_ops.hpp"

namespace logoforge {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace {

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("parse error at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

const json& require_key(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(where + ": missing required key \"" + key + "\"");
  return *it;
}

std::int64_t require_int(const json& obj, const char* key, const std::string& where) {
  const json& v = require_key(obj, key, where);
  if (!v.is_number_integer())
    throw ParseError(where + ": key \"" + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require_key(obj, key, where);
  if (!v.is_string())
    throw ParseError(where + ": key \"" + key + "\" must be a string");
  return v.get<std::string>();
}

double require_number(const json& obj, const char* key, const std::string& where) {
  const json& v = require_key(obj, key, where);
  if (!v.is_number())
    throw ParseError(where + ": key \"" + key + "\" must be a number");
  return v.get<double>();
}

BBox require_bbox(const json& obj, const std::string& where) {
  const json& v = require_key(obj, "bbox", where);
  if (!v.is_array() || v.size() != 4)
    throw ParseError(where + ": \"bbox\" must be an array of 4 numbers");
  for (const json& e : v)
    if (!e.is_number())
      throw ParseError(where + ": \"bbox\" must be an array of 4 numbers");
  return BBox{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(),
              v[3].get<double>()};
}

ordered_json bbox_to_json(const BBox& b) {
  return ordered_json::array({b.x, b.y, b.w, b.h});
}

}  // namespace

Dataset parse_coco(const std::string& document) {
  const json root = parse_json(document);
  if (!root.is_object()) throw ParseError("document: top level must be an object");

  Dataset ds;
  const json& images = require_key(root, "images", "document");
  const json& annotations = require_key(root, "annotations", "document");
  const json& categories = require_key(root, "categories", "document");
  if (!images.is_array() || !annotations.is_array() || !categories.is_array())
    throw ParseError("document: \"images\", \"annotations\" and \"categories\" must be arrays");

  std::size_t i = 0;
  for (const json& im : images) {
    const std::string where = "images[" + std::to_string(i++) + "]";
    ImageInfo info;
    info.id = require_int(im, "id", where);
    info.file_name = require_string(im, "file_name", where);
    info.width = static_cast<int>(require_int(im, "width", where));
    info.height = static_cast<int>(require_int(im, "height", where));
    ds.images.push_back(std::move(info));
  }
  i = 0;
  for (const json& an : annotations) {
    const std::string where = "annotations[" + std::to_string(i++) + "]";
    Annotation a;
    a.id = require_int(an, "id", where);
    a.image_id = require_int(an, "image_id", where);
    a.category_id = require_int(an, "category_id", where);
    a.bbox = require_bbox(an, where);
    ds.annotations.push_back(a);
  }
  i = 0;
  for (const json& c : categories) {
    const std::string where = "categories[" + std::to_string(i++) + "]";
    Category cat;
    cat.id = require_int(c, "id", where);
    cat.name = require_string(c, "name", where);
    ds.categories.push_back(std::move(cat));
  }

  const std::vector<std::string> violations = validate_dataset(ds);
  if (!violations.empty()) {
    std::string msg = "document violates dataset invariants:";
    for (const std::string& v : violations) msg += "\n  - " + v;
    throw ParseError(msg);
  }
  return ds;
}

std::string write_coco(const Dataset& ds) {
  const std::vector<std::string> violations = validate_dataset(ds);
  if (!violations.empty()) {
    std::string msg = "write_coco: dataset is invalid:";
    for (const std::string& v : violations) msg += "\n  - " + v;
    throw Error(msg);
  }

  ordered_json root;
  root["images"] = ordered_json::array();
  for (const ImageInfo& im : ds.images)
    root["images"].push_back({{"id", im.id},
                              {"file_name", im.file_name},
                              {"width", im.width},
                              {"height", im.height}});
  root["annotations"] = ordered_json::array();
  for (const Annotation& a : ds.annotations)
    root["annotations"].push_back({{"id", a.id},
                                   {"image_id", a.image_id},
                                   {"category_id", a.category_id},
                                   {"bbox", bbox_to_json(a.bbox)}});
  root["categories"] = ordered_json::array();
  for (const Category& c : ds.categories)
    root["categories"].push_back({{"id", c.id}, {"name", c.name}});
  return root.dump(2);
}

std::vector<Detection> parse_detections(const std::string& document) {
  const json root = parse_json(document);
  if (!root.is_array()) throw ParseError("document: top level must be an array");

  std::vector<Detection> dets;
  std::size_t i = 0;
  for (const json& r : root) {
    const std::string where = "record " + std::to_string(i++);
    Detection d;
    d.image_id = require_int(r, "image_id", where);
    d.category_id = require_int(r, "category_id", where);
    d.bbox = require_bbox(r, where);
    d.score = require_number(r, "score", where);
    if (d.score < 0.0 || d.score > 1.0)
      throw ParseError(where + ": score " + std::to_string(d.score) +
                       " outside [0,1]");
    dets.push_back(d);
  }
  return dets;
}

std::string write_detections(const std::vector<Detection>& dets) {
  ordered_json root = ordered_json::array();
  for (const Detection& d : dets)
    root.push_back({{"image_id", d.image_id},
                    {"category_id", d.category_id},
                    {"bbox", bbox_to_json(d.bbox)},
                    {"score", d.score}});
  return root.dump(2);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open \"" + path + "\" for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("read failed on \"" + path + "\"");
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open \"" + path + "\" for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed on \"" + path + "\"");
}

Dataset load_coco_file(const std::string& path) {
  try {
    return parse_coco(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_coco_file(const Dataset& ds, const std::string& path) {
  write_text_file(path, write_coco(ds));
}

std::vector<Detection> load_detections_file(const std::string& path) {
  try {
    return parse_detections(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_detections_file(const std::vector<Detection>& dets, const std::string& path) {
  write_text_file(path, write_detections(dets));
}

}  // namespace logoforge
