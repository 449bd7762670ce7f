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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>

#include "logoforge/coco_io.hpp"
#include "logoforge/image_io.hpp"
#include "test_support.hpp"

using namespace logoforge;
using namespace logoforge::testing;

namespace {

const char* kMinimalDoc = R"({
  "images": [{"id": 1, "file_name": "a.png", "width": 64, "height": 64}],
  "annotations": [{"id": 1, "image_id": 1, "category_id": 5, "bbox": [10, 20, 30, 40]}],
  "categories": [{"id": 5, "name": "brand"}]
})";

// 2x2 RGB8 PNG: (255,0,0) (0,255,0) / (0,0,255) (255,255,255)
const unsigned char kPng2x2Rgb[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49,
    0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x02,
    0x00, 0x00, 0x00, 0xfd, 0xd4, 0x9a, 0x73, 0x00, 0x00, 0x00, 0x12, 0x49, 0x44,
    0x41, 0x54, 0x78, 0x9c, 0x63, 0xf8, 0xcf, 0xc0, 0xc0, 0x00, 0xc2, 0x0c, 0xff,
    0x81, 0x00, 0x00, 0x1f, 0xee, 0x05, 0xfb, 0x0b, 0xd9, 0x68, 0x8b, 0x00, 0x00,
    0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

// 2x2 gray PNG: 0, 85 / 170, 255
const unsigned char kPng2x2Gray[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49,
    0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x00,
    0x00, 0x00, 0x00, 0x57, 0xdd, 0x52, 0xf8, 0x00, 0x00, 0x00, 0x0e, 0x49, 0x44,
    0x41, 0x54, 0x78, 0x9c, 0x63, 0x60, 0x08, 0x65, 0x58, 0xf5, 0x1f, 0x00, 0x03,
    0xad, 0x01, 0xff, 0x67, 0xfb, 0xca, 0x09, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45,
    0x4e, 0x44, 0xae, 0x42, 0x60, 0x82};

// 2x2 RGBA PNG: (200,100,50) at alpha 255/128/0, then (10,20,30,255)
const unsigned char kPng2x2Rgba[] = {
    0x89, 0x50, 0x4e, 0x47, 0x0d, 0x0a, 0x1a, 0x0a, 0x00, 0x00, 0x00, 0x0d, 0x49,
    0x48, 0x44, 0x52, 0x00, 0x00, 0x00, 0x02, 0x00, 0x00, 0x00, 0x02, 0x08, 0x06,
    0x00, 0x00, 0x00, 0x72, 0xb6, 0x0d, 0x24, 0x00, 0x00, 0x00, 0x17, 0x49, 0x44,
    0x41, 0x54, 0x78, 0x9c, 0x63, 0x38, 0x91, 0x62, 0xf4, 0x1f, 0x88, 0x1b, 0x18,
    0x80, 0x04, 0x03, 0x97, 0x88, 0xdc, 0x7f, 0x00, 0x46, 0x3f, 0x06, 0xd5, 0x23,
    0x28, 0x6d, 0xcc, 0x00, 0x00, 0x00, 0x00, 0x49, 0x45, 0x4e, 0x44, 0xae, 0x42,
    0x60, 0x82};

void write_bytes(const std::string& path, const unsigned char* data, std::size_t n) {
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(n));
}

}  // namespace

TEST_CASE("parse_coco reads the minimal document") {
  const Dataset ds = parse_coco(kMinimalDoc);
  CHECK(ds.images.size() == 1);
  CHECK(ds.annotations.size() == 1);
  CHECK(ds.categories.size() == 1);
  CHECK(ds.images[0].file_name == "a.png");
  // bbox array maps positionally
  CHECK(ds.annotations[0].bbox == BBox{10, 20, 30, 40});
}

TEST_CASE("parse_coco reports the byte offset of malformed JSON") {
  CHECK_THROWS_WITH_AS(parse_coco("{\"images\": [,]}"), doctest::Contains("byte"),
                       ParseError);
}

TEST_CASE("parse_coco names a missing required key") {
  CHECK_THROWS_WITH_AS(parse_coco(R"({"images": [], "annotations": []})"),
                       doctest::Contains("categories"), ParseError);
}

TEST_CASE("parse_coco surfaces referential violations") {
  const char* doc = R"({
    "images": [{"id": 1, "file_name": "a.png", "width": 8, "height": 8}],
    "annotations": [{"id": 1, "image_id": 1, "category_id": 9, "bbox": [0, 0, 2, 2]}],
    "categories": []
  })";
  CHECK_THROWS_WITH_AS(parse_coco(doc), doctest::Contains("missing category 9"),
                       ParseError);
}

TEST_CASE("parse_coco ignores unknown keys") {
  const char* doc = R"({
    "images": [{"id": 1, "file_name": "a.png", "width": 8, "height": 8, "license": 3}],
    "annotations": [],
    "categories": [{"id": 1, "name": "x", "supercategory": "logo"}],
    "info": {"year": 2022}
  })";
  const Dataset ds = parse_coco(doc);
  CHECK(ds.images.size() == 1);
  // nothing of the unknown keys survives a round trip
  CHECK(write_coco(ds).find("license") == std::string::npos);
}

TEST_CASE("write_coco emits the three arrays for an empty dataset") {
  const std::string text = write_coco(Dataset{});
  const Dataset back = parse_coco(text);
  CHECK(back.images.empty());
  CHECK(back.annotations.empty());
  CHECK(back.categories.empty());
  // fixed key order
  CHECK(text.find("\"images\"") < text.find("\"annotations\""));
  CHECK(text.find("\"annotations\"") < text.find("\"categories\""));
}

TEST_CASE("write_coco rejects an invalid dataset") {
  Dataset ds;
  ds.images = {{1, "a.png", 8, 8}, {1, "b.png", 8, 8}};
  CHECK_THROWS_AS((void)write_coco(ds), Error);
}

TEST_CASE("fractional coordinates round-trip exactly") {
  Dataset ds;
  ds.categories = {{1, "x"}};
  ds.images = {{1, "a.png", 8, 8}};
  ds.annotations = {{1, 1, 1, {1.5, 0.25, 3.125, 2.0}}};
  const std::string text = write_coco(ds);
  CHECK(text.find("1.5") != std::string::npos);
  CHECK(parse_coco(text) == ds);
}

TEST_CASE("property: dataset JSON round-trip is the identity") {
  for (int iter = 0; iter < 1000; ++iter) {
    RandomStream rng(3000 + iter);
    const Dataset ds = random_dataset(rng, 1 + iter % 3, 1, 2);
    CHECK(parse_coco(write_coco(ds)) == ds);
  }
}

TEST_CASE("detection documents parse, preserve order, and round-trip") {
  CHECK(parse_detections("[]").empty());

  const char* doc = R"([
    {"image_id": 3, "category_id": 1, "bbox": [1, 2, 3, 4], "score": 0.9},
    {"image_id": 1, "category_id": 2, "bbox": [5, 6, 7, 8], "score": 0.25}
  ])";
  const auto dets = parse_detections(doc);
  REQUIRE(dets.size() == 2);
  CHECK(dets[0].image_id == 3);
  CHECK(dets[0].score == 0.9);
  CHECK(dets[1].category_id == 2);

  CHECK(parse_detections(write_detections(dets)) == dets);
}

TEST_CASE("detection score outside [0,1] names the record") {
  const char* doc = R"([{"image_id": 1, "category_id": 1, "bbox": [0,0,1,1], "score": 1.2}])";
  CHECK_THROWS_WITH_AS(parse_detections(doc), doctest::Contains("record 0"), ParseError);
}

TEST_CASE("property: detection JSON round-trip is the identity") {
  for (int iter = 0; iter < 1000; ++iter) {
    RandomStream rng(4000 + iter);
    std::vector<Detection> dets;
    const int n = static_cast<int>(rng.uniform_int(0, 6));
    for (int i = 0; i < n; ++i)
      dets.push_back({rng.uniform_int(1, 5), rng.uniform_int(1, 3),
                      BBox{rng.uniform(0, 10), rng.uniform(0, 10), rng.uniform(0.1, 10),
                           rng.uniform(0.1, 10)},
                      rng.next_double()});
    CHECK(parse_detections(write_detections(dets)) == dets);
  }
}

TEST_CASE("load_image decodes a known RGB PNG bit-exactly") {
  TempDir dir("png_rgb");
  write_bytes(dir.str("p.png"), kPng2x2Rgb, sizeof(kPng2x2Rgb));
  const ImageBuffer img = load_image(dir.str("p.png"));
  REQUIRE(img.width == 2);
  REQUIRE(img.height == 2);
  const std::vector<std::uint8_t> want = {255, 0, 0, 0, 255, 0, 0, 0, 255, 255, 255, 255};
  CHECK(img.pixels == want);
}

TEST_CASE("load_image expands grayscale to RGB") {
  TempDir dir("png_gray");
  write_bytes(dir.str("g.png"), kPng2x2Gray, sizeof(kPng2x2Gray));
  const ImageBuffer img = load_image(dir.str("g.png"));
  const std::vector<std::uint8_t> want = {0, 0, 0, 85, 85, 85, 170, 170, 170, 255, 255, 255};
  CHECK(img.pixels == want);
}

TEST_CASE("load_image composites alpha over black") {
  TempDir dir("png_rgba");
  write_bytes(dir.str("a.png"), kPng2x2Rgba, sizeof(kPng2x2Rgba));
  const ImageBuffer img = load_image(dir.str("a.png"));
  // alpha 255 keeps the color, 128 halves it, 0 blacks it out
  CHECK(img.at(0, 0, 0) == 200);
  CHECK(img.at(1, 0, 0) == 100);
  CHECK(img.at(1, 0, 1) == 50);
  CHECK(img.at(0, 1, 0) == 0);
  CHECK(img.at(0, 1, 1) == 0);
  CHECK(img.at(1, 1, 2) == 30);
}

TEST_CASE("property: PNG save then load is pixel-exact") {
  for (int iter = 0; iter < 50; ++iter) {
    RandomStream rng(5000 + iter);
    TempDir dir("png_rt");
    const ImageBuffer img = random_image(rng, 8, 8);
    save_image(img, dir.str("x.png"));
    CHECK(load_image(dir.str("x.png")) == img);
  }
}

TEST_CASE("JPEG save then load keeps dimensions and approximate content") {
  TempDir dir("jpeg_rt");
  RandomStream rng(77);
  ImageBuffer img(16, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x)
      for (int c = 0; c < 3; ++c) img.at(x, y, c) = static_cast<std::uint8_t>(8 * (x + y));
  save_image(img, dir.str("x.jpg"), ImageFormat::jpeg);
  const ImageBuffer back = load_image(dir.str("x.jpg"));
  REQUIRE(back.width == 16);
  REQUIRE(back.height == 16);
  double max_err = 0;
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    max_err = std::max(max_err, std::fabs(double(img.pixels[i]) - back.pixels[i]));
  CHECK(max_err <= 24.0);  // quality 95 on a smooth ramp
}

TEST_CASE("truncated PNG raises a decode error naming the path") {
  TempDir dir("png_trunc");
  write_bytes(dir.str("t.png"), kPng2x2Rgb, sizeof(kPng2x2Rgb) / 2);
  CHECK_THROWS_WITH_AS((void)load_image(dir.str("t.png")), doctest::Contains("t.png"),
                       IoError);
}

TEST_CASE("non-image bytes are rejected as unsupported") {
  TempDir dir("not_img");
  write_text_file(dir.str("x.bin"), "definitely not pixels");
  CHECK_THROWS_WITH_AS((void)load_image(dir.str("x.bin")),
                       doctest::Contains("unsupported"), IoError);
  CHECK_THROWS_AS((void)load_image(dir.str("missing.png")), IoError);
}
