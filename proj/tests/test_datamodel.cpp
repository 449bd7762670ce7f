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

#include <map>
#include <set>

#include "logoforge/coco_io.hpp"
#include "logoforge/dataset_ops.hpp"
#include "test_support.hpp"

using namespace logoforge;
using namespace logoforge::testing;

namespace {

Dataset two_image_dataset() {
  Dataset ds;
  ds.categories = {{1, "brandA"}, {2, "brandB"}};
  ds.images = {{1, "a.png", 32, 32}, {2, "b.png", 16, 24}};
  ds.annotations = {{1, 1, 1, {2, 3, 10, 10}}, {2, 2, 2, {0, 0, 16, 24}}};
  return ds;
}

/// (file_name, category_name, rounded bbox) content fingerprint, invariant
/// under id renumbering.
std::multiset<std::string> content_triples(const Dataset& ds) {
  std::map<std::int64_t, std::string> file_by_image, name_by_cat;
  for (const ImageInfo& im : ds.images) file_by_image[im.id] = im.file_name;
  for (const Category& c : ds.categories) name_by_cat[c.id] = c.name;
  std::multiset<std::string> out;
  for (const Annotation& a : ds.annotations) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s|%s|%.3f,%.3f,%.3f,%.3f",
                  file_by_image[a.image_id].c_str(), name_by_cat[a.category_id].c_str(),
                  a.bbox.x, a.bbox.y, a.bbox.w, a.bbox.h);
    out.insert(buf);
  }
  return out;
}

std::map<std::string, int> annotations_per_category_name(const Dataset& ds) {
  std::map<std::int64_t, std::string> name_by_cat;
  for (const Category& c : ds.categories) name_by_cat[c.id] = c.name;
  std::map<std::string, int> out;
  for (const Annotation& a : ds.annotations) ++out[name_by_cat[a.category_id]];
  return out;
}

}  // namespace

TEST_CASE("validate passes a well-formed dataset") {
  CHECK(validate_dataset(two_image_dataset()).empty());
}

TEST_CASE("validate names a dangling image reference") {
  Dataset ds = two_image_dataset();
  ds.annotations.push_back({7, 99, 1, {0, 0, 1, 1}});
  const auto violations = validate_dataset(ds);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("annotation 7") != std::string::npos);
  CHECK(violations[0].find("99") != std::string::npos);
}

TEST_CASE("validate names a degenerate box") {
  Dataset ds = two_image_dataset();
  ds.annotations[0].bbox.w = 0;
  const auto violations = validate_dataset(ds);
  REQUIRE(violations.size() == 1);
  CHECK(violations[0].find("annotation 1") != std::string::npos);
  CHECK(violations[0].find("degenerate") != std::string::npos);
}

TEST_CASE("validate catches duplicate ids, bad dims and out-of-bounds boxes") {
  Dataset ds = two_image_dataset();
  ds.images.push_back({1, "dup.png", 8, 8});          // duplicate image id
  ds.images.push_back({3, "zero.png", 0, 8});         // bad dims
  ds.annotations.push_back({2, 1, 1, {30, 30, 5, 5}});  // dup ann id + outside 32x32
  ds.categories.push_back({3, "brandA"});             // duplicate name
  const auto violations = validate_dataset(ds);
  auto has = [&violations](const char* needle) {
    for (const auto& v : violations)
      if (v.find(needle) != std::string::npos) return true;
    return false;
  };
  CHECK(has("duplicate id"));
  CHECK(has("non-positive dimensions"));
  CHECK(has("outside image"));
  CHECK(has("duplicate name"));
}

TEST_CASE("split holds out exactly per_class images per category") {
  // the competition shape: 50 images per category, 5 held out
  Dataset ds;
  ds.categories = {{1, "brandA"}, {2, "brandB"}};
  std::int64_t img = 1, ann = 1;
  for (int c = 1; c <= 2; ++c)
    for (int i = 0; i < 50; ++i) {
      ds.images.push_back({img, "i" + std::to_string(img) + ".png", 20, 20});
      ds.annotations.push_back({ann++, img, c, {1, 1, 5, 5}});
      ++img;
    }

  const SplitResult split = split_dataset(ds, 5, 17);
  CHECK(split.val.images.size() == 10);
  CHECK(split.train.images.size() == 90);
  CHECK(validate_dataset(split.train).empty());
  CHECK(validate_dataset(split.val).empty());

  std::map<std::int64_t, int> val_per_cat;
  for (const Annotation& a : split.val.annotations) val_per_cat[a.category_id] = 0;
  std::set<std::int64_t> val_images;
  for (const ImageInfo& im : split.val.images) val_images.insert(im.id);
  for (const Annotation& a : ds.annotations)
    if (val_images.count(a.image_id)) ++val_per_cat[a.category_id];
  CHECK(val_per_cat[1] == 5);
  CHECK(val_per_cat[2] == 5);
}

TEST_CASE("split with holdout 0 returns the input as train") {
  const Dataset ds = two_image_dataset();
  const SplitResult split = split_dataset(ds, 0, 3);
  CHECK(split.val.images.empty());
  CHECK(split.train.images.size() == ds.images.size());
  CHECK(split.train.annotations.size() == ds.annotations.size());
}

TEST_CASE("split is deterministic for a fixed seed") {
  RandomStream rng(99);
  const Dataset ds = random_dataset(rng, 3, 6, 4);
  const std::string a1 = write_coco(split_dataset(ds, 2, 42).val);
  const std::string a2 = write_coco(split_dataset(ds, 2, 42).val);
  const std::string b = write_coco(split_dataset(ds, 2, 43).val);
  CHECK(a1 == a2);
  CHECK(a1 != b);  // different seed picks a different holdout here
}

TEST_CASE("split errors when a category runs out of candidates") {
  Dataset ds;
  ds.categories = {{1, "rare"}};
  ds.images = {{1, "a.png", 8, 8}, {2, "b.png", 8, 8}};
  ds.annotations = {{1, 1, 1, {0, 0, 2, 2}}, {2, 2, 1, {0, 0, 2, 2}}};
  CHECK_THROWS_WITH_AS(split_dataset(ds, 5, 0), doctest::Contains("rare"), Error);
}

TEST_CASE("split assigns multi-category images to the lowest category id") {
  // image 1 carries both categories; category 1 must claim it, category 2
  // then draws from what is left
  Dataset ds;
  ds.categories = {{1, "first"}, {2, "second"}};
  ds.images = {{1, "both.png", 8, 8}, {2, "second_only.png", 8, 8}};
  ds.annotations = {{1, 1, 1, {0, 0, 2, 2}},
                    {2, 1, 2, {1, 1, 2, 2}},
                    {3, 2, 2, {0, 0, 2, 2}}};
  const SplitResult split = split_dataset(ds, 1, 5);
  REQUIRE(split.val.images.size() == 2);  // one per category
  CHECK(split.train.images.empty());
}

TEST_CASE("merge with an empty dataset renormalizes ids") {
  Dataset a = two_image_dataset();
  a.images[0].id = 10;
  a.annotations[0].image_id = 10;
  const Dataset merged = merge_datasets(a, Dataset{});
  CHECK(merged.images.size() == 2);
  CHECK(merged.images[0].id == 1);
  CHECK(merged.images[1].id == 2);
  CHECK(validate_dataset(merged).empty());
  CHECK(content_triples(merged) == content_triples(a));
}

TEST_CASE("merge unifies categories by name and adds annotation counts") {
  Dataset a, b;
  a.categories = {{3, "brandX"}};
  a.images = {{1, "a1.png", 8, 8}};
  a.annotations = {{1, 1, 3, {0, 0, 2, 2}}, {2, 1, 3, {1, 1, 2, 2}}};
  b.categories = {{7, "brandX"}, {8, "brandY"}};
  b.images = {{1, "b1.png", 8, 8}};
  b.annotations = {{1, 1, 7, {0, 0, 3, 3}}, {2, 1, 8, {2, 2, 2, 2}}};

  const Dataset merged = merge_datasets(a, b);
  CHECK(merged.categories.size() == 2);
  CHECK(validate_dataset(merged).empty());
  const auto counts = annotations_per_category_name(merged);
  CHECK(counts.at("brandX") == 3);
  CHECK(counts.at("brandY") == 1);
}

TEST_CASE("merging the extra round-one images adds their count") {
  // round-2 set plus 100 round-1 images of 2 shared brands
  RandomStream rng(5);
  Dataset round2 = random_dataset(rng, 4, 5, 3);
  Dataset round1;
  round1.categories = {{1, round2.categories[0].name}, {2, round2.categories[1].name}};
  for (int i = 0; i < 100; ++i) {
    const std::int64_t id = i + 1;
    round1.images.push_back({id, "r1_" + std::to_string(id) + ".png", 16, 16});
    round1.annotations.push_back({id, id, (i < 50) ? 1 : 2, {0, 0, 4, 4}});
  }
  const Dataset merged = merge_datasets(round2, round1);
  CHECK(merged.images.size() == round2.images.size() + 100);
  CHECK(validate_dataset(merged).empty());
}

TEST_CASE("merge rejects one file name with two shapes") {
  Dataset a, b;
  a.categories = {{1, "x"}};
  a.images = {{1, "same.png", 8, 8}};
  b.categories = {{1, "x"}};
  b.images = {{1, "same.png", 16, 16}};
  CHECK_THROWS_WITH_AS(merge_datasets(a, b), doctest::Contains("same.png"), Error);
}

TEST_CASE("property: split then merge preserves the content triples") {
  for (int iter = 0; iter < 40; ++iter) {
    RandomStream rng(1000 + iter);
    const Dataset ds = random_dataset(rng);
    const int holdout = static_cast<int>(rng.uniform_int(0, 2));
    const SplitResult split = split_dataset(ds, holdout, 7 * iter + 1);
    CHECK(validate_dataset(split.train).empty());
    CHECK(validate_dataset(split.val).empty());
    CHECK(split.train.images.size() + split.val.images.size() == ds.images.size());

    const Dataset rejoined = merge_datasets(split.train, split.val);
    CHECK(validate_dataset(rejoined).empty());
    CHECK(content_triples(rejoined) == content_triples(ds));
  }
}

TEST_CASE("property: merge is associative up to id renaming") {
  for (int iter = 0; iter < 20; ++iter) {
    RandomStream rng(2000 + iter);
    Dataset a = random_dataset(rng, 2, 2, 2);
    Dataset b = random_dataset(rng, 3, 2, 2);
    Dataset c = random_dataset(rng, 2, 2, 2);
    // force distinct file names across sources
    for (auto& im : b.images) im.file_name = "b_" + im.file_name;
    for (auto& im : c.images) im.file_name = "c_" + im.file_name;
    const Dataset left = merge_datasets(merge_datasets(a, b), c);
    const Dataset right = merge_datasets(a, merge_datasets(b, c));
    CHECK(annotations_per_category_name(left) == annotations_per_category_name(right));
    CHECK(validate_dataset(left).empty());
    CHECK(validate_dataset(right).empty());
  }
}
