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

#include "logoforge/dataset_ops.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "logoforge/random.hpp"

namespace logoforge {

std::vector<std::string> validate_dataset(const Dataset& ds) {
  std::vector<std::string> out;
  auto add = [&out](std::string msg) { out.push_back(std::move(msg)); };

  std::unordered_map<std::int64_t, const ImageInfo*> images;
  for (const ImageInfo& im : ds.images) {
    if (!images.emplace(im.id, &im).second)
      add("image " + std::to_string(im.id) + ": duplicate id");
    if (im.width < 1 || im.height < 1)
      add("image " + std::to_string(im.id) + ": non-positive dimensions " +
          std::to_string(im.width) + "x" + std::to_string(im.height));
    if (im.file_name.empty())
      add("image " + std::to_string(im.id) + ": empty file_name");
  }

  std::unordered_set<std::int64_t> category_ids;
  std::unordered_set<std::string> category_names;
  for (const Category& c : ds.categories) {
    if (!category_ids.insert(c.id).second)
      add("category " + std::to_string(c.id) + ": duplicate id");
    if (c.name.empty())
      add("category " + std::to_string(c.id) + ": empty name");
    else if (!category_names.insert(c.name).second)
      add("category " + std::to_string(c.id) + ": duplicate name \"" + c.name + "\"");
  }

  std::unordered_set<std::int64_t> annotation_ids;
  for (const Annotation& a : ds.annotations) {
    const std::string tag = "annotation " + std::to_string(a.id);
    if (!annotation_ids.insert(a.id).second) add(tag + ": duplicate id");
    auto img = images.find(a.image_id);
    if (img == images.end())
      add(tag + ": references missing image " + std::to_string(a.image_id));
    if (!category_ids.count(a.category_id))
      add(tag + ": references missing category " + std::to_string(a.category_id));
    if (a.bbox.w <= 0 || a.bbox.h <= 0) {
      add(tag + ": degenerate bbox (w=" + std::to_string(a.bbox.w) +
          ", h=" + std::to_string(a.bbox.h) + ")");
    } else if (img != images.end()) {
      const ImageInfo& im = *img->second;
      if (a.bbox.x < 0 || a.bbox.y < 0 || a.bbox.right() > im.width ||
          a.bbox.bottom() > im.height)
        add(tag + ": bbox outside image " + std::to_string(im.id) + " bounds");
    }
  }
  return out;
}

SplitResult split_dataset(const Dataset& ds, int per_class_holdout, std::uint64_t seed) {
  if (per_class_holdout < 0) throw Error("split_dataset: per_class_holdout must be >= 0");

  // image id -> set of category ids present on it
  std::unordered_map<std::int64_t, std::set<std::int64_t>> cats_on_image;
  for (const Annotation& a : ds.annotations) cats_on_image[a.image_id].insert(a.category_id);

  std::vector<Category> cats = ds.categories;
  std::sort(cats.begin(), cats.end(),
            [](const Category& l, const Category& r) { return l.id < r.id; });

  std::unordered_set<std::int64_t> held_out;
  for (const Category& cat : cats) {
    // candidates in ascending image-id order so the draw is reproducible
    std::vector<std::int64_t> candidates;
    for (const ImageInfo& im : ds.images) {
      auto it = cats_on_image.find(im.id);
      if (it == cats_on_image.end() || !it->second.count(cat.id)) continue;
      if (held_out.count(im.id)) continue;
      candidates.push_back(im.id);
    }
    std::sort(candidates.begin(), candidates.end());

    if (static_cast<int>(candidates.size()) < per_class_holdout)
      throw Error("split_dataset: category \"" + cat.name + "\" (id " +
                  std::to_string(cat.id) + ") has only " +
                  std::to_string(candidates.size()) + " candidate images for holdout " +
                  std::to_string(per_class_holdout));

    RandomStream rs(derive_seed({seed, static_cast<std::uint64_t>(cat.id)}));
    // partial Fisher-Yates: the first per_class_holdout slots are the draw
    for (int i = 0; i < per_class_holdout; ++i) {
      const std::int64_t j =
          rs.uniform_int(i, static_cast<std::int64_t>(candidates.size()) - 1);
      std::swap(candidates[i], candidates[j]);
      held_out.insert(candidates[i]);
    }
  }

  SplitResult result;
  result.train.categories = ds.categories;
  result.val.categories = ds.categories;
  for (const ImageInfo& im : ds.images)
    (held_out.count(im.id) ? result.val : result.train).images.push_back(im);
  for (const Annotation& a : ds.annotations)
    (held_out.count(a.image_id) ? result.val : result.train).annotations.push_back(a);
  return result;
}

Dataset merge_datasets(const Dataset& a, const Dataset& b) {
  Dataset out;

  // same file name must describe the same content
  std::unordered_map<std::string, std::pair<int, int>> dims_by_file;
  for (const Dataset* src : {&a, &b}) {
    for (const ImageInfo& im : src->images) {
      auto [it, inserted] = dims_by_file.emplace(im.file_name,
                                                 std::make_pair(im.width, im.height));
      if (!inserted && it->second != std::make_pair(im.width, im.height))
        throw Error("merge_datasets: file \"" + im.file_name +
                    "\" appears with conflicting dimensions");
    }
  }

  // categories unified by name, new sequential ids
  std::unordered_map<std::string, std::int64_t> id_by_name;
  auto unify = [&](const std::vector<Category>& cats,
                   std::unordered_map<std::int64_t, std::int64_t>& remap) {
    for (const Category& c : cats) {
      auto it = id_by_name.find(c.name);
      if (it == id_by_name.end()) {
        const std::int64_t nid = static_cast<std::int64_t>(out.categories.size()) + 1;
        out.categories.push_back({nid, c.name});
        it = id_by_name.emplace(c.name, nid).first;
      }
      remap[c.id] = it->second;
    }
  };
  std::unordered_map<std::int64_t, std::int64_t> cat_remap_a, cat_remap_b;
  unify(a.categories, cat_remap_a);
  unify(b.categories, cat_remap_b);

  std::unordered_map<std::int64_t, std::int64_t> img_remap_a, img_remap_b;
  auto take_images = [&](const std::vector<ImageInfo>& images,
                         std::unordered_map<std::int64_t, std::int64_t>& remap) {
    for (const ImageInfo& im : images) {
      ImageInfo copy = im;
      copy.id = static_cast<std::int64_t>(out.images.size()) + 1;
      remap[im.id] = copy.id;
      out.images.push_back(std::move(copy));
    }
  };
  take_images(a.images, img_remap_a);
  take_images(b.images, img_remap_b);

  auto take_annotations = [&](const std::vector<Annotation>& anns,
                              std::unordered_map<std::int64_t, std::int64_t>& img_remap,
                              std::unordered_map<std::int64_t, std::int64_t>& cat_remap) {
    for (const Annotation& ann : anns) {
      Annotation copy = ann;
      copy.id = static_cast<std::int64_t>(out.annotations.size()) + 1;
      copy.image_id = img_remap.at(ann.image_id);
      copy.category_id = cat_remap.at(ann.category_id);
      out.annotations.push_back(copy);
    }
  };
  take_annotations(a.annotations, img_remap_a, cat_remap_a);
  take_annotations(b.annotations, img_remap_b, cat_remap_b);
  return out;
}

}  // namespace logoforge
