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

#ifndef LOGOFORGE_DATASET_OPS_HPP
#define LOGOFORGE_DATASET_OPS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "logoforge/types.hpp"

namespace logoforge {

/// Checks every Dataset invariant: unique ids, resolvable references,
/// positive box sizes, boxes inside their image. Returns one human-readable
/// line per violation; empty means the dataset is valid.
std::vector<std::string> validate_dataset(const Dataset& ds);

struct SplitResult {
  Dataset train;
  Dataset val;
};

/// Holds out `per_class_holdout` images for every category, seeded and
/// uniform without replacement. Categories are processed in ascending id
/// order; an image grabbed for one category is never re-drawn for another.
/// Throws Error naming the category when too few candidates remain.
SplitResult split_dataset(const Dataset& ds, int per_class_holdout, std::uint64_t seed);

/// Concatenates two datasets. Categories are unified by name (ids differ
/// across rounds; names are the stable key); image and annotation ids are
/// reassigned sequentially. Throws Error when the same file name appears
/// with conflicting stored dimensions.
Dataset merge_datasets(const Dataset& a, const Dataset& b);

}  // namespace logoforge

#endif  // LOGOFORGE_DATASET_OPS_HPP
