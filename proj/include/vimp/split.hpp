// Copyright 2026 The vimp Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef VIMP_SPLIT_HPP_
#define VIMP_SPLIT_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "vimp/dataset.hpp"

namespace vimp {

struct TreeConfig {
  int max_split_depth = 4;  // split nodes live at depths 0..max_split_depth-1
  int min_node_to_split = 8;
  int min_child = 2;

  void Validate() const;
};

enum class MissingSide : uint8_t { kLeft, kRight };

// Binary split of one predictor. Ordinal: x <= threshold goes left.
// Categorical: levels in left_levels go left, levels in right_levels go right
// and levels never seen at the node follow the larger child.
struct Split {
  int variable = -1;
  bool categorical = false;
  double threshold = 0.0;
  std::vector<int32_t> left_levels;   // sorted
  std::vector<int32_t> right_levels;  // sorted
  MissingSide missing_side = MissingSide::kRight;
  double impurity_decrease = 0.0;
  size_t n_left = 0;
  size_t n_right = 0;
  // Side standing in for the larger child. Unseen levels go this way, as do
  // missing values when the training node had none. Equal-sized categorical
  // children are resolved by the larger response maximum so the choice does
  // not depend on level ids.
  bool majority_left = true;

  bool GoesLeft(const Column& x, size_t row) const;
};

enum class MissingPolicy {
  kRouteByImpurity,  // missing rows join whichever side is better
  kExcludeMissing,   // search over non-missing rows only
};

// Impurity-optimal split of `x` over `rows`: maximizes
// sse(node) - sse(left) - sse(right) with both children >= min_child.
// Zero-gain splits are rejected.
std::optional<Split> BestSplit(const Column& x, int variable, std::span<const double> y,
                               std::span<const uint32_t> rows, const TreeConfig& config,
                               MissingPolicy policy = MissingPolicy::kRouteByImpurity);

// Row indices 0..n-1.
std::vector<uint32_t> AllRows(size_t n);

// Sum of squared deviations from the mean over `rows`.
double SumSquaredError(std::span<const double> y, std::span<const uint32_t> rows);

// Present-level count above which categorical search switches from
// exhaustive subsets to mean-ordered contiguous cuts.
inline constexpr int kMaxExhaustiveLevels = 12;

}  // namespace vimp

#endif  // VIMP_SPLIT_HPP_
