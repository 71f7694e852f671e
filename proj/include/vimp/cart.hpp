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

// Greedy CART-style regression tree with surrogate splits and the rpart
// importance measure. Used as the biased comparator in bias audits.

#ifndef VIMP_CART_HPP_
#define VIMP_CART_HPP_

#include <optional>
#include <span>
#include <vector>

#include "vimp/dataset.hpp"
#include "vimp/split.hpp"

namespace vimp {

struct SurrogateSplit {
  int variable = -1;
  Split split;
  // When set, the surrogate's left side stands in for the primary's right.
  bool flipped = false;
  size_t agreement = 0;          // rows sent the same way as the primary
  double adjusted_agreement = 0.0;
  double impurity_decrease = 0.0;  // of the surrogate used as a split

  bool GoesLeft(const Column& x, size_t row) const {
    return split.GoesLeft(x, row) != flipped;
  }
};

struct CartNode {
  int depth = 0;
  std::vector<uint32_t> rows;
  double mean_y = 0.0;
  double sse = 0.0;
  std::optional<Split> split;
  std::vector<SurrogateSplit> surrogates;  // descending adjusted agreement
  int left = -1;
  int right = -1;

  size_t n() const { return rows.size(); }
  bool is_intermediate() const { return split.has_value(); }
};

struct CartTree {
  std::vector<CartNode> nodes;  // nodes[0] is the root

  double Predict(const Dataset& ds, size_t row) const;
};

// Routes a row at a split node: primary variable, then surrogates in order,
// then the larger child.
bool CartGoesLeft(const CartNode& node, const Dataset& ds, size_t row);

CartTree GrowCart(const Dataset& ds, const TreeConfig& config);

// Best surrogate per other variable, over rows non-missing in both the
// primary and the candidate; keeps those with positive adjusted agreement.
std::vector<SurrogateSplit> FindSurrogates(const Dataset& ds, std::span<const uint32_t> rows,
                                           const Split& primary);

std::vector<double> RpartImportance(const CartTree& tree, size_t num_variables);

}  // namespace vimp

#endif  // VIMP_CART_HPP_
