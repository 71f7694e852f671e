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

// Four-level unpruned regression tree whose split variables are chosen by
// chi-squared tests of residual signs, with conditional pairwise interaction
// tests when no single variable is significant.

#ifndef VIMP_GUIDE_TREE_HPP_
#define VIMP_GUIDE_TREE_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vimp/dataset.hpp"
#include "vimp/split.hpp"
#include "vimp/stats.hpp"

namespace vimp {

struct PairTest {
  int j = 0;
  int k = 0;
  stats::TestResult result;
};

struct NodeTests {
  // Per-variable curvature test; entries of an accepted interaction pair are
  // overwritten with the pair's test.
  std::vector<stats::TestResult> p1;
  std::optional<PairTest> p2_best;
  bool interaction_triggered = false;
};

struct Node {
  int depth = 0;
  std::vector<uint32_t> rows;
  double mean_y = 0.0;
  double sse = 0.0;
  std::optional<NodeTests> tests;  // intermediate nodes only
  std::optional<Split> split;
  int left = -1;
  int right = -1;

  size_t n() const { return rows.size(); }
  bool is_intermediate() const { return split.has_value(); }
};

class Tree {
 public:
  explicit Tree(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

  const Node& root() const { return nodes_.front(); }
  const std::vector<Node>& nodes() const { return nodes_; }
  size_t num_intermediate() const;

  // Leaf mean reached by `row` of `ds`, whose columns match the training data.
  double Predict(const Dataset& ds, size_t row) const;

  // Debug dump: one line per node (id, depth, n, split, smallest p1).
  std::string Dump(const Dataset& ds) const;

 private:
  std::vector<Node> nodes_;
};

// Residual-sign classes for the rows of a node: 0 where y - mean > 0
// (class Z = 1), 1 otherwise (class Z = 2). Aligned with `rows`.
std::vector<uint8_t> ResidualClasses(std::span<const double> y,
                                     std::span<const uint32_t> rows);

// Number of quantile groups used for an ordinal predictor at a node of size n.
inline int CurvatureGroups(size_t node_size) { return node_size < 60 ? 3 : 4; }

// 2 x C table of residual class against the node-local categories of x, with
// one extra column for missing values when any are present.
stats::ContingencyTable CurvatureTable(const Column& x, std::span<const uint8_t> z,
                                       std::span<const uint32_t> rows);

// Pairwise interaction tests, run only when no curvature test is significant
// at the first Bonferroni level. Updates `tests` in place.
void InteractionScan(const Dataset& ds, std::span<const uint8_t> z,
                     std::span<const uint32_t> rows, NodeTests& tests);

// Smallest variable index attaining the minimum p1.
int SelectVariable(const NodeTests& tests);

// All tests at a node: curvature tests followed by the interaction scan.
NodeTests ComputeNodeTests(const Dataset& ds, std::span<const uint32_t> rows);

Tree GrowTree(const Dataset& ds, const TreeConfig& config);
// Grows on the given root rows; duplicates (bootstrap draws) are allowed.
Tree GrowTree(const Dataset& ds, const TreeConfig& config, std::vector<uint32_t> root_rows);

}  // namespace vimp

#endif  // VIMP_GUIDE_TREE_HPP_
