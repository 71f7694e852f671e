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

#include "vimp/guide_tree.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vimp/error.hpp"

namespace vimp {
namespace {

// Three-level coding of a predictor for the interaction tests. Ordinal
// values are cut at the 1/3 and 2/3 quantiles, or at the median with missing
// values as the third category when the node has any. Categorical values
// keep their level, with missing as one extra level.
struct Coded {
  std::vector<int> codes;
  int categories = 0;
};

Coded InteractionCodes(const Column& x, std::span<const uint32_t> rows) {
  Coded out;
  out.codes.resize(rows.size());
  if (x.is_categorical()) {
    out.categories = x.num_levels() + 1;
    for (size_t i = 0; i < rows.size(); ++i) {
      out.codes[i] = x.is_missing(rows[i]) ? x.num_levels() : x.codes[rows[i]];
    }
    return out;
  }
  out.categories = 3;
  std::vector<double> values(rows.size());
  std::vector<uint8_t> missing(rows.size());
  size_t n_missing = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    values[i] = x.numeric[rows[i]];
    missing[i] = x.missing[rows[i]];
    n_missing += missing[i];
  }
  if (n_missing == rows.size()) {
    std::fill(out.codes.begin(), out.codes.end(), 2);
    return out;
  }
  const auto bins = stats::QuantileBins(values, missing, n_missing > 0 ? 2 : 3);
  for (size_t i = 0; i < rows.size(); ++i) {
    out.codes[i] = missing[i] ? 2 : bins[i] - 1;
  }
  return out;
}

bool ResponseConstant(std::span<const double> y, std::span<const uint32_t> rows) {
  const double first = y[rows.front()];
  return std::all_of(rows.begin(), rows.end(), [&](uint32_t r) { return y[r] == first; });
}

class Grower {
 public:
  Grower(const Dataset& ds, const TreeConfig& config) : ds_(ds), config_(config) {}

  std::vector<Node> Run(std::vector<uint32_t> rows) {
    Grow(std::move(rows), 0);
    return std::move(nodes_);
  }

 private:
  int Grow(std::vector<uint32_t> rows, int depth) {
    const auto y = ds_.response();
    const int index = static_cast<int>(nodes_.size());
    {
      Node node;
      node.depth = depth;
      double mean = 0.0;
      for (uint32_t r : rows) mean += y[r];
      mean /= static_cast<double>(rows.size());
      node.mean_y = mean;
      node.sse = SumSquaredError(y, rows);
      node.rows = std::move(rows);
      nodes_.push_back(std::move(node));
    }
    const std::vector<uint32_t>& node_rows = nodes_[index].rows;
    if (depth >= config_.max_split_depth ||
        node_rows.size() < static_cast<size_t>(config_.min_node_to_split) ||
        ds_.n_predictors() == 0 || ResponseConstant(y, node_rows)) {
      return index;
    }
    NodeTests tests = ComputeNodeTests(ds_, node_rows);
    const int k = SelectVariable(tests);
    auto split = BestSplit(ds_.predictor(k), k, y, node_rows, config_);
    if (!split) return index;

    std::vector<uint32_t> left_rows, right_rows;
    const Column& x = ds_.predictor(k);
    for (uint32_t r : node_rows) {
      (split->GoesLeft(x, r) ? left_rows : right_rows).push_back(r);
    }
    nodes_[index].tests = std::move(tests);
    nodes_[index].split = std::move(split);
    const int left = Grow(std::move(left_rows), depth + 1);
    const int right = Grow(std::move(right_rows), depth + 1);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  const Dataset& ds_;
  const TreeConfig& config_;
  std::vector<Node> nodes_;
};

}  // namespace

std::vector<uint8_t> ResidualClasses(std::span<const double> y,
                                     std::span<const uint32_t> rows) {
  double mean = 0.0;
  for (uint32_t r : rows) mean += y[r];
  mean /= static_cast<double>(rows.size());
  std::vector<uint8_t> z(rows.size());
  for (size_t i = 0; i < rows.size(); ++i) z[i] = y[rows[i]] - mean > 0.0 ? 0 : 1;
  return z;
}

stats::ContingencyTable CurvatureTable(const Column& x, std::span<const uint8_t> z,
                                       std::span<const uint32_t> rows) {
  bool any_missing = false;
  for (uint32_t r : rows) any_missing = any_missing || x.is_missing(r);

  if (x.is_categorical()) {
    const int missing_col = x.num_levels();
    stats::ContingencyTable table(2, x.num_levels() + (any_missing ? 1 : 0));
    for (size_t i = 0; i < rows.size(); ++i) {
      const int col = x.is_missing(rows[i]) ? missing_col : x.codes[rows[i]];
      ++table.at(z[i], col);
    }
    return table;
  }

  std::vector<double> values(rows.size());
  std::vector<uint8_t> missing(rows.size());
  size_t n_missing = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    values[i] = x.numeric[rows[i]];
    missing[i] = x.missing[rows[i]];
    n_missing += missing[i];
  }
  if (n_missing == rows.size()) {
    stats::ContingencyTable table(2, 1);
    for (size_t i = 0; i < rows.size(); ++i) ++table.at(z[i], 0);
    return table;
  }
  const int groups = CurvatureGroups(rows.size());
  const auto bins = stats::QuantileBins(values, missing, groups);
  stats::ContingencyTable table(2, groups + (any_missing ? 1 : 0));
  for (size_t i = 0; i < rows.size(); ++i) {
    ++table.at(z[i], missing[i] ? groups : bins[i] - 1);
  }
  return table;
}

void InteractionScan(const Dataset& ds, std::span<const uint8_t> z,
                     std::span<const uint32_t> rows, NodeTests& tests) {
  const int k_vars = static_cast<int>(tests.p1.size());
  if (k_vars < 2) return;
  double min_p = 1.0;
  for (const auto& t : tests.p1) min_p = std::min(min_p, t.p_value);
  if (min_p < 0.10 / k_vars) return;
  tests.interaction_triggered = true;

  std::vector<Coded> coded;
  coded.reserve(k_vars);
  for (int k = 0; k < k_vars; ++k) coded.push_back(InteractionCodes(ds.predictor(k), rows));

  std::optional<PairTest> best;
  for (int j = 0; j < k_vars; ++j) {
    for (int k = j + 1; k < k_vars; ++k) {
      const int width = coded[k].categories;
      stats::ContingencyTable table(2, coded[j].categories * width);
      for (size_t i = 0; i < rows.size(); ++i) {
        ++table.at(z[i], coded[j].codes[i] * width + coded[k].codes[i]);
      }
      const auto result = stats::ChisqTest(table);
      if (!best || result.log_p < best->result.log_p) best = PairTest{j, k, result};
    }
  }
  tests.p2_best = best;
  const double pair_threshold = 0.20 / (static_cast<double>(k_vars) * (k_vars - 1));
  if (best->result.p_value < pair_threshold) {
    tests.p1[best->j] = best->result;
    tests.p1[best->k] = best->result;
  }
}

int SelectVariable(const NodeTests& tests) {
  if (tests.p1.empty()) Fail(ErrorCode::kInvalidArgument, "no variables to select from");
  int best = 0;
  for (int k = 1; k < static_cast<int>(tests.p1.size()); ++k) {
    if (tests.p1[k].log_p < tests.p1[best].log_p) best = k;
  }
  return best;
}

NodeTests ComputeNodeTests(const Dataset& ds, std::span<const uint32_t> rows) {
  const auto z = ResidualClasses(ds.response(), rows);
  NodeTests tests;
  tests.p1.reserve(ds.n_predictors());
  for (size_t k = 0; k < ds.n_predictors(); ++k) {
    tests.p1.push_back(stats::ChisqTest(CurvatureTable(ds.predictor(k), z, rows)));
  }
  InteractionScan(ds, z, rows, tests);
  return tests;
}

Tree GrowTree(const Dataset& ds, const TreeConfig& config) {
  return GrowTree(ds, config, AllRows(ds.n_rows()));
}

Tree GrowTree(const Dataset& ds, const TreeConfig& config, std::vector<uint32_t> root_rows) {
  config.Validate();
  if (root_rows.empty()) Fail(ErrorCode::kInvalidArgument, "cannot grow a tree on zero rows");
  return Tree(Grower(ds, config).Run(std::move(root_rows)));
}

size_t Tree::num_intermediate() const {
  return static_cast<size_t>(std::count_if(nodes_.begin(), nodes_.end(),
                                           [](const Node& n) { return n.is_intermediate(); }));
}

double Tree::Predict(const Dataset& ds, size_t row) const {
  const Node* node = &nodes_.front();
  while (node->is_intermediate()) {
    const Split& split = *node->split;
    node = &nodes_[split.GoesLeft(ds.predictor(split.variable), row) ? node->left
                                                                       : node->right];
  }
  return node->mean_y;
}

std::string Tree::Dump(const Dataset& ds) const {
  std::ostringstream out;
  for (size_t id = 0; id < nodes_.size(); ++id) {
    const Node& node = nodes_[id];
    out << "node " << id << " depth " << node.depth << " n " << node.n() << " mean "
        << node.mean_y;
    if (!node.is_intermediate()) {
      out << " leaf\n";
      continue;
    }
    const Split& s = *node.split;
    const Column& x = ds.predictor(s.variable);
    out << " split " << x.name;
    if (s.categorical) {
      out << " in {";
      for (size_t i = 0; i < s.left_levels.size(); ++i) {
        out << (i ? "," : "") << x.levels[s.left_levels[i]];
      }
      out << "}";
    } else {
      out << " <= " << s.threshold;
    }
    out << " missing " << (s.missing_side == MissingSide::kLeft ? "left" : "right")
        << " gain " << s.impurity_decrease;
    const auto& p1 = node.tests->p1;
    const auto min_p = std::min_element(p1.begin(), p1.end(), [](const auto& a, const auto& b) {
      return a.log_p < b.log_p;
    });
    out << " min_p1 " << min_p->p_value
        << (node.tests->interaction_triggered ? " interaction" : "") << " -> " << node.left
        << "," << node.right << "\n";
  }
  return out.str();
}

}  // namespace vimp
