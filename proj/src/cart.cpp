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

#include "vimp/cart.hpp"

#include <algorithm>

namespace vimp {
namespace {

constexpr double kMinAdjustedAgreement = 1e-12;

double PartitionDecrease(std::span<const double> y, std::span<const uint32_t> rows,
                         const std::vector<uint8_t>& goes_left) {
  std::vector<uint32_t> left, right;
  for (size_t i = 0; i < rows.size(); ++i) (goes_left[i] ? left : right).push_back(rows[i]);
  const double decrease =
      SumSquaredError(y, rows) - SumSquaredError(y, left) - SumSquaredError(y, right);
  return std::max(0.0, decrease);
}

struct Labeled {
  uint32_t row;
  bool primary_left;
};

std::optional<SurrogateSplit> OrdinalSurrogate(const Column& x, std::vector<Labeled> rows,
                                               size_t n_left, size_t n_right) {
  std::sort(rows.begin(), rows.end(), [&](const Labeled& a, const Labeled& b) {
    return x.numeric[a.row] < x.numeric[b.row];
  });
  std::optional<SurrogateSplit> best;
  size_t prefix_left = 0, prefix_right = 0;
  for (size_t i = 0; i + 1 < rows.size(); ++i) {
    (rows[i].primary_left ? prefix_left : prefix_right) += 1;
    const double lo = x.numeric[rows[i].row];
    const double hi = x.numeric[rows[i + 1].row];
    if (!(lo < hi)) continue;
    double threshold = lo + (hi - lo) / 2.0;
    if (!(threshold < hi)) threshold = lo;
    const size_t same = prefix_left + (n_right - prefix_right);
    const size_t opposite = prefix_right + (n_left - prefix_left);
    for (const bool flipped : {false, true}) {
      const size_t agreement = flipped ? opposite : same;
      if (best && agreement <= best->agreement) continue;
      best.emplace();
      best->flipped = flipped;
      best->agreement = agreement;
      best->split.threshold = threshold;
      best->split.n_left = i + 1;
      best->split.n_right = rows.size() - (i + 1);
    }
  }
  return best;
}

std::optional<SurrogateSplit> CategoricalSurrogate(const Column& x,
                                                   const std::vector<Labeled>& rows,
                                                   size_t n_left, size_t n_right) {
  std::vector<size_t> to_left(x.levels.size(), 0), to_right(x.levels.size(), 0);
  for (const Labeled& l : rows) (l.primary_left ? to_left : to_right)[x.codes[l.row]] += 1;
  SurrogateSplit s;
  s.split.categorical = true;
  for (int32_t level = 0; level < x.num_levels(); ++level) {
    const size_t a = to_left[level], b = to_right[level];
    if (a + b == 0) continue;
    const bool left = a > b || (a == b && n_left >= n_right);
    (left ? s.split.left_levels : s.split.right_levels).push_back(level);
    (left ? s.split.n_left : s.split.n_right) += a + b;
    s.agreement += left ? a : b;
  }
  if (s.split.left_levels.empty() || s.split.right_levels.empty()) return std::nullopt;
  return s;
}

class CartGrower {
 public:
  CartGrower(const Dataset& ds, const TreeConfig& config) : ds_(ds), config_(config) {}

  CartTree Run() {
    Grow(AllRows(ds_.n_rows()), 0);
    return CartTree{std::move(nodes_)};
  }

 private:
  int Grow(std::vector<uint32_t> rows, int depth) {
    const auto y = ds_.response();
    const int index = static_cast<int>(nodes_.size());
    {
      CartNode node;
      node.depth = depth;
      double mean = 0.0;
      for (uint32_t r : rows) mean += y[r];
      node.mean_y = mean / static_cast<double>(rows.size());
      node.sse = SumSquaredError(y, rows);
      node.rows = std::move(rows);
      nodes_.push_back(std::move(node));
    }
    const auto& node_rows = nodes_[index].rows;
    if (depth >= config_.max_split_depth ||
        node_rows.size() < static_cast<size_t>(config_.min_node_to_split)) {
      return index;
    }
    std::optional<Split> best;
    for (size_t k = 0; k < ds_.n_predictors(); ++k) {
      auto split = BestSplit(ds_.predictor(k), static_cast<int>(k), y, node_rows, config_,
                             MissingPolicy::kExcludeMissing);
      if (split && (!best || split->impurity_decrease > best->impurity_decrease)) {
        best = std::move(split);
      }
    }
    if (!best) return index;
    best->missing_side = best->majority_left ? MissingSide::kLeft : MissingSide::kRight;
    nodes_[index].surrogates = FindSurrogates(ds_, node_rows, *best);
    nodes_[index].split = std::move(best);

    std::vector<uint32_t> left_rows, right_rows;
    for (uint32_t r : nodes_[index].rows) {
      (CartGoesLeft(nodes_[index], ds_, r) ? left_rows : right_rows).push_back(r);
    }
    const int left = Grow(std::move(left_rows), depth + 1);
    const int right = Grow(std::move(right_rows), depth + 1);
    nodes_[index].left = left;
    nodes_[index].right = right;
    return index;
  }

  const Dataset& ds_;
  const TreeConfig& config_;
  std::vector<CartNode> nodes_;
};

}  // namespace

bool CartGoesLeft(const CartNode& node, const Dataset& ds, size_t row) {
  const Split& split = *node.split;
  const Column& x = ds.predictor(split.variable);
  if (!x.is_missing(row)) return split.GoesLeft(x, row);
  for (const SurrogateSplit& s : node.surrogates) {
    const Column& sx = ds.predictor(s.variable);
    if (!sx.is_missing(row)) return s.GoesLeft(sx, row);
  }
  return split.majority_left;
}

double CartTree::Predict(const Dataset& ds, size_t row) const {
  const CartNode* node = &nodes.front();
  while (node->is_intermediate()) {
    node = &nodes[CartGoesLeft(*node, ds, row) ? node->left : node->right];
  }
  return node->mean_y;
}

CartTree GrowCart(const Dataset& ds, const TreeConfig& config) {
  config.Validate();
  return CartGrower(ds, config).Run();
}

std::vector<SurrogateSplit> FindSurrogates(const Dataset& ds, std::span<const uint32_t> rows,
                                           const Split& primary) {
  const Column& px = ds.predictor(primary.variable);
  const auto y = ds.response();
  std::vector<SurrogateSplit> out;
  for (size_t j = 0; j < ds.n_predictors(); ++j) {
    if (static_cast<int>(j) == primary.variable) continue;
    const Column& x = ds.predictor(j);
    std::vector<Labeled> labeled;
    size_t n_left = 0, n_right = 0;
    for (uint32_t r : rows) {
      if (px.is_missing(r) || x.is_missing(r)) continue;
      const bool left = primary.GoesLeft(px, r);
      labeled.push_back({r, left});
      (left ? n_left : n_right) += 1;
    }
    if (n_left == 0 || n_right == 0) continue;
    auto s = x.is_categorical() ? CategoricalSurrogate(x, labeled, n_left, n_right)
                                : OrdinalSurrogate(x, labeled, n_left, n_right);
    if (!s) continue;
    s->variable = static_cast<int>(j);
    s->split.variable = static_cast<int>(j);
    s->split.majority_left = s->split.n_left >= s->split.n_right;
    const double larger = static_cast<double>(std::max(n_left, n_right));
    const double smaller = static_cast<double>(std::min(n_left, n_right));
    s->adjusted_agreement = (static_cast<double>(s->agreement) - larger) / smaller;
    if (!(s->adjusted_agreement > kMinAdjustedAgreement)) continue;

    std::vector<uint32_t> usable;
    std::vector<uint8_t> goes_left;
    for (uint32_t r : rows) {
      if (x.is_missing(r)) continue;
      usable.push_back(r);
      goes_left.push_back(s->split.GoesLeft(x, r));
    }
    s->impurity_decrease = PartitionDecrease(y, usable, goes_left);
    out.push_back(std::move(*s));
  }
  std::stable_sort(out.begin(), out.end(), [](const SurrogateSplit& a, const SurrogateSplit& b) {
    return a.adjusted_agreement > b.adjusted_agreement;
  });
  return out;
}

std::vector<double> RpartImportance(const CartTree& tree, size_t num_variables) {
  std::vector<double> score(num_variables, 0.0);
  for (const CartNode& node : tree.nodes) {
    if (!node.is_intermediate()) continue;
    score[node.split->variable] += node.split->impurity_decrease;
    for (const SurrogateSplit& s : node.surrogates) {
      score[s.variable] += s.adjusted_agreement * s.impurity_decrease;
    }
  }
  return score;
}

}  // namespace vimp
