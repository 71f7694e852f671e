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

#include "vimp/split.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "vimp/error.hpp"

namespace vimp {
namespace {

struct Side {
  double sum = 0.0;
  size_t n = 0;
};

class GainTracker {
 public:
  GainTracker(double total_sum, size_t total_n, int min_child)
      : total_sum_(total_sum), total_n_(total_n), min_child_(min_child),
        base_(total_sum * total_sum / static_cast<double>(total_n)) {}

  bool Valid(const Side& left) const {
    return left.n >= static_cast<size_t>(min_child_) &&
           total_n_ - left.n >= static_cast<size_t>(min_child_);
  }

  double Gain(const Side& left) const {
    const double right_sum = total_sum_ - left.sum;
    const double n_right = static_cast<double>(total_n_ - left.n);
    return left.sum * left.sum / static_cast<double>(left.n) +
           right_sum * right_sum / n_right - base_;
  }

 private:
  double total_sum_;
  size_t total_n_;
  int min_child_;
  double base_;
};

std::optional<Split> SearchOrdinal(const Column& x, std::span<const double> centered,
                                   std::span<const uint32_t> rows, const GainTracker& tracker) {
  std::vector<std::pair<double, double>> present;  // (x, centered y)
  present.reserve(rows.size());
  Side missing;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (x.is_missing(rows[i])) {
      missing.sum += centered[i];
      ++missing.n;
    } else {
      present.emplace_back(x.numeric[rows[i]], centered[i]);
    }
  }
  if (present.empty()) return std::nullopt;
  std::sort(present.begin(), present.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::optional<Split> best;
  double best_gain = 0.0;
  const auto consider = [&](const Side& left, double threshold, MissingSide side) {
    if (!tracker.Valid(left)) return;
    const double gain = tracker.Gain(left);
    if (best && !(gain > best_gain)) return;
    best_gain = gain;
    best.emplace();
    best->threshold = threshold;
    best->n_left = left.n;
    best->n_right = rows.size() - left.n;
    best->missing_side = side;
    best->impurity_decrease = gain;
  };

  Side prefix;
  for (size_t i = 0; i + 1 < present.size(); ++i) {
    prefix.sum += present[i].second;
    ++prefix.n;
    const double lo = present[i].first;
    const double hi = present[i + 1].first;
    if (!(lo < hi)) continue;
    double threshold = lo + (hi - lo) / 2.0;
    if (!(threshold < hi)) threshold = lo;
    consider(prefix, threshold, MissingSide::kRight);
    if (missing.n > 0) {
      consider({prefix.sum + missing.sum, prefix.n + missing.n}, threshold, MissingSide::kLeft);
    }
  }
  if (missing.n > 0) {
    // Every present value left, every missing value right.
    Side all_present{0.0, present.size()};
    for (const auto& p : present) all_present.sum += p.second;
    consider(all_present, present.back().first, MissingSide::kRight);
  }
  return best;
}

bool LexLess(const std::vector<int32_t>& a, const std::vector<int32_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::optional<Split> SearchCategorical(const Column& x, std::span<const double> centered,
                                       std::span<const uint32_t> rows,
                                       const GainTracker& tracker) {
  const int32_t missing_id = x.num_levels();
  std::vector<Side> by_level(static_cast<size_t>(missing_id) + 1);
  for (size_t i = 0; i < rows.size(); ++i) {
    const int32_t id = x.is_missing(rows[i]) ? missing_id : x.codes[rows[i]];
    by_level[id].sum += centered[i];
    ++by_level[id].n;
  }
  std::vector<int32_t> present;
  for (int32_t id = 0; id <= missing_id; ++id) {
    if (by_level[id].n > 0) present.push_back(id);
  }
  const size_t p = present.size();
  if (p < 2) return std::nullopt;

  std::optional<std::vector<int32_t>> best_left;
  double best_gain = 0.0;
  Side best_side;
  const auto consider = [&](std::vector<int32_t> left_ids) {
    // Canonical orientation: the smallest present id is on the left.
    std::sort(left_ids.begin(), left_ids.end());
    if (left_ids.front() != present.front()) {
      std::vector<int32_t> complement;
      std::set_difference(present.begin(), present.end(), left_ids.begin(), left_ids.end(),
                          std::back_inserter(complement));
      left_ids = std::move(complement);
    }
    Side left;
    for (int32_t id : left_ids) {
      left.sum += by_level[id].sum;
      left.n += by_level[id].n;
    }
    if (!tracker.Valid(left)) return;
    const double gain = tracker.Gain(left);
    if (best_left) {
      if (gain < best_gain) return;
      if (gain == best_gain && !LexLess(left_ids, *best_left)) return;
    }
    best_gain = gain;
    best_left = std::move(left_ids);
    best_side = left;
  };

  if (p <= static_cast<size_t>(kMaxExhaustiveLevels)) {
    const uint32_t masks = 1u << (p - 1);
    for (uint32_t mask = 0; mask + 1 < masks; ++mask) {
      std::vector<int32_t> left{present[0]};
      for (size_t b = 0; b + 1 < p; ++b) {
        if (mask & (1u << b)) left.push_back(present[b + 1]);
      }
      consider(std::move(left));
    }
  } else {
    std::vector<int32_t> order = present;
    std::sort(order.begin(), order.end(), [&](int32_t a, int32_t b) {
      const double ma = by_level[a].sum / static_cast<double>(by_level[a].n);
      const double mb = by_level[b].sum / static_cast<double>(by_level[b].n);
      return ma < mb || (ma == mb && a < b);
    });
    for (size_t cut = 1; cut < p; ++cut) {
      consider(std::vector<int32_t>(order.begin(), order.begin() + cut));
    }
  }
  if (!best_left) return std::nullopt;

  Split split;
  split.categorical = true;
  split.impurity_decrease = best_gain;
  split.n_left = best_side.n;
  split.n_right = rows.size() - best_side.n;
  for (int32_t id : present) {
    const bool left = std::binary_search(best_left->begin(), best_left->end(), id);
    if (id == missing_id) {
      split.missing_side = left ? MissingSide::kLeft : MissingSide::kRight;
    } else {
      (left ? split.left_levels : split.right_levels).push_back(id);
    }
  }
  return split;
}

}  // namespace

void TreeConfig::Validate() const {
  if (max_split_depth < 0) Fail(ErrorCode::kInvalidArgument, "max_split_depth must be >= 0");
  if (min_child < 1) Fail(ErrorCode::kInvalidArgument, "min_child must be >= 1");
  if (min_node_to_split < 2 * min_child) {
    Fail(ErrorCode::kInvalidArgument, "min_node_to_split must be >= 2 * min_child");
  }
}

bool Split::GoesLeft(const Column& x, size_t row) const {
  if (x.is_missing(row)) return missing_side == MissingSide::kLeft;
  if (!categorical) return x.numeric[row] <= threshold;
  const int32_t code = x.codes[row];
  if (std::binary_search(left_levels.begin(), left_levels.end(), code)) return true;
  if (std::binary_search(right_levels.begin(), right_levels.end(), code)) return false;
  return majority_left;
}

std::vector<uint32_t> AllRows(size_t n) {
  std::vector<uint32_t> rows(n);
  std::iota(rows.begin(), rows.end(), 0u);
  return rows;
}

double SumSquaredError(std::span<const double> y, std::span<const uint32_t> rows) {
  if (rows.empty()) return 0.0;
  double mean = 0.0;
  for (uint32_t r : rows) mean += y[r];
  mean /= static_cast<double>(rows.size());
  double sse = 0.0;
  for (uint32_t r : rows) sse += (y[r] - mean) * (y[r] - mean);
  return sse;
}

std::optional<Split> BestSplit(const Column& x, int variable, std::span<const double> y,
                               std::span<const uint32_t> rows, const TreeConfig& config,
                               MissingPolicy policy) {
  std::vector<uint32_t> active;
  if (policy == MissingPolicy::kExcludeMissing) {
    for (uint32_t r : rows) {
      if (!x.is_missing(r)) active.push_back(r);
    }
    rows = active;
  }
  if (rows.size() < 2 * static_cast<size_t>(config.min_child) || rows.size() < 2) {
    return std::nullopt;
  }
  const double first = y[rows[0]];
  if (std::all_of(rows.begin(), rows.end(), [&](uint32_t r) { return y[r] == first; })) {
    return std::nullopt;
  }
  double mean = 0.0;
  for (uint32_t r : rows) mean += y[r];
  mean /= static_cast<double>(rows.size());
  std::vector<double> centered(rows.size());
  double total = 0.0;
  double sse = 0.0;
  for (size_t i = 0; i < rows.size(); ++i) {
    centered[i] = y[rows[i]] - mean;
    total += centered[i];
    sse += centered[i] * centered[i];
  }
  const GainTracker tracker(total, rows.size(), config.min_child);
  std::optional<Split> best = x.is_categorical()
                                  ? SearchCategorical(x, centered, rows, tracker)
                                  : SearchOrdinal(x, centered, rows, tracker);
  if (!best || !(best->impurity_decrease > 1e-12 * sse)) return std::nullopt;
  best->variable = variable;

  bool any_missing = false;
  for (uint32_t r : rows) any_missing = any_missing || x.is_missing(r);
  if (best->n_left != best->n_right || !best->categorical) {
    best->majority_left = best->n_left >= best->n_right;
  } else {
    double max_left = -std::numeric_limits<double>::infinity();
    double max_right = max_left;
    for (uint32_t r : rows) {
      double& m = best->GoesLeft(x, r) ? max_left : max_right;
      m = std::max(m, y[r]);
    }
    best->majority_left = max_left >= max_right;
  }
  if (!any_missing) {
    best->missing_side = best->majority_left ? MissingSide::kLeft : MissingSide::kRight;
  }
  return best;
}

}  // namespace vimp
