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

#ifndef VIMP_IMPORTANCE_HPP_
#define VIMP_IMPORTANCE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "vimp/dataset.hpp"
#include "vimp/guide_tree.hpp"

namespace vimp {

struct ImportanceOptions {
  int permutations = 300;
  uint64_t seed = 0;
  int threads = 1;  // 0 = DefaultThreads()
  TreeConfig tree;
};

struct ImportanceReport {
  std::vector<std::string> names;
  std::vector<double> raw;         // v on the real data
  std::vector<double> perm_mean;   // mean of v over response permutations
  std::vector<double> vi;          // raw / perm_mean
  std::vector<double> normalized;  // vi / v_tilde once thresholded
  std::vector<uint8_t> important;
  std::vector<double> perm_max;    // max_k v_b(X_k) for each permutation b
  int permutations = 0;
  uint64_t seed = 0;

  // Filled by ApplyThreshold.
  bool thresholded = false;
  double alpha = 0.0;
  double v_star = 0.0;
  int m = 0;
  double v_tilde = 0.0;
  bool normalized_defined = false;  // false when m == 0

  size_t size() const { return names.size(); }
};

// Sum over intermediate nodes of sqrt(n_t) times the chi-squared(1) quantile
// of each variable's p1 at that node.
std::vector<double> RawScores(const Tree& tree, size_t num_variables);

// Raw scores on the data, and on `permutations` response permutations whose
// streams are DeriveSeed(seed, b). Identical for any thread count.
ImportanceReport BiasAdjusted(const Dataset& ds, const ImportanceOptions& options);

// Flags the variables whose raw score exceeds the (1 - alpha) quantile of
// perm_max and normalizes VI so flagged variables score above one.
void ApplyThreshold(ImportanceReport& report, double alpha);

// Double-permutation estimate of the (1 - alpha) quantile of max_k VI(X_k)
// under the null. Cost is outer * (inner + 1) trees; intended for small data.
double ExactThresholdOracle(const Dataset& ds, const TreeConfig& config, double alpha,
                            int outer, int inner, uint64_t seed, int threads = 1);

}  // namespace vimp

#endif  // VIMP_IMPORTANCE_HPP_
