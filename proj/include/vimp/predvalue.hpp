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

#ifndef VIMP_PREDVALUE_HPP_
#define VIMP_PREDVALUE_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vimp/dataset.hpp"
#include "vimp/guide_tree.hpp"

namespace vimp {

struct ForestConfig {
  int n_trees = 100;
  bool bootstrap = true;
  int max_depth = 6;
  int min_node_to_split = 8;
  int min_child = 2;
  uint64_t seed = 0;

  TreeConfig tree() const { return {max_depth, min_node_to_split, min_child}; }
};

// Bagged GUIDE trees; prediction is the mean of the reached leaf means.
class Forest {
 public:
  explicit Forest(std::vector<Tree> trees) : trees_(std::move(trees)) {}

  double Predict(const Dataset& ds, size_t row) const;
  const std::vector<Tree>& trees() const { return trees_; }

 private:
  std::vector<Tree> trees_;
};

Forest FitForest(const Dataset& ds, const ForestConfig& config);
Forest FitForest(const Dataset& ds, const ForestConfig& config,
                 std::span<const uint32_t> training_rows);

struct CvScheme {
  enum class Kind { kLeaveOneOut, kKFold };
  Kind kind = Kind::kKFold;
  int folds = 10;

  // "loo" or "kfold:<k>".
  static CvScheme Parse(const std::string& text);
  std::string Describe() const;
};

enum class Scope { kNone, kOnly, kAllBut, kAll };

// Held-out mean squared error of the model family: constant (kNone), X_j
// alone (kOnly), all but X_j (kAllBut) or all predictors (kAll). Folds are
// drawn from config.seed and shared by every scope.
double CvError(const Dataset& ds, Scope scope, size_t j, const ForestConfig& config,
               const CvScheme& cv, int threads = 1);

struct PredValueReport {
  std::vector<std::string> names;
  double s0 = 0.0;
  double s_all = 0.0;
  std::vector<double> s_only;    // S_j
  std::vector<double> s_without; // S_{-j}
  std::vector<double> mpv;       // S_0 - S_j
  std::vector<double> cpv;       // S_{-j} - S
  std::string scheme;
  uint64_t seed = 0;
};

PredValueReport MpvCpv(const Dataset& ds, const ForestConfig& config, const CvScheme& cv,
                       int threads = 1);

// Pearson correlations of the scores with MPV and with CPV.
std::pair<double, double> ScoreConsistency(std::span<const double> scores,
                                           const PredValueReport& report);

}  // namespace vimp

#endif  // VIMP_PREDVALUE_HPP_
