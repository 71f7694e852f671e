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

#include "vimp/predvalue.hpp"

#include <charconv>

#include "vimp/error.hpp"
#include "vimp/parallel.hpp"
#include "vimp/rng.hpp"
#include "vimp/stats.hpp"

namespace vimp {
namespace {

// Fold id per row from a seeded shuffle; fold f holds shuffled positions
// congruent to f modulo the fold count.
std::vector<int> AssignFolds(size_t n, const CvScheme& cv, uint64_t seed) {
  std::vector<int> fold(n);
  if (cv.kind == CvScheme::Kind::kLeaveOneOut) {
    for (size_t i = 0; i < n; ++i) fold[i] = static_cast<int>(i);
    return fold;
  }
  std::vector<uint32_t> order = AllRows(n);
  Stream stream(DeriveSeed(seed, 0xf01d));
  for (size_t i = n; i > 1; --i) std::swap(order[i - 1], order[stream.Below(i)]);
  for (size_t pos = 0; pos < n; ++pos) fold[order[pos]] = static_cast<int>(pos % cv.folds);
  return fold;
}

Dataset ScopedDataset(const Dataset& ds, Scope scope, size_t j) {
  std::vector<size_t> keep;
  for (size_t k = 0; k < ds.n_predictors(); ++k) {
    const bool include = scope == Scope::kAll || (scope == Scope::kOnly && k == j) ||
                         (scope == Scope::kAllBut && k != j);
    if (include) keep.push_back(k);
  }
  return ds.SelectPredictors(keep);
}

}  // namespace

double Forest::Predict(const Dataset& ds, size_t row) const {
  double sum = 0.0;
  for (const Tree& tree : trees_) sum += tree.Predict(ds, row);
  return sum / static_cast<double>(trees_.size());
}

Forest FitForest(const Dataset& ds, const ForestConfig& config) {
  const auto rows = AllRows(ds.n_rows());
  return FitForest(ds, config, rows);
}

Forest FitForest(const Dataset& ds, const ForestConfig& config,
                 std::span<const uint32_t> training_rows) {
  if (config.n_trees < 1) Fail(ErrorCode::kInvalidArgument, "forest needs at least one tree");
  if (training_rows.empty()) Fail(ErrorCode::kInvalidArgument, "forest needs training rows");
  const TreeConfig tree_config = config.tree();
  std::vector<Tree> trees;
  trees.reserve(config.n_trees);
  for (int t = 0; t < config.n_trees; ++t) {
    std::vector<uint32_t> rows(training_rows.begin(), training_rows.end());
    if (config.bootstrap) {
      Stream stream(DeriveSeed(config.seed, static_cast<uint64_t>(t)));
      for (auto& r : rows) r = training_rows[stream.Below(training_rows.size())];
    }
    trees.push_back(GrowTree(ds, tree_config, std::move(rows)));
  }
  return Forest(std::move(trees));
}

CvScheme CvScheme::Parse(const std::string& text) {
  CvScheme cv;
  if (text == "loo") {
    cv.kind = Kind::kLeaveOneOut;
    return cv;
  }
  const std::string prefix = "kfold:";
  if (text.rfind(prefix, 0) == 0) {
    int k = 0;
    const char* begin = text.data() + prefix.size();
    const char* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, k);
    if (ec == std::errc() && ptr == end && k >= 2) {
      cv.kind = Kind::kKFold;
      cv.folds = k;
      return cv;
    }
  }
  Fail(ErrorCode::kInvalidArgument, "cv scheme must be 'loo' or 'kfold:<k>' with k >= 2");
}

std::string CvScheme::Describe() const {
  return kind == Kind::kLeaveOneOut ? "loo" : "kfold:" + std::to_string(folds);
}

double CvError(const Dataset& ds, Scope scope, size_t j, const ForestConfig& config,
               const CvScheme& cv, int threads) {
  const size_t n = ds.n_rows();
  if (n < 2) Fail(ErrorCode::kInvalidArgument, "cross-validation needs at least two rows");
  if (cv.kind == CvScheme::Kind::kKFold && cv.folds < 2) {
    Fail(ErrorCode::kInvalidArgument, "k-fold needs k >= 2");
  }
  const Dataset scoped = ScopedDataset(ds, scope, j);
  const auto fold = AssignFolds(n, cv, config.seed);
  const size_t n_folds =
      cv.kind == CvScheme::Kind::kLeaveOneOut ? n : static_cast<size_t>(cv.folds);
  const auto y = ds.response();

  std::vector<double> fold_sse(n_folds, 0.0);
  ParallelFor(n_folds, threads, [&](size_t f) {
    std::vector<uint32_t> train, test;
    for (size_t i = 0; i < n; ++i) {
      (fold[i] == static_cast<int>(f) ? test : train).push_back(static_cast<uint32_t>(i));
    }
    if (test.empty() || train.empty()) return;
    double sse = 0.0;
    if (scope == Scope::kNone) {
      double mean = 0.0;
      for (uint32_t r : train) mean += y[r];
      mean /= static_cast<double>(train.size());
      for (uint32_t r : test) sse += (y[r] - mean) * (y[r] - mean);
    } else {
      ForestConfig fold_config = config;
      fold_config.seed = DeriveSeed(config.seed, f);
      const Forest forest = FitForest(scoped, fold_config, train);
      for (uint32_t r : test) {
        const double e = y[r] - forest.Predict(scoped, r);
        sse += e * e;
      }
    }
    fold_sse[f] = sse;
  });
  double total = 0.0;
  for (double s : fold_sse) total += s;
  return total / static_cast<double>(n);
}

PredValueReport MpvCpv(const Dataset& ds, const ForestConfig& config, const CvScheme& cv,
                       int threads) {
  const size_t k_vars = ds.n_predictors();
  if (k_vars < 2) Fail(ErrorCode::kInvalidArgument, "predictive values need at least two predictors");
  PredValueReport report;
  for (const Column& c : ds.predictors()) report.names.push_back(c.name);
  report.scheme = cv.Describe();
  report.seed = config.seed;

  // Families: constant, full, then only_j and all_but_j for every j.
  const size_t families = 2 * k_vars + 2;
  std::vector<double> error(families, 0.0);
  ParallelFor(families, threads, [&](size_t f) {
    if (f == 0) {
      error[f] = CvError(ds, Scope::kNone, 0, config, cv);
    } else if (f == 1) {
      error[f] = CvError(ds, Scope::kAll, 0, config, cv);
    } else {
      const size_t j = (f - 2) / 2;
      error[f] = CvError(ds, (f - 2) % 2 == 0 ? Scope::kOnly : Scope::kAllBut, j, config, cv);
    }
  });
  report.s0 = error[0];
  report.s_all = error[1];
  for (size_t j = 0; j < k_vars; ++j) {
    report.s_only.push_back(error[2 + 2 * j]);
    report.s_without.push_back(error[3 + 2 * j]);
    report.mpv.push_back(report.s0 - report.s_only.back());
    report.cpv.push_back(report.s_without.back() - report.s_all);
  }
  return report;
}

std::pair<double, double> ScoreConsistency(std::span<const double> scores,
                                           const PredValueReport& report) {
  if (scores.size() != report.names.size()) {
    Fail(ErrorCode::kInvalidArgument, "scores and predictive values cover different variables");
  }
  return {stats::PearsonCorr(scores, report.mpv), stats::PearsonCorr(scores, report.cpv)};
}

}  // namespace vimp
