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

// Simulation benchmark: eleven predictors with mixed types and dependence,
// six response models, and repeated-trial bias experiments judged by 2-SE
// interval overlap.

#ifndef VIMP_SIMBENCH_HPP_
#define VIMP_SIMBENCH_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vimp/dataset.hpp"
#include "vimp/importance.hpp"
#include "vimp/rng.hpp"
#include "vimp/split.hpp"

namespace vimp {

enum class SimModel { kE0, kE1, kE2, kE3, kE4, kE5 };

std::optional<SimModel> ParseSimModel(const std::string& name);
std::string SimModelName(SimModel model);

enum class Method { kGuide, kCart };

std::optional<Method> ParseMethod(const std::string& name);
std::string MethodName(Method method);

std::vector<std::string> SimPredictorNames();

// B1, B2, C1, C2, N1..N4, S1..S3 in that order. C1 and C2 are categorical
// with levels "1".."10"; the rest are ordinal.
std::vector<Column> GenPredictors(size_t n, Stream& stream);

// mu(X) + eps for the model; eps is skipped when `noise` is false.
std::vector<double> GenResponse(SimModel model, const std::vector<Column>& predictors,
                                Stream& stream, bool noise = true);

struct SimOptions {
  SimModel model = SimModel::kE0;
  Method method = Method::kGuide;
  int trials = 1000;
  size_t n = 400;
  int permutations = 300;  // GUIDE bias adjustment
  uint64_t seed = 0;
  int threads = 0;
  TreeConfig tree;
  // Cells of these predictors are set missing completely at random.
  std::vector<std::string> mcar_columns;
  double mcar_rate = 0.0;
};

// One simulated dataset for a trial stream: predictors, response, then the
// missing-value mask.
Dataset SimulateDataset(const SimOptions& options, Stream& stream);

struct BiasReport {
  std::vector<std::string> names;
  std::vector<double> means;
  std::vector<double> ses;
  int trials = 0;
  bool overlap = false;
  std::vector<std::vector<double>> scores;       // [trial][variable]
  std::vector<ImportanceReport> guide_reports;   // per trial, GUIDE runs only

  std::vector<double> Medians() const;
};

// True iff every pair of [mean - 2 se, mean + 2 se] intervals intersects.
bool OverlapVerdict(std::span<const double> means, std::span<const double> ses);

// Means, standard errors (sd / sqrt(trials)) and the overlap verdict.
BiasReport SummarizeScores(std::vector<std::string> names,
                           std::vector<std::vector<double>> scores);

BiasReport RunBiasExperiment(const SimOptions& options);

// Scores of `method` on `permutations` response permutations of a fixed
// dataset (stream b = DeriveSeed(seed, b)).
BiasReport PermutationBias(const Dataset& ds, Method method, int permutations,
                           int guide_permutations, uint64_t seed, int threads,
                           const TreeConfig& tree);

}  // namespace vimp

#endif  // VIMP_SIMBENCH_HPP_
