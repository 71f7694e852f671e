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

#include "vimp/simbench.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "vimp/cart.hpp"
#include "vimp/error.hpp"
#include "vimp/parallel.hpp"

namespace vimp {
namespace {

enum Var { kB1, kB2, kC1, kC2, kN1, kN2, kN3, kN4, kS1, kS2, kS3 };

// Cholesky factor of the 3x3 equicorrelation matrix with correlation rho.
std::array<std::array<double, 3>, 3> EquicorrelationFactor(double rho) {
  std::array<std::array<double, 3>, 3> l{};
  l[0][0] = 1.0;
  l[1][0] = rho;
  l[1][1] = std::sqrt(1.0 - rho * rho);
  l[2][0] = rho;
  l[2][1] = (rho - rho * rho) / l[1][1];
  l[2][2] = std::sqrt(1.0 - l[2][0] * l[2][0] - l[2][1] * l[2][1]);
  return l;
}

std::vector<double> ScoreOnce(const Dataset& ds, Method method, int guide_permutations,
                              uint64_t seed, const TreeConfig& tree,
                              ImportanceReport* guide_report) {
  if (method == Method::kCart) return RpartImportance(GrowCart(ds, tree), ds.n_predictors());
  ImportanceOptions options;
  options.permutations = guide_permutations;
  options.seed = seed;
  options.threads = 1;
  options.tree = tree;
  ImportanceReport report = BiasAdjusted(ds, options);
  std::vector<double> vi = report.vi;
  if (guide_report) *guide_report = std::move(report);
  return vi;
}

}  // namespace

std::optional<SimModel> ParseSimModel(const std::string& name) {
  static const std::array<std::string, 6> kNames = {"E0", "E1", "E2", "E3", "E4", "E5"};
  for (size_t i = 0; i < kNames.size(); ++i) {
    if (name == kNames[i]) return static_cast<SimModel>(i);
  }
  return std::nullopt;
}

std::string SimModelName(SimModel model) { return "E" + std::to_string(static_cast<int>(model)); }

std::optional<Method> ParseMethod(const std::string& name) {
  if (name == "guide") return Method::kGuide;
  if (name == "cart") return Method::kCart;
  return std::nullopt;
}

std::string MethodName(Method method) { return method == Method::kGuide ? "guide" : "cart"; }

std::vector<std::string> SimPredictorNames() {
  return {"B1", "B2", "C1", "C2", "N1", "N2", "N3", "N4", "S1", "S2", "S3"};
}

std::vector<Column> GenPredictors(size_t n, Stream& stream) {
  std::vector<double> b1(n), b2(n), n1(n), n2(n), n3(n), n4(n), s1(n), s2(n), s3(n);
  std::vector<int32_t> c1(n), c2(n);
  const auto l = EquicorrelationFactor(0.90);
  for (size_t i = 0; i < n; ++i) {
    b1[i] = stream.Bernoulli(0.5) ? 1.0 : 0.0;
    c1[i] = static_cast<int32_t>(stream.Below(10));
    c2[i] = static_cast<int32_t>(stream.Below(10));
    b2[i] = c2[i] < 5 ? 1.0 : 0.0;  // level ids 0..4 are values 1..5
    n1[i] = stream.Normal();
    const double z0 = stream.Normal(), z1 = stream.Normal(), z2 = stream.Normal();
    n2[i] = l[0][0] * z0;
    n3[i] = l[1][0] * z0 + l[1][1] * z1;
    n4[i] = l[2][0] * z0 + l[2][1] * z1 + l[2][2] * z2;
    const double u1 = stream.Uniform(), u2 = stream.Uniform();
    s1[i] = std::min(u1, u2);
    s2[i] = std::fabs(u1 - u2);
    s3[i] = 1.0 - std::max(u1, u2);
  }
  std::vector<std::string> levels;
  for (int v = 1; v <= 10; ++v) levels.push_back(std::to_string(v));
  const auto names = SimPredictorNames();
  std::vector<Column> cols;
  cols.push_back(Column::Ordinal(names[kB1], std::move(b1)));
  cols.push_back(Column::Ordinal(names[kB2], std::move(b2)));
  cols.push_back(Column::Categorical(names[kC1], std::move(c1), levels));
  cols.push_back(Column::Categorical(names[kC2], std::move(c2), levels));
  cols.push_back(Column::Ordinal(names[kN1], std::move(n1)));
  cols.push_back(Column::Ordinal(names[kN2], std::move(n2)));
  cols.push_back(Column::Ordinal(names[kN3], std::move(n3)));
  cols.push_back(Column::Ordinal(names[kN4], std::move(n4)));
  cols.push_back(Column::Ordinal(names[kS1], std::move(s1)));
  cols.push_back(Column::Ordinal(names[kS2], std::move(s2)));
  cols.push_back(Column::Ordinal(names[kS3], std::move(s3)));
  return cols;
}

std::vector<double> GenResponse(SimModel model, const std::vector<Column>& x, Stream& stream,
                                bool noise) {
  if (x.size() != 11) Fail(ErrorCode::kInvalidArgument, "expected the 11 simulated predictors");
  const size_t n = x[kB1].size();
  std::vector<double> y(n);
  for (size_t i = 0; i < n; ++i) {
    double mu = 0.0;
    switch (model) {
      case SimModel::kE0:
        break;
      case SimModel::kE1:
        mu = 0.2 * x[kN2].numeric[i];
        break;
      case SimModel::kE2:
        mu = 0.1 * (x[kN1].numeric[i] + x[kN2].numeric[i]);
        break;
      case SimModel::kE3:
        mu = 0.2 * x[kB1].numeric[i];
        break;
      case SimModel::kE4:
        mu = 0.2 * x[kB2].numeric[i];
        break;
      case SimModel::kE5: {
        const bool b1 = x[kB1].numeric[i] == 1.0;
        const bool c1_low = x[kC1].codes[i] < 5;  // C1 <= 5
        mu = 0.5 * (((!b1 && c1_low) || (b1 && !c1_low)) ? 1.0 : 0.0);
        break;
      }
    }
    y[i] = noise ? mu + stream.Normal() : mu;
  }
  return y;
}

Dataset SimulateDataset(const SimOptions& options, Stream& stream) {
  auto predictors = GenPredictors(options.n, stream);
  auto y = GenResponse(options.model, predictors, stream);
  if (options.mcar_rate > 0.0) {
    for (const std::string& name : options.mcar_columns) {
      const auto it = std::find_if(predictors.begin(), predictors.end(),
                                   [&](const Column& c) { return c.name == name; });
      if (it == predictors.end()) {
        Fail(ErrorCode::kInvalidArgument, "unknown simulated column '" + name + "'");
      }
      for (size_t i = 0; i < options.n; ++i) {
        if (!stream.Bernoulli(options.mcar_rate)) continue;
        it->missing[i] = 1;
        if (it->is_categorical()) {
          it->codes[i] = -1;
        } else {
          it->numeric[i] = std::nan("");
        }
      }
    }
  }
  return Dataset("Y", std::move(y), std::move(predictors));
}

std::vector<double> BiasReport::Medians() const {
  std::vector<double> medians(names.size(), 0.0);
  for (size_t k = 0; k < names.size(); ++k) {
    std::vector<double> column;
    column.reserve(scores.size());
    for (const auto& trial : scores) column.push_back(trial[k]);
    if (column.empty()) continue;
    std::sort(column.begin(), column.end());
    const size_t mid = column.size() / 2;
    medians[k] = column.size() % 2 ? column[mid] : (column[mid - 1] + column[mid]) / 2.0;
  }
  return medians;
}

bool OverlapVerdict(std::span<const double> means, std::span<const double> ses) {
  if (means.size() != ses.size()) Fail(ErrorCode::kInvalidArgument, "means and ses differ in length");
  for (size_t i = 0; i < means.size(); ++i) {
    for (size_t j = i + 1; j < means.size(); ++j) {
      const double lower = std::max(means[i] - 2.0 * ses[i], means[j] - 2.0 * ses[j]);
      const double upper = std::min(means[i] + 2.0 * ses[i], means[j] + 2.0 * ses[j]);
      if (lower > upper) return false;
    }
  }
  return true;
}

BiasReport SummarizeScores(std::vector<std::string> names,
                           std::vector<std::vector<double>> scores) {
  BiasReport report;
  report.names = std::move(names);
  report.trials = static_cast<int>(scores.size());
  const size_t k_vars = report.names.size();
  report.means.assign(k_vars, 0.0);
  report.ses.assign(k_vars, 0.0);
  if (scores.size() < 2) Fail(ErrorCode::kInvalidArgument, "need at least two trials");
  const double t = static_cast<double>(scores.size());
  for (size_t k = 0; k < k_vars; ++k) {
    double mean = 0.0;
    for (const auto& trial : scores) mean += trial[k];
    mean /= t;
    double ss = 0.0;
    for (const auto& trial : scores) ss += (trial[k] - mean) * (trial[k] - mean);
    report.means[k] = mean;
    report.ses[k] = std::sqrt(ss / (t - 1.0)) / std::sqrt(t);
  }
  report.overlap = OverlapVerdict(report.means, report.ses);
  report.scores = std::move(scores);
  return report;
}

BiasReport RunBiasExperiment(const SimOptions& options) {
  if (options.trials < 2) Fail(ErrorCode::kInvalidArgument, "need at least two trials");
  const auto n_trials = static_cast<size_t>(options.trials);
  std::vector<std::vector<double>> scores(n_trials);
  std::vector<ImportanceReport> reports(options.method == Method::kGuide ? n_trials : 0);
  ParallelFor(n_trials, options.threads, [&](size_t t) {
    const uint64_t trial_seed = DeriveSeed(options.seed, t);
    Stream stream(trial_seed);
    const Dataset ds = SimulateDataset(options, stream);
    scores[t] = ScoreOnce(ds, options.method, options.permutations, DeriveSeed(trial_seed, 1),
                          options.tree, reports.empty() ? nullptr : &reports[t]);
  });
  BiasReport report = SummarizeScores(SimPredictorNames(), std::move(scores));
  report.guide_reports = std::move(reports);
  return report;
}

BiasReport PermutationBias(const Dataset& ds, Method method, int permutations,
                           int guide_permutations, uint64_t seed, int threads,
                           const TreeConfig& tree) {
  if (permutations < 2) Fail(ErrorCode::kInvalidArgument, "need at least two permutations");
  const auto count = static_cast<size_t>(permutations);
  std::vector<std::vector<double>> scores(count);
  ParallelFor(count, threads, [&](size_t j) {
    const uint64_t perm_seed = DeriveSeed(seed, j);
    Stream stream(perm_seed);
    scores[j] = ScoreOnce(PermuteResponse(ds, stream), method, guide_permutations,
                          DeriveSeed(perm_seed, 1), tree, nullptr);
  });
  std::vector<std::string> names;
  for (const Column& c : ds.predictors()) names.push_back(c.name);
  return SummarizeScores(std::move(names), std::move(scores));
}

}  // namespace vimp
