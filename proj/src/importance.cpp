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

#include "vimp/importance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vimp/error.hpp"
#include "vimp/parallel.hpp"
#include "vimp/stats.hpp"

namespace vimp {

std::vector<double> RawScores(const Tree& tree, size_t num_variables) {
  std::vector<double> v(num_variables, 0.0);
  for (const Node& node : tree.nodes()) {
    if (!node.is_intermediate()) continue;
    const double weight = std::sqrt(static_cast<double>(node.n()));
    const auto& p1 = node.tests->p1;
    for (size_t k = 0; k < num_variables && k < p1.size(); ++k) {
      v[k] += weight * stats::Chisq1Quantile(p1[k]);
    }
  }
  return v;
}

ImportanceReport BiasAdjusted(const Dataset& ds, const ImportanceOptions& options) {
  if (options.permutations < 1) {
    Fail(ErrorCode::kInvalidArgument, "need at least one permutation");
  }
  options.tree.Validate();
  const size_t k_vars = ds.n_predictors();
  ImportanceReport report;
  for (const Column& col : ds.predictors()) report.names.push_back(col.name);
  report.permutations = options.permutations;
  report.seed = options.seed;
  report.raw = RawScores(GrowTree(ds, options.tree), k_vars);

  const auto b_count = static_cast<size_t>(options.permutations);
  std::vector<std::vector<double>> permuted(b_count);
  ParallelFor(b_count, options.threads, [&](size_t b) {
    Stream stream(DeriveSeed(options.seed, b));
    permuted[b] = RawScores(GrowTree(PermuteResponse(ds, stream), options.tree), k_vars);
  });

  report.perm_mean.assign(k_vars, 0.0);
  report.perm_max.resize(b_count);
  for (size_t b = 0; b < b_count; ++b) {
    for (size_t k = 0; k < k_vars; ++k) report.perm_mean[k] += permuted[b][k];
    report.perm_max[b] =
        k_vars ? *std::max_element(permuted[b].begin(), permuted[b].end()) : 0.0;
  }
  report.vi.resize(k_vars);
  for (size_t k = 0; k < k_vars; ++k) {
    report.perm_mean[k] /= static_cast<double>(b_count);
    report.vi[k] = report.perm_mean[k] > 0.0 ? report.raw[k] / report.perm_mean[k] : 0.0;
  }
  report.normalized = report.vi;
  report.important.assign(k_vars, 0);
  return report;
}

void ApplyThreshold(ImportanceReport& report, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) Fail(ErrorCode::kDomain, "alpha must lie in (0, 1)");
  if (report.perm_max.empty()) Fail(ErrorCode::kDomain, "no permutation maxima to threshold");
  const size_t k_vars = report.size();
  report.thresholded = true;
  report.alpha = alpha;
  report.v_star = stats::EmpiricalQuantile(report.perm_max, 1.0 - alpha);
  report.m = static_cast<int>(std::count_if(report.raw.begin(), report.raw.end(),
                                            [&](double v) { return v > report.v_star; }));

  std::vector<size_t> order(k_vars);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return report.vi[a] > report.vi[b]; });

  report.important.assign(k_vars, 0);
  report.normalized = report.vi;
  report.normalized_defined = false;
  report.v_tilde = 0.0;
  const auto m = static_cast<size_t>(report.m);
  if (m == 0) return;
  for (size_t i = 0; i < m; ++i) report.important[order[i]] = 1;
  report.v_tilde = m < k_vars ? (report.vi[order[m - 1]] + report.vi[order[m]]) / 2.0
                              : report.vi[order[k_vars - 1]];
  if (!(report.v_tilde > 0.0)) return;
  report.normalized_defined = true;
  for (size_t k = 0; k < k_vars; ++k) report.normalized[k] = report.vi[k] / report.v_tilde;
}

double ExactThresholdOracle(const Dataset& ds, const TreeConfig& config, double alpha,
                            int outer, int inner, uint64_t seed, int threads) {
  if (outer < 1 || inner < 1) Fail(ErrorCode::kInvalidArgument, "oracle needs outer, inner >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) Fail(ErrorCode::kDomain, "alpha must lie in (0, 1)");
  std::vector<double> maxima(static_cast<size_t>(outer));
  ParallelFor(maxima.size(), threads, [&](size_t j) {
    const uint64_t outer_seed = DeriveSeed(seed, j);
    Stream stream(outer_seed);
    ImportanceOptions options;
    options.permutations = inner;
    options.seed = DeriveSeed(outer_seed, 1);
    options.threads = 1;
    options.tree = config;
    const auto report = BiasAdjusted(PermuteResponse(ds, stream), options);
    maxima[j] = report.vi.empty() ? 0.0 : *std::max_element(report.vi.begin(), report.vi.end());
  });
  return stats::EmpiricalQuantile(maxima, 1.0 - alpha);
}

}  // namespace vimp
