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

#include <cmath>

#include "gtest/gtest.h"
#include "vimp/stats.hpp"

namespace vimp {
namespace {

size_t Index(const std::string& name) {
  const auto names = SimPredictorNames();
  return static_cast<size_t>(std::find(names.begin(), names.end(), name) - names.begin());
}

std::vector<double> Numeric(const std::vector<Column>& x, const std::string& name) {
  return x[Index(name)].numeric;
}

double Mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

TEST(SimPredictors, NamesAndRoles) {
  EXPECT_EQ(SimPredictorNames(), (std::vector<std::string>{"B1", "B2", "C1", "C2", "N1", "N2",
                                                           "N3", "N4", "S1", "S2", "S3"}));
  Stream s(1);
  const auto x = GenPredictors(10, s);
  ASSERT_EQ(x.size(), 11u);
  EXPECT_EQ(x[Index("B1")].role, Role::kOrdinal);
  EXPECT_EQ(x[Index("C1")].role, Role::kCategorical);
  EXPECT_EQ(x[Index("C2")].levels.front(), "1");
  EXPECT_EQ(x[Index("C2")].levels.back(), "10");
}

TEST(SimPredictors, LargeSampleProperties) {
  const size_t n = 100000;
  Stream s(2026);
  const auto x = GenPredictors(n, s);
  const auto s1 = Numeric(x, "S1"), s2 = Numeric(x, "S2"), s3 = Numeric(x, "S3");
  for (size_t i = 0; i < n; ++i) EXPECT_NEAR(s1[i] + s2[i] + s3[i], 1.0, 1e-12);
  EXPECT_NEAR(stats::PearsonCorr(Numeric(x, "N2"), Numeric(x, "N3")), 0.90, 0.01);
  EXPECT_NEAR(stats::PearsonCorr(Numeric(x, "N3"), Numeric(x, "N4")), 0.90, 0.01);
  EXPECT_NEAR(stats::PearsonCorr(s1, s2), -0.5, 0.02);
  EXPECT_NEAR(stats::PearsonCorr(s2, s3), -0.5, 0.02);
  const double tol = 4.0 / std::sqrt(static_cast<double>(n));
  for (const char* name : {"N1", "N2", "N3", "N4"}) EXPECT_NEAR(Mean(Numeric(x, name)), 0.0, tol);
  EXPECT_NEAR(Mean(Numeric(x, "B1")), 0.5, 4.0 * 0.5 / std::sqrt(static_cast<double>(n)));
  const Column& c2 = x[Index("C2")];
  const auto b2 = Numeric(x, "B2");
  std::vector<int> counts(10, 0);
  for (size_t i = 0; i < n; ++i) {
    const int level = std::stoi(c2.levels[c2.codes[i]]);
    ++counts[level - 1];
    EXPECT_EQ(b2[i], level <= 5 ? 1.0 : 0.0);
  }
  for (int c : counts) EXPECT_NEAR(c, n / 10.0, 5.0 * std::sqrt(n * 0.09));
}

TEST(SimResponse, NoiseFreeModels) {
  Stream s(3);
  const auto x = GenPredictors(500, s);
  const auto b1 = Numeric(x, "B1"), b2 = Numeric(x, "B2"), n1 = Numeric(x, "N1"),
             n2 = Numeric(x, "N2");
  const Column& c1 = x[Index("C1")];
  const auto e0 = GenResponse(SimModel::kE0, x, s, false);
  const auto e1 = GenResponse(SimModel::kE1, x, s, false);
  const auto e2 = GenResponse(SimModel::kE2, x, s, false);
  const auto e3 = GenResponse(SimModel::kE3, x, s, false);
  const auto e4 = GenResponse(SimModel::kE4, x, s, false);
  const auto e5 = GenResponse(SimModel::kE5, x, s, false);
  for (size_t i = 0; i < 500; ++i) {
    EXPECT_EQ(e0[i], 0.0);
    EXPECT_DOUBLE_EQ(e1[i], 0.2 * n2[i]);
    EXPECT_DOUBLE_EQ(e2[i], 0.1 * (n1[i] + n2[i]));
    EXPECT_DOUBLE_EQ(e3[i], 0.2 * b1[i]);
    EXPECT_DOUBLE_EQ(e4[i], 0.2 * b2[i]);
    const int c = std::stoi(c1.levels[c1.codes[i]]);
    const bool on = (b1[i] == 0.0 && c <= 5) || (b1[i] == 1.0 && c > 5);
    EXPECT_EQ(e5[i], on ? 0.5 : 0.0);
  }
}

TEST(SimResponse, NullResponseIsUncorrelated) {
  Stream s(4);
  const auto x = GenPredictors(10000, s);
  const auto y = GenResponse(SimModel::kE0, x, s);
  for (const char* name : {"B1", "B2", "N1", "N2", "N3", "N4", "S1", "S2", "S3"}) {
    EXPECT_LT(std::fabs(stats::PearsonCorr(y, Numeric(x, name))), 0.05) << name;
  }
}

TEST(SimModelNames, ParseAndFormat) {
  EXPECT_EQ(ParseSimModel("E4"), SimModel::kE4);
  EXPECT_FALSE(ParseSimModel("E6"));
  EXPECT_EQ(SimModelName(SimModel::kE5), "E5");
  EXPECT_EQ(ParseMethod("cart"), Method::kCart);
  EXPECT_FALSE(ParseMethod("rf"));
  EXPECT_EQ(MethodName(Method::kGuide), "guide");
}

TEST(SimulateDataset, McarMask) {
  SimOptions options;
  options.n = 5000;
  options.mcar_columns = {"N1", "C1", "S1"};
  options.mcar_rate = 0.2;
  Stream s(5);
  const auto ds = SimulateDataset(options, s);
  EXPECT_EQ(ds.response_name(), "Y");
  for (size_t k = 0; k < ds.n_predictors(); ++k) {
    const auto& col = ds.predictor(k);
    const double rate = std::count(col.missing.begin(), col.missing.end(), 1) / 5000.0;
    const bool masked = col.name == "N1" || col.name == "C1" || col.name == "S1";
    EXPECT_NEAR(rate, masked ? 0.2 : 0.0, 0.03) << col.name;
  }
}

TEST(OverlapVerdict, Examples) {
  EXPECT_TRUE(OverlapVerdict(std::vector<double>{1, 1}, std::vector<double>{0.1, 0.1}));
  EXPECT_FALSE(OverlapVerdict(std::vector<double>{1, 2}, std::vector<double>{0.1, 0.1}));
  EXPECT_TRUE(OverlapVerdict(std::vector<double>{1, 1.25}, std::vector<double>{0.0625, 0.0625}));
  // [0.8, 1.2] and [1.2, 1.4] touch.
  EXPECT_TRUE(OverlapVerdict(std::vector<double>{1, 1.3}, std::vector<double>{0.1, 0.05}));
}

TEST(SummarizeScores, MeansAndStandardErrors) {
  const auto r = SummarizeScores({"a", "b"}, {{1, 10}, {3, 10}, {5, 13}});
  EXPECT_DOUBLE_EQ(r.means[0], 3.0);
  EXPECT_DOUBLE_EQ(r.means[1], 11.0);
  // sd of (1, 3, 5) is 2.
  EXPECT_NEAR(r.ses[0], 2.0 / std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(r.ses[1], std::sqrt(3.0) / std::sqrt(3.0), 1e-12);
  EXPECT_EQ(r.trials, 3);
  EXPECT_FALSE(r.overlap);
  EXPECT_EQ(r.Medians(), (std::vector<double>{3.0, 10.0}));
}

TEST(RunBiasExperiment, TwoTrialsWellFormed) {
  SimOptions options;
  options.trials = 2;
  options.n = 120;
  options.permutations = 4;
  const auto r = RunBiasExperiment(options);
  EXPECT_EQ(r.trials, 2);
  EXPECT_EQ(r.names.size(), 11u);
  for (double se : r.ses) EXPECT_TRUE(std::isfinite(se));
  EXPECT_EQ(r.guide_reports.size(), 2u);
}

TEST(RunBiasExperiment, ReproducibleAcrossThreadCounts) {
  for (Method method : {Method::kGuide, Method::kCart}) {
    SimOptions options;
    options.model = SimModel::kE3;
    options.method = method;
    options.trials = 6;
    options.n = 150;
    options.permutations = 5;
    options.seed = 77;
    options.threads = 1;
    const auto a = RunBiasExperiment(options);
    options.threads = 3;
    const auto b = RunBiasExperiment(options);
    EXPECT_EQ(a.scores, b.scores);
    EXPECT_EQ(a.means, b.means);
    EXPECT_EQ(a.ses, b.ses);
  }
}

TEST(PermutationBias, ReproducibleAndShaped) {
  SimOptions options;
  options.n = 120;
  Stream s(9);
  const auto ds = SimulateDataset(options, s);
  const auto a = PermutationBias(ds, Method::kCart, 5, 0, 3, 1, TreeConfig{});
  const auto b = PermutationBias(ds, Method::kCart, 5, 0, 3, 2, TreeConfig{});
  EXPECT_EQ(a.scores, b.scores);
  EXPECT_EQ(a.trials, 5);
  const auto g = PermutationBias(ds, Method::kGuide, 2, 4, 3, 1, TreeConfig{});
  EXPECT_EQ(g.trials, 2);
  EXPECT_EQ(g.means.size(), 11u);
}

}  // namespace
}  // namespace vimp
