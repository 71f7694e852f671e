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

// Acceptance checks. With no arguments every criterion runs; otherwise only
// the numbered ones. One PASS or FAIL line is printed per criterion and the
// exit status is nonzero if any fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "vimp/cart.hpp"
#include "vimp/predvalue.hpp"
#include "vimp/rng.hpp"
#include "vimp/simbench.hpp"
#include "vimp/split.hpp"
#include "vimp/stats.hpp"

namespace vimp {
namespace {

namespace fs = std::filesystem;

constexpr int kTrials = 200;
constexpr size_t kRows = 400;
constexpr int kPermutations = 100;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buffer[256];
  std::snprintf(buffer, sizeof(buffer), format, a, b, c);
  return buffer;
}

size_t IndexOf(const BiasReport& r, const std::string& name) {
  return static_cast<size_t>(std::find(r.names.begin(), r.names.end(), name) - r.names.begin());
}

BiasReport Experiment(SimModel model, Method method, uint64_t seed,
                      std::vector<std::string> mcar_columns = {}, double mcar_rate = 0.0) {
  SimOptions options;
  options.model = model;
  options.method = method;
  options.trials = kTrials;
  options.n = kRows;
  options.permutations = kPermutations;
  options.seed = seed;
  options.threads = 0;
  options.mcar_columns = std::move(mcar_columns);
  options.mcar_rate = mcar_rate;
  return RunBiasExperiment(options);
}

// Variable names ordered by decreasing median, ties by column order.
std::vector<std::string> RankByMedian(const BiasReport& r, const std::vector<double>& medians) {
  std::vector<size_t> order(r.names.size());
  for (size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t a, size_t b) { return medians[a] > medians[b]; });
  std::vector<std::string> names;
  for (size_t k : order) names.push_back(r.names[k]);
  return names;
}

std::string Join(const std::vector<std::string>& names, size_t count) {
  std::string out;
  for (size_t i = 0; i < std::min(count, names.size()); ++i) {
    out += (i ? "," : "") + names[i];
  }
  return out;
}

Outcome TopMedians(SimModel model, uint64_t seed, std::set<std::string> expected) {
  const BiasReport r = Experiment(model, Method::kGuide, seed);
  const auto ranked = RankByMedian(r, r.Medians());
  const std::set<std::string> top(ranked.begin(), ranked.begin() + expected.size());
  return {top == expected, "highest medians " + Join(ranked, expected.size() + 1)};
}

// E0 guide reports are shared by criteria 1 and 7.
const BiasReport& NullGuide() {
  static const std::optional<BiasReport> report = Experiment(SimModel::kE0, Method::kGuide, 101);
  return *report;
}

Outcome NullUnbiasedness() {
  const BiasReport& r = NullGuide();
  bool centered = true;
  double worst = 0.0;
  for (size_t k = 0; k < r.names.size(); ++k) {
    const double z = std::fabs(r.means[k] - 1.0) / r.ses[k];
    worst = std::max(worst, z);
    centered = centered && z <= 3.0;
  }
  return {r.overlap && centered,
          std::string("overlap ") + (r.overlap ? "true" : "false") +
              Fmt(", max |mean - 1| / SE = %.2f", worst)};
}

Outcome BiasContrast() {
  const BiasReport r = Experiment(SimModel::kE0, Method::kCart, 102);
  const size_t b1 = IndexOf(r, "B1");
  bool exceeds = true;
  std::string detail = std::string("overlap ") + (r.overlap ? "true" : "false");
  for (const char* name : {"C1", "C2"}) {
    const size_t c = IndexOf(r, name);
    const double gap = (r.means[c] - r.means[b1]) / std::hypot(r.ses[c], r.ses[b1]);
    exceeds = exceeds && gap > 2.0;
    detail += std::string(", ") + name + Fmt(" - B1 = %.1f SE", gap);
  }
  return {!r.overlap && exceeds, detail};
}

Outcome E1Bootstrap() {
  const BiasReport r = Experiment(SimModel::kE1, Method::kGuide, 103);
  const std::set<std::string> expected{"N2", "N3", "N4"};
  constexpr int kResamples = 1000;
  Stream stream(DeriveSeed(103, 0xb007));
  int hits = 0;
  for (int b = 0; b < kResamples; ++b) {
    BiasReport resample;
    resample.names = r.names;
    for (size_t t = 0; t < r.scores.size(); ++t) {
      resample.scores.push_back(r.scores[stream.Below(r.scores.size())]);
    }
    const auto ranked = RankByMedian(resample, resample.Medians());
    hits += std::set<std::string>(ranked.begin(), ranked.begin() + 3) == expected;
  }
  const double share = static_cast<double>(hits) / kResamples;
  const auto ranked = RankByMedian(r, r.Medians());
  return {share >= 0.90,
          Fmt("top three {N2,N3,N4} in %.1f%% of resamples; full-sample order ", 100.0 * share) +
              Join(ranked, 4)};
}

Outcome TypeOneError() {
  const BiasReport& r = NullGuide();
  const auto rate = [&](double alpha) {
    int flagged = 0;
    for (ImportanceReport report : r.guide_reports) {
      ApplyThreshold(report, alpha);
      flagged += report.m >= 1;
    }
    return static_cast<double>(flagged) / static_cast<double>(r.guide_reports.size());
  };
  const double at05 = rate(0.05);
  const double at01 = rate(0.01);
  return {!r.guide_reports.empty() && at05 >= 0.02 && at05 <= 0.10 && at01 <= 0.04,
          Fmt("P(m >= 1) = %.3f at alpha 0.05, %.3f at alpha 0.01", at05, at01)};
}

Outcome MissingUnbiasedness() {
  const BiasReport r =
      Experiment(SimModel::kE0, Method::kGuide, 108, {"N1", "C1", "S1"}, 0.20);
  double lo = 1e300, hi = -1e300;
  for (size_t k = 0; k < r.names.size(); ++k) {
    lo = std::min(lo, r.means[k]);
    hi = std::max(hi, r.means[k]);
  }
  return {r.overlap, std::string("overlap ") + (r.overlap ? "true" : "false") +
                         Fmt(", means in [%.3f, %.3f]", lo, hi)};
}

Outcome KernelCorrectness() {
  double worst_oracle = 0.0;
  for (int df = 1; df <= 9; ++df) {
    for (double x : {0.05, 0.3, 1.0, 2.5, 3.841459, 7.0, 12.0, 25.0, 60.0, 100.0}) {
      const double expected = oracle::ChisqUpperTail(x, df);
      worst_oracle = std::max(worst_oracle, std::fabs(stats::ChisqTail(x, df).first / expected - 1.0));
    }
  }
  double worst_trip = 0.0;
  for (double p : {0.9, 0.5, 0.1, 1e-3, 1e-8, 1e-30}) {
    const double q = stats::Chisq1Quantile(p, std::log(p));
    worst_trip = std::max(worst_trip, std::fabs(stats::ChisqTail(q, 1).first / p - 1.0));
  }
  for (double log_p : {-50.0, -200.0, -500.0, -699.0}) {
    const double q = stats::Chisq1Quantile(std::exp(log_p), log_p);
    worst_trip = std::max(worst_trip, std::fabs(stats::ChisqTail(q, 1).second / log_p - 1.0));
  }
  return {worst_oracle <= 1e-10 && worst_trip <= 1e-6,
          Fmt("max relative error: tail vs oracle %.2e, quantile round trip %.2e", worst_oracle,
              worst_trip)};
}

bool SplitMatchesBrute(int instance) {
  std::mt19937 rng(5000 + instance);
  std::normal_distribution<double> normal;
  const size_t n = 4 + rng() % 27;
  const bool categorical = instance % 2 == 1;
  const int levels = 2 + static_cast<int>(rng() % 4);
  const bool with_missing = instance % 4 >= 2;
  TreeConfig config;
  config.min_child = 1 + static_cast<int>(rng() % 2);
  std::vector<double> y(n), xv(n);
  std::vector<int32_t> codes(n);
  std::vector<bool> missing(n);
  for (size_t i = 0; i < n; ++i) {
    missing[i] = with_missing && rng() % 5 == 0;
    codes[i] = missing[i] ? -1 : static_cast<int32_t>(rng() % levels);
    xv[i] = missing[i] ? NAN : static_cast<double>(rng() % 7);
    y[i] = normal(rng) + (missing[i] ? 1.0 : 0.3 * codes[i]);
  }
  const Column x = categorical ? Column::Categorical("x", codes) : Column::Ordinal("x", xv);
  const auto got = BestSplit(x, 0, y, AllRows(n), config);
  const auto want = categorical ? oracle::BruteCategorical(codes, y, config.min_child)
                                : oracle::BruteOrdinal(xv, missing, y, config.min_child);
  const double total = oracle::Sse(y);
  if (want.gain <= 1e-12 * total) return !got;
  if (!got) return false;
  std::vector<bool> left(n);
  for (size_t i = 0; i < n; ++i) left[i] = got->GoesLeft(x, i);
  const double tol = 1e-9 * (1.0 + total);
  return std::fabs(got->impurity_decrease - want.gain) <= tol &&
         std::fabs(oracle::PartitionGain(y, left) - want.gain) <= tol;
}

CartNode MicroLeaf(int depth) {
  CartNode node;
  node.depth = depth;
  return node;
}

CartNode MicroSplit(int variable, double delta, std::vector<std::pair<int, std::pair<double, double>>> surrogates,
                    int left, int right, int depth) {
  CartNode node = MicroLeaf(depth);
  node.split = Split{};
  node.split->variable = variable;
  node.split->impurity_decrease = delta;
  for (const auto& [v, ad] : surrogates) {
    SurrogateSplit s;
    s.variable = v;
    s.adjusted_agreement = ad.first;
    s.impurity_decrease = ad.second;
    node.surrogates.push_back(s);
  }
  node.left = left;
  node.right = right;
  return node;
}

bool Close(const std::vector<double>& got, const std::vector<double>& want) {
  if (got.size() != want.size()) return false;
  for (size_t k = 0; k < got.size(); ++k) {
    if (std::fabs(got[k] - want[k]) > 1e-9 * (1.0 + std::fabs(want[k]))) return false;
  }
  return true;
}

Outcome OracleEquivalence() {
  int split_ok = 0;
  for (int instance = 0; instance < 200; ++instance) split_ok += SplitMatchesBrute(instance);

  int trees_ok = 0;
  CartTree one;
  one.nodes = {MicroSplit(0, 25.0, {{1, {0.5, 16.0}}}, 1, 2, 0), MicroLeaf(1), MicroLeaf(1)};
  trees_ok += Close(RpartImportance(one, 3), {25.0, 8.0, 0.0});

  CartTree two;
  two.nodes = {MicroSplit(0, 10.0, {{2, {0.2, 5.0}}}, 1, 4, 0),
               MicroSplit(1, 4.0, {{0, {0.25, 2.0}}}, 2, 3, 1), MicroLeaf(2), MicroLeaf(2),
               MicroLeaf(1)};
  trees_ok += Close(RpartImportance(two, 3), {10.5, 4.0, 1.0});

  std::vector<Column> cols;
  cols.push_back(Column::Ordinal("x1", {1, 2, 3, 4, 5, 6}));
  cols.push_back(Column::Ordinal("x2", {1, 2, 4, 3, 5, 6}));
  cols.push_back(Column::Ordinal("x3", {1, 2, 3, 4, 5, 6}));
  cols.push_back(Column::Categorical("x4", {0, 0, 0, 1, 1, 2}, {"a", "b", "c"}));
  cols.push_back(Column::Ordinal("x5", {7, 7, 7, 7, 7, 7}));
  const Dataset six("y", {0, 0, 0, 10, 10, 10}, std::move(cols));
  TreeConfig config;
  config.max_split_depth = 1;
  config.min_node_to_split = 6;
  config.min_child = 1;
  trees_ok += Close(RpartImportance(GrowCart(six, config), 5), {150.0, 50.0, 150.0, 150.0, 0.0});

  return {split_ok == 200 && trees_ok == 3,
          Fmt("best split matches enumeration on %.0f/200 instances; %.0f/3 micro-trees match",
              split_ok, trees_ok)};
}

Outcome FactorialPredictiveValue() {
  // Factors with 3, 2 and 4 levels, four replicates per cell, additive effects.
  const std::vector<double> a_effect{0.0, 1.0, 2.0};
  const std::vector<double> b_effect{0.0, 3.0};
  const std::vector<double> c_effect{0.0, 0.5, 1.0, 1.5};
  constexpr int kReplicates = 4;
  Stream stream(DeriveSeed(111, 0));
  std::vector<int32_t> a, b, c;
  std::vector<double> y;
  for (int r = 0; r < kReplicates; ++r) {
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 4; ++k) {
          a.push_back(i);
          b.push_back(j);
          c.push_back(k);
          y.push_back(a_effect[i] + b_effect[j] + c_effect[k] + 0.5 * stream.Normal());
        }
      }
    }
  }
  std::vector<Column> cols;
  cols.push_back(Column::Categorical("A", a, {"a1", "a2", "a3"}));
  cols.push_back(Column::Categorical("B", b, {"b1", "b2"}));
  cols.push_back(Column::Categorical("C", c, {"c1", "c2", "c3", "c4"}));
  const Dataset ds("y", y, std::move(cols));
  ForestConfig config;
  config.seed = 111;
  CvScheme cv;
  cv.kind = CvScheme::Kind::kKFold;
  cv.folds = 10;
  const PredValueReport r = MpvCpv(ds, config, cv, 0);
  const double cor = stats::PearsonCorr(r.mpv, r.cpv);
  return {cor > 0.9, Fmt("cor(MPV, CPV) = %.4f", cor)};
}

std::string ReadBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

Outcome CliDeterminism() {
  const fs::path dir = fs::temp_directory_path() / ("vimp_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  SimOptions options;
  options.model = SimModel::kE1;
  options.n = 200;
  Stream stream(DeriveSeed(112, 0));
  WriteCsv(SimulateDataset(options, stream), (dir / "data.csv").string(),
           (dir / "roles.txt").string());
  std::vector<std::string> outputs;
  bool ran = true;
  for (const auto& [run, threads] : std::vector<std::pair<std::string, int>>{
           {"a", 1}, {"b", 1}, {"c", 4}, {"d", 4}}) {
    const std::string command = std::string("\"") + VIMP_CLI_PATH + "\" score \"" +
                                (dir / "data.csv").string() + "\" \"" +
                                (dir / "roles.txt").string() + "\" --b 60 --seed 112 --threads " +
                                std::to_string(threads) + " --out-dir \"" + (dir / run).string() +
                                "\" > /dev/null";
    ran = ran && std::system(command.c_str()) == 0;
    outputs.push_back(ReadBytes(dir / run / "vi.csv"));
  }
  fs::remove_all(dir);
  const bool identical = ran && !outputs[0].empty() &&
                         std::all_of(outputs.begin(), outputs.end(),
                                     [&](const std::string& s) { return s == outputs[0]; });
  return {identical, std::string(ran ? "four runs completed" : "a run failed") +
                         (identical ? ", vi.csv byte-identical" : ", vi.csv differs")};
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

}  // namespace
}  // namespace vimp

int main(int argc, char** argv) {
  using namespace vimp;
  const std::vector<Criterion> criteria = {
      {1, "null unbiasedness, GUIDE on E0", NullUnbiasedness},
      {2, "bias contrast, CART on E0", BiasContrast},
      {3, "E1 top three medians", E1Bootstrap},
      {4, "E3 highest median is B1",
       [] { return TopMedians(SimModel::kE3, 104, {"B1"}); }},
      {5, "E4 two highest medians are B2 and C2",
       [] { return TopMedians(SimModel::kE4, 105, {"B2", "C2"}); }},
      {6, "E5 two highest medians are B1 and C1",
       [] { return TopMedians(SimModel::kE5, 106, {"B1", "C1"}); }},
      {7, "type-I error of the threshold", TypeOneError},
      {8, "unbiasedness with 20% MCAR in N1, C1, S1", MissingUnbiasedness},
      {9, "chi-squared kernel accuracy", KernelCorrectness},
      {10, "split search and rpart importance oracles", OracleEquivalence},
      {11, "factorial MPV/CPV agreement", FactorialPredictiveValue},
      {12, "CLI determinism across runs and threads", CliDeterminism},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  bool all_pass = true;
  for (const auto& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("error: ") + e.what()};
    }
    std::printf("%s criterion %d: %s: %s\n", outcome.pass ? "PASS" : "FAIL", c.id, c.title,
                outcome.detail.c_str());
    std::fflush(stdout);
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
