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

// Statistical primitives shared by the tree growers and the importance
// machinery: contingency chi-squared tests, chi-squared tails and the
// one-degree-of-freedom quantile, node-local quantile binning.

#ifndef VIMP_STATS_HPP_
#define VIMP_STATS_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace vimp::stats {

// Log p-values below this are clamped; the quantile of a zero p-value is the
// quantile at this floor (about 1392 for one degree of freedom).
inline constexpr double kLogPFloor = -700.0;

// Row-major count matrix: rows are response classes, columns are predictor
// categories.
class ContingencyTable {
 public:
  ContingencyTable(int rows, int cols);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int64_t& at(int r, int c) { return counts_[static_cast<size_t>(r) * cols_ + c]; }
  int64_t at(int r, int c) const {
    return counts_[static_cast<size_t>(r) * cols_ + c];
  }
  int64_t total() const;

 private:
  int rows_;
  int cols_;
  std::vector<int64_t> counts_;
};

struct TestResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  double log_p = 0.0;  // natural log of p_value, kept for extreme tails
};

// Upper regularized incomplete gamma Q(a, x) in log space.
double LogGammaQ(double a, double x);

// Upper tail of chi-squared(df) at `statistic`: {p, log p}.
std::pair<double, double> ChisqTail(double statistic, int df);

// Pearson test on the table after dropping empty rows and columns.
TestResult ChisqTest(const ContingencyTable& table);

// Standard-normal upper-tail quantile for tail probability exp(log_q).
double NormalUpperQuantile(double q, double log_q);

// (1 - p)-quantile of chi-squared with one degree of freedom.
double Chisq1Quantile(double p_value, double log_p);
inline double Chisq1Quantile(const TestResult& r) {
  return Chisq1Quantile(r.p_value, r.log_p);
}

// The ceil(q * n)-th order statistic of xs; q = 0 gives the minimum.
double EmpiricalQuantile(std::span<const double> xs, double q);

// Category 1..m for each value, cutting at the j/m sample quantiles with ties
// at a cut going to the lower category. Entries whose missing flag is set get
// category 0.
std::vector<int> QuantileBins(std::span<const double> values,
                              std::span<const uint8_t> missing, int m);

double PearsonCorr(std::span<const double> a, std::span<const double> b);

}  // namespace vimp::stats

#endif  // VIMP_STATS_HPP_
