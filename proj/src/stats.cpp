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

#include "vimp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <tuple>

#include "vimp/error.hpp"

namespace vimp::stats {
namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEpsilon = 1e-16;
constexpr double kTiny = 1e-300;

// log P(a, x) via the power series; valid for x < a + 1.
double LogGammaPSeries(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIterations; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEpsilon) break;
  }
  return std::log(sum) - x + a * std::log(x) - std::lgamma(a);
}

// log Q(a, x) via the Lentz continued fraction; valid for x >= a + 1.
double LogGammaQFraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIterations; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEpsilon) break;
  }
  return std::log(h) - x + a * std::log(x) - std::lgamma(a);
}

// Wichura's AS241 (PPND16): lower-tail standard normal quantile of p. The
// tail branch takes log(min(p, 1 - p)) directly so p may underflow.
double NormalLowerQuantile(double p, double log_tail, bool upper_half) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((r * 2509.0809287301226727 + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((r * 5226.495278852545925 + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = std::sqrt(-log_tail);
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((r * 7.7454501427834140764e-4 + 0.0227238449892691845833) * r +
                  0.24178072517745061177) * r + 1.27045825245236838258) * r +
                3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((r * 1.05075007164441684324e-9 + 5.475938084995344946e-4) * r +
                  0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((r * 2.01033439929228813265e-7 + 2.71155556874348757815e-5) * r +
                  0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((r * 2.04426310338993978564e-15 + 1.4215117583164458887e-7) * r +
                  1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
  }
  return upper_half ? value : -value;
}

}  // namespace

ContingencyTable::ContingencyTable(int rows, int cols)
    : rows_(rows), cols_(cols), counts_(static_cast<size_t>(rows) * cols, 0) {
  if (rows < 1 || cols < 1) {
    Fail(ErrorCode::kDomain, "contingency table needs at least one row and column");
  }
}

int64_t ContingencyTable::total() const {
  int64_t sum = 0;
  for (int64_t c : counts_) sum += c;
  return sum;
}

double LogGammaQ(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return std::log1p(-std::exp(LogGammaPSeries(a, x)));
  return LogGammaQFraction(a, x);
}

std::pair<double, double> ChisqTail(double statistic, int df) {
  if (!(statistic >= 0.0)) {
    Fail(ErrorCode::kDomain, "chi-squared statistic must be non-negative");
  }
  if (df < 1) Fail(ErrorCode::kDomain, "chi-squared df must be positive");
  if (statistic == 0.0) return {1.0, 0.0};
  const double log_p = std::min(0.0, LogGammaQ(0.5 * df, 0.5 * statistic));
  return {std::exp(log_p), log_p};
}

TestResult ChisqTest(const ContingencyTable& table) {
  const int rows = table.rows();
  const int cols = table.cols();
  std::vector<int64_t> row_total(rows, 0);
  std::vector<int64_t> col_total(cols, 0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int64_t n = table.at(r, c);
      if (n < 0) Fail(ErrorCode::kDomain, "negative contingency count");
      row_total[r] += n;
      col_total[c] += n;
    }
  }
  int64_t total = 0;
  for (int64_t n : row_total) total += n;
  if (total == 0) Fail(ErrorCode::kDomain, "empty contingency table");

  const auto nonzero = [](const std::vector<int64_t>& v) {
    return static_cast<int>(std::count_if(v.begin(), v.end(),
                                          [](int64_t n) { return n > 0; }));
  };
  TestResult result;
  result.df = (nonzero(row_total) - 1) * (nonzero(col_total) - 1);
  if (result.df <= 0) {
    result.df = 0;
    return result;
  }
  const double n = static_cast<double>(total);
  // Cell terms are summed in sorted order so that permuting rows or columns
  // (relabeling levels) reproduces the statistic bit for bit.
  std::vector<double> terms;
  terms.reserve(static_cast<size_t>(rows) * cols);
  for (int r = 0; r < rows; ++r) {
    if (row_total[r] == 0) continue;
    for (int c = 0; c < cols; ++c) {
      if (col_total[c] == 0) continue;
      const double expected =
          static_cast<double>(row_total[r]) * static_cast<double>(col_total[c]) / n;
      const double diff = static_cast<double>(table.at(r, c)) - expected;
      terms.push_back(diff * diff / expected);
    }
  }
  std::sort(terms.begin(), terms.end());
  double statistic = 0.0;
  for (double t : terms) statistic += t;
  result.statistic = statistic;
  std::tie(result.p_value, result.log_p) = ChisqTail(statistic, result.df);
  return result;
}

double NormalUpperQuantile(double q, double log_q) {
  if (q >= 0.5) {
    return -NormalLowerQuantile(q, std::log1p(-q), /*upper_half=*/true);
  }
  return -NormalLowerQuantile(q, log_q, /*upper_half=*/false);
}

double Chisq1Quantile(double p_value, double log_p) {
  if (std::isnan(log_p)) log_p = std::log(p_value);
  if (p_value >= 1.0 || log_p >= 0.0) return 0.0;
  log_p = std::max(log_p, kLogPFloor);
  const double log_half = log_p - std::numbers::ln2;
  const double z = NormalUpperQuantile(std::exp(log_half), log_half);
  return z * z;
}

double EmpiricalQuantile(std::span<const double> xs, double q) {
  if (xs.empty()) Fail(ErrorCode::kDomain, "quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) Fail(ErrorCode::kDomain, "quantile level outside [0, 1]");
  const size_t n = xs.size();
  // Slack absorbs representation error in q * n (e.g. (1 - 0.05) * 100).
  auto rank = static_cast<size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
  rank = std::clamp<size_t>(rank, 1, n);
  std::vector<double> sorted(xs.begin(), xs.end());
  std::nth_element(sorted.begin(), sorted.begin() + (rank - 1), sorted.end());
  return sorted[rank - 1];
}

std::vector<int> QuantileBins(std::span<const double> values,
                              std::span<const uint8_t> missing, int m) {
  if (m < 2) Fail(ErrorCode::kDomain, "quantile binning needs at least two groups");
  if (missing.size() != values.size()) {
    Fail(ErrorCode::kDomain, "missing flags do not match values");
  }
  std::vector<double> present;
  present.reserve(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    if (!missing[i]) present.push_back(values[i]);
  }
  if (present.empty()) Fail(ErrorCode::kDomain, "quantile binning of all-missing values");

  const size_t n = present.size();
  std::vector<double> cuts;
  cuts.reserve(m - 1);
  for (int j = 1; j < m; ++j) {
    const size_t rank = std::max<size_t>(1, (j * n + m - 1) / m);
    std::nth_element(present.begin(), present.begin() + (rank - 1), present.end());
    cuts.push_back(present[rank - 1]);
  }
  std::vector<int> category(values.size(), 0);
  for (size_t i = 0; i < values.size(); ++i) {
    if (missing[i]) continue;
    int c = 1;
    for (double cut : cuts) c += values[i] > cut;
    category[i] = c;
  }
  return category;
}

double PearsonCorr(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.size() < 2) {
    Fail(ErrorCode::kDomain, "correlation needs two equal-length vectors of length >= 2");
  }
  const double n = static_cast<double>(a.size());
  double mean_a = 0.0, mean_b = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double saa = 0.0, sbb = 0.0, sab = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    saa += da * da;
    sbb += db * db;
    sab += da * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    Fail(ErrorCode::kZeroVariance, "correlation of a zero-variance vector");
  }
  return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

}  // namespace vimp::stats
