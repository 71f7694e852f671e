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

#include "vimp/dataset.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>

#include "gtest/gtest.h"
#include "vimp/error.hpp"

namespace vimp {
namespace {

const char kCsv[] =
    "y,age,color,id\n"
    "1.5,30,red,a\n"
    "2,NA,blue,b\n"
    "-0.25,41,red,c\n"
    "3,27,,d\n";
const char kRoles[] =
    "# response and predictors\n"
    "y d\n"
    "age n\n"
    "color c\n"
    "id x\n";

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kIo;
}

std::string MessageOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

void ExpectSameDataset(const Dataset& a, const Dataset& b) {
  ASSERT_EQ(a.n_rows(), b.n_rows());
  ASSERT_EQ(a.n_predictors(), b.n_predictors());
  EXPECT_EQ(a.response_name(), b.response_name());
  for (size_t i = 0; i < a.n_rows(); ++i) EXPECT_EQ(a.response()[i], b.response()[i]);
  for (size_t k = 0; k < a.n_predictors(); ++k) {
    const Column& x = a.predictor(k);
    const Column& y = b.predictor(k);
    EXPECT_EQ(x.name, y.name);
    EXPECT_EQ(x.role, y.role);
    EXPECT_EQ(x.missing, y.missing);
    EXPECT_EQ(x.codes, y.codes);
    EXPECT_EQ(x.levels, y.levels);
    ASSERT_EQ(x.numeric.size(), y.numeric.size());
    for (size_t i = 0; i < x.numeric.size(); ++i) {
      if (!x.is_missing(i)) EXPECT_EQ(x.numeric[i], y.numeric[i]);
    }
  }
}

TEST(ParseCsv, RolesAndMissing) {
  const auto ds = ParseCsv(kCsv, kRoles);
  EXPECT_EQ(ds.n_rows(), 4u);
  EXPECT_EQ(ds.response_name(), "y");
  ASSERT_EQ(ds.n_predictors(), 2u);
  EXPECT_EQ(ds.response()[2], -0.25);
  const Column& age = ds.predictor(0);
  EXPECT_EQ(age.role, Role::kOrdinal);
  EXPECT_EQ(age.missing, (std::vector<uint8_t>{0, 1, 0, 0}));
  EXPECT_EQ(age.numeric[3], 27.0);
  const Column& color = ds.predictor(1);
  EXPECT_EQ(color.role, Role::kCategorical);
  EXPECT_EQ(color.levels, (std::vector<std::string>{"red", "blue"}));
  EXPECT_EQ(color.codes, (std::vector<int32_t>{0, 1, 0, -1}));
  EXPECT_TRUE(color.is_missing(3));
}

TEST(ParseCsv, CustomNaTokens) {
  const auto ds = ParseCsv("y,x\n1,?\n2,NA\n", "y d\nx c\n", {"?"});
  EXPECT_TRUE(ds.predictor(0).is_missing(0));
  EXPECT_FALSE(ds.predictor(0).is_missing(1));
  EXPECT_EQ(ds.predictor(0).levels, (std::vector<std::string>{"NA"}));
}

TEST(ParseCsv, QuotedFieldsAndBom) {
  const auto ds = ParseCsv("\xEF\xBB\xBFy,\"name, full\"\r\n1,\"a \"\"q\"\"\"\r\n2,b\r\n",
                           "y d\nname, full c\n");
  EXPECT_EQ(ds.predictor(0).name, "name, full");
  EXPECT_EQ(ds.predictor(0).levels[0], "a \"q\"");
}

TEST(ParseCsv, FirstAppearanceLevelOrder) {
  const auto ds = ParseCsv("y,c\n1,b\n2,a\n3,b\n4,c\n", "y d\nc c\n");
  EXPECT_EQ(ds.predictor(0).levels, (std::vector<std::string>{"b", "a", "c"}));
  EXPECT_EQ(ds.predictor(0).codes, (std::vector<int32_t>{0, 1, 0, 2}));
}

TEST(ParseCsv, MissingResponseNamesRowAndColumn) {
  const auto load = [] { ParseCsv("y,x\n1,2\nNA,3\n", "y d\nx n\n"); };
  EXPECT_EQ(CodeOf(load), ErrorCode::kValidation);
  const std::string msg = MessageOf(load);
  EXPECT_NE(msg.find("row 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("'y'"), std::string::npos) << msg;
}

TEST(ParseCsv, BadNumberNamesRowAndColumn) {
  const auto load = [] { ParseCsv("y,x\n1,2\n2,abc\n", "y d\nx n\n"); };
  EXPECT_EQ(CodeOf(load), ErrorCode::kParse);
  const std::string msg = MessageOf(load);
  EXPECT_NE(msg.find("row 2, column 'x'"), std::string::npos) << msg;
}

TEST(ParseCsv, RoleErrors) {
  EXPECT_EQ(CodeOf([] { ParseCsv("y,x\n1,2\n3,4\n", "y d\n"); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { ParseCsv("y,x\n1,2\n3,4\n", "y d\nx q\n"); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { ParseCsv("y,x\n1,2\n3,4\n", "y n\nx n\n"); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { ParseCsv("y,x\n1,2\n3,4\n", "y d\nx d\n"); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { ParseCsv("y,x\n1,2\n3,4\n", "y d\nx n\nz n\n"); }),
            ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { ParseCsv("y,x\n1,2\n3,4\n", "y d\nx n\nx c\n"); }),
            ErrorCode::kValidation);
}

TEST(ParseCsv, ShapeErrors) {
  EXPECT_EQ(CodeOf([] { ParseCsv("y,x\n1,2\n", "y d\nx n\n"); }), ErrorCode::kValidation);
  EXPECT_EQ(CodeOf([] { ParseCsv("y,x\n1,2\n3\n", "y d\nx n\n"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseCsv("y,x\n1,\"2\n3,4\n", "y d\nx n\n"); }), ErrorCode::kParse);
  EXPECT_EQ(CodeOf([] { ParseCsv("", "y d\n"); }), ErrorCode::kParse);
}

TEST(LoadCsv, MissingFileIsIoError) {
  EXPECT_EQ(CodeOf([] { LoadCsv("/nonexistent/data.csv", "/nonexistent/roles.txt"); }),
            ErrorCode::kIo);
}

TEST(Dataset, RoundTripThroughCanonicalWriter) {
  const auto ds = ParseCsv(kCsv, kRoles);
  const auto again = ParseCsv(FormatCsv(ds), FormatRoles(ds));
  ExpectSameDataset(ds, again);
  EXPECT_EQ(FormatCsv(again), FormatCsv(ds));
}

TEST(Dataset, RoundTripThroughFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "vimp_dataset_test";
  std::filesystem::create_directories(dir);
  const auto ds = ParseCsv(kCsv, kRoles);
  WriteCsv(ds, (dir / "d.csv").string(), (dir / "r.txt").string());
  ExpectSameDataset(ds, LoadCsv((dir / "d.csv").string(), (dir / "r.txt").string()));
  std::filesystem::remove_all(dir);
}

TEST(Dataset, NumbersRoundTripExactly) {
  std::vector<double> y{0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23};
  std::vector<Column> cols{Column::Ordinal("x", {M_PI, NAN, -0.0, 1e-12})};
  const Dataset ds("y", y, std::move(cols));
  ExpectSameDataset(ds, ParseCsv(FormatCsv(ds), FormatRoles(ds)));
}

TEST(Dataset, ConstructorValidation) {
  EXPECT_THROW(Dataset("y", {}, {}), Error);
  EXPECT_THROW(Dataset("y", {1.0, NAN}, {}), Error);
  std::vector<Column> short_col{Column::Ordinal("x", {1.0})};
  EXPECT_THROW(Dataset("y", {1.0, 2.0}, short_col), Error);
}

TEST(Dataset, SelectPredictors) {
  const auto ds = ParseCsv(kCsv, kRoles);
  const auto only = ds.SelectPredictors(std::vector<size_t>{1});
  ASSERT_EQ(only.n_predictors(), 1u);
  EXPECT_EQ(only.predictor(0).name, "color");
  EXPECT_THROW(ds.SelectPredictors(std::vector<size_t>{5}), Error);
}

TEST(PermuteResponse, PreservesPredictorsAndMultiset) {
  const auto ds = ParseCsv(kCsv, kRoles);
  Stream stream(42);
  const auto permuted = PermuteResponse(ds, stream);
  for (size_t k = 0; k < ds.n_predictors(); ++k) {
    EXPECT_EQ(&ds.predictor(k), &permuted.predictor(k));
  }
  std::vector<double> a(ds.response().begin(), ds.response().end());
  std::vector<double> b(permuted.response().begin(), permuted.response().end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
}

TEST(PermuteResponse, FixedSeedIsReproducible) {
  const auto ds = ParseCsv("y,x\n1,1\n2,2\n3,3\n4,4\n5,5\n", "y d\nx n\n");
  Stream s1(42), s2(42);
  const auto a = PermuteResponse(ds, s1);
  const auto b = PermuteResponse(ds, s2);
  EXPECT_TRUE(std::equal(a.response().begin(), a.response().end(), b.response().begin()));
}

TEST(PermuteResponse, EveryOrderReachable) {
  const auto ds = ParseCsv("y,x\n1,1\n2,2\n3,3\n", "y d\nx n\n");
  Stream s(1);
  std::map<std::vector<double>, int> seen;
  for (int i = 0; i < 6000; ++i) {
    const auto p = PermuteResponse(ds, s);
    ++seen[std::vector<double>(p.response().begin(), p.response().end())];
  }
  EXPECT_EQ(seen.size(), 6u);
  for (const auto& [order, count] : seen) EXPECT_NEAR(count, 1000, 150);
}

TEST(SummarizeColumns, Examples) {
  const auto ds = ParseCsv("y,a,c\n1,1,a\n2,2,b\n3,3,a\n", "y d\na n\nc c\n");
  const auto s = SummarizeColumns(ds);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[0].name, "y");
  EXPECT_EQ(s[0].role, Role::kDependent);
  EXPECT_EQ(s[1].n_missing, 0u);
  EXPECT_EQ(s[1].min, 1.0);
  EXPECT_EQ(s[1].max, 3.0);
  EXPECT_EQ(s[2].n_levels, 2);
  const auto with_na = SummarizeColumns(ParseCsv(kCsv, kRoles));
  EXPECT_EQ(with_na[1].n_missing, 1u);
  EXPECT_EQ(with_na[2].n_missing, 1u);
}

TEST(FormatNumber, ShortestAndNa) {
  EXPECT_EQ(FormatNumber(0.1), "0.1");
  EXPECT_EQ(FormatNumber(2.0), "2");
  EXPECT_EQ(FormatNumber(NAN), "NA");
}

TEST(QuoteCsvField, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(QuoteCsvField("plain"), "plain");
  EXPECT_EQ(QuoteCsvField("a,b"), "\"a,b\"");
  EXPECT_EQ(QuoteCsvField("say \"hi\""), "\"say \"\"hi\"\"\"");
}

}  // namespace
}  // namespace vimp
