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

#ifndef VIMP_DATASET_HPP_
#define VIMP_DATASET_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "vimp/rng.hpp"

namespace vimp {

enum class Role { kDependent, kOrdinal, kCategorical, kExcluded };

char RoleLetter(Role role);

// A predictor column. Ordinal cells live in `numeric`; categorical cells are
// dense level ids 0..L-1 in `codes` with names in `levels`. Missing cells are
// flagged in `missing` (their numeric value is NaN, their code is -1).
struct Column {
  std::string name;
  Role role = Role::kOrdinal;
  std::vector<double> numeric;
  std::vector<int32_t> codes;
  std::vector<std::string> levels;
  std::vector<uint8_t> missing;

  size_t size() const { return missing.size(); }
  bool is_categorical() const { return role == Role::kCategorical; }
  bool is_missing(size_t row) const { return missing[row] != 0; }
  int num_levels() const { return static_cast<int>(levels.size()); }

  static Column Ordinal(std::string name, std::vector<double> values);
  // Values are level ids; ids < 0 are missing. Level names default to the id.
  static Column Categorical(std::string name, std::vector<int32_t> codes,
                            std::vector<std::string> levels = {});
};

// Immutable table of predictors plus one complete numeric response.
// Copies share the predictor columns.
class Dataset {
 public:
  Dataset(std::string response_name, std::vector<double> response,
          std::vector<Column> predictors);

  size_t n_rows() const { return response_.size(); }
  size_t n_predictors() const { return predictors_->size(); }
  const std::string& response_name() const { return response_name_; }
  std::span<const double> response() const { return response_; }
  const Column& predictor(size_t k) const { return (*predictors_)[k]; }
  const std::vector<Column>& predictors() const { return *predictors_; }

  // Same predictors (shared), new response.
  Dataset WithResponse(std::vector<double> response) const;
  // New dataset holding only the listed predictor columns, in that order.
  Dataset SelectPredictors(std::span<const size_t> keep) const;

 private:
  std::string response_name_;
  std::vector<double> response_;
  std::shared_ptr<const std::vector<Column>> predictors_;
};

std::vector<std::string> DefaultNaTokens();

// Loads an RFC-4180 CSV with a header row plus a roles file of
// "<column-name> <d|n|c|x>" lines.
Dataset LoadCsv(const std::string& data_path, const std::string& roles_path,
                const std::vector<std::string>& na_tokens = DefaultNaTokens());
Dataset ParseCsv(const std::string& csv_text, const std::string& roles_text,
                 const std::vector<std::string>& na_tokens = DefaultNaTokens());

// Canonical writer: response first, then predictors; missing cells as NA.
void WriteCsv(const Dataset& ds, const std::string& data_path,
              const std::string& roles_path);
std::string FormatCsv(const Dataset& ds);
std::string FormatRoles(const Dataset& ds);

// Parses one CSV document into rows of fields.
std::vector<std::vector<std::string>> ParseCsvRecords(const std::string& text);
std::string QuoteCsvField(const std::string& field);
// Shortest round-trip decimal representation.
std::string FormatNumber(double x);

// Uniform Fisher-Yates permutation of the response; predictors shared.
Dataset PermuteResponse(const Dataset& ds, Stream& stream);

struct ColumnSummary {
  std::string name;
  Role role = Role::kOrdinal;
  size_t n_missing = 0;
  int n_levels = 0;  // categorical only
  double min = 0.0;  // numeric columns with a non-missing value
  double max = 0.0;
};

std::vector<ColumnSummary> SummarizeColumns(const Dataset& ds);

}  // namespace vimp

#endif  // VIMP_DATASET_HPP_
