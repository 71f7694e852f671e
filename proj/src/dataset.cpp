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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "vimp/error.hpp"

namespace vimp {
namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out << contents;
  if (!out) Fail(ErrorCode::kIo, "error writing '" + path + "'");
}

std::optional<double> ParseNumber(const std::string& raw) {
  const std::string text = Trim(raw);
  if (text.empty()) return std::nullopt;
  const char* begin = text.data();
  if (*begin == '+') ++begin;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(begin, text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

Role ParseRole(const std::string& letter, const std::string& name) {
  if (letter == "d" || letter == "D") return Role::kDependent;
  if (letter == "n" || letter == "N") return Role::kOrdinal;
  if (letter == "c" || letter == "C") return Role::kCategorical;
  if (letter == "x" || letter == "X") return Role::kExcluded;
  Fail(ErrorCode::kValidation,
       "roles: unknown role '" + letter + "' for column '" + name + "'");
}

std::map<std::string, Role> ParseRoles(const std::string& text) {
  std::map<std::string, Role> roles;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = Trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto split = line.find_last_of(" \t");
    if (split == std::string::npos) {
      Fail(ErrorCode::kValidation,
           "roles: line " + std::to_string(line_no) + " needs '<column> <role>'");
    }
    const std::string name = Trim(line.substr(0, split));
    const Role role = ParseRole(line.substr(split + 1), name);
    if (!roles.emplace(name, role).second) {
      Fail(ErrorCode::kValidation, "roles: column '" + name + "' listed twice");
    }
  }
  return roles;
}

}  // namespace

char RoleLetter(Role role) {
  switch (role) {
    case Role::kDependent: return 'd';
    case Role::kOrdinal: return 'n';
    case Role::kCategorical: return 'c';
    case Role::kExcluded: return 'x';
  }
  return '?';
}

Column Column::Ordinal(std::string name, std::vector<double> values) {
  Column col;
  col.name = std::move(name);
  col.role = Role::kOrdinal;
  col.missing.resize(values.size());
  for (size_t i = 0; i < values.size(); ++i) col.missing[i] = std::isnan(values[i]);
  col.numeric = std::move(values);
  return col;
}

Column Column::Categorical(std::string name, std::vector<int32_t> codes,
                           std::vector<std::string> levels) {
  Column col;
  col.name = std::move(name);
  col.role = Role::kCategorical;
  int32_t max_code = -1;
  col.missing.resize(codes.size());
  for (size_t i = 0; i < codes.size(); ++i) {
    if (codes[i] < 0) {
      codes[i] = -1;
      col.missing[i] = 1;
    }
    max_code = std::max(max_code, codes[i]);
  }
  if (levels.empty()) {
    for (int32_t l = 0; l <= max_code; ++l) levels.push_back(std::to_string(l));
  } else if (static_cast<int32_t>(levels.size()) <= max_code) {
    Fail(ErrorCode::kValidation, "column '" + col.name + "': level id without a name");
  }
  col.codes = std::move(codes);
  col.levels = std::move(levels);
  return col;
}

Dataset::Dataset(std::string response_name, std::vector<double> response,
                 std::vector<Column> predictors)
    : response_name_(std::move(response_name)),
      response_(std::move(response)),
      predictors_(std::make_shared<const std::vector<Column>>(std::move(predictors))) {
  if (response_.empty()) Fail(ErrorCode::kValidation, "dataset has no rows");
  for (size_t i = 0; i < response_.size(); ++i) {
    if (!std::isfinite(response_[i])) {
      Fail(ErrorCode::kValidation, "row " + std::to_string(i + 1) + ", column '" +
                                       response_name_ + "': response is missing");
    }
  }
  for (const Column& col : *predictors_) {
    if (col.size() != response_.size()) {
      Fail(ErrorCode::kValidation, "column '" + col.name + "' has the wrong length");
    }
    if (col.role != Role::kOrdinal && col.role != Role::kCategorical) {
      Fail(ErrorCode::kValidation, "column '" + col.name + "' is not a predictor");
    }
  }
}

Dataset Dataset::WithResponse(std::vector<double> response) const {
  if (response.size() != response_.size()) {
    Fail(ErrorCode::kValidation, "replacement response has the wrong length");
  }
  Dataset copy = *this;
  copy.response_ = std::move(response);
  return copy;
}

Dataset Dataset::SelectPredictors(std::span<const size_t> keep) const {
  std::vector<Column> cols;
  cols.reserve(keep.size());
  for (size_t k : keep) {
    if (k >= n_predictors()) Fail(ErrorCode::kInvalidArgument, "predictor index out of range");
    cols.push_back(predictor(k));
  }
  return Dataset(response_name_, response_, std::move(cols));
}

std::vector<std::string> DefaultNaTokens() { return {"NA", ""}; }

std::vector<std::vector<std::string>> ParseCsvRecords(const std::string& text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  size_t i = 0;
  if (text.compare(0, 3, "\xEF\xBB\xBF") == 0) i = 3;
  const auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_started = false;
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
  };
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (in_quotes) {
      if (ch == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (field_started && !field.empty()) {
          Fail(ErrorCode::kParse, "csv: stray quote in record " +
                                      std::to_string(records.size() + 1));
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') ++i;
        end_record();
        break;
      case '\n':
        end_record();
        break;
      default:
        field.push_back(ch);
        field_started = true;
    }
  }
  if (in_quotes) Fail(ErrorCode::kParse, "csv: unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

std::string QuoteCsvField(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string quoted = "\"";
  for (char ch : field) {
    if (ch == '"') quoted.push_back('"');
    quoted.push_back(ch);
  }
  quoted.push_back('"');
  return quoted;
}

std::string FormatNumber(double x) {
  if (std::isnan(x)) return "NA";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

Dataset ParseCsv(const std::string& csv_text, const std::string& roles_text,
                 const std::vector<std::string>& na_tokens) {
  const auto records = ParseCsvRecords(csv_text);
  if (records.empty()) Fail(ErrorCode::kParse, "csv: missing header row");
  const auto& header = records[0];
  auto roles = ParseRoles(roles_text);

  std::vector<Role> col_roles;
  int dependent = -1;
  for (size_t c = 0; c < header.size(); ++c) {
    const std::string name = Trim(header[c]);
    const auto it = roles.find(name);
    if (it == roles.end()) {
      Fail(ErrorCode::kValidation, "roles: no role for column '" + name + "'");
    }
    const Role role = it->second;
    col_roles.push_back(role);
    roles.erase(it);
    if (role == Role::kDependent) {
      if (dependent >= 0) Fail(ErrorCode::kValidation, "roles: more than one dependent column");
      dependent = static_cast<int>(c);
    }
  }
  if (!roles.empty()) {
    Fail(ErrorCode::kValidation,
         "roles: column '" + roles.begin()->first + "' not in the data header");
  }
  if (dependent < 0) Fail(ErrorCode::kValidation, "roles: no dependent column");

  const size_t n_rows = records.size() - 1;
  if (n_rows < 2) Fail(ErrorCode::kValidation, "csv: need at least two data rows");
  const auto is_na = [&](const std::string& cell) {
    const std::string t = Trim(cell);
    return std::find(na_tokens.begin(), na_tokens.end(), t) != na_tokens.end();
  };
  const auto cell_error = [&](ErrorCode code, size_t row, size_t col, const std::string& what) {
    Fail(code, "row " + std::to_string(row) + ", column '" + Trim(header[col]) + "': " + what);
  };

  std::vector<double> response(n_rows);
  std::vector<Column> predictors;
  std::vector<std::unordered_map<std::string, int32_t>> level_maps;
  std::vector<int> slot(header.size(), -1);
  for (size_t c = 0; c < header.size(); ++c) {
    if (col_roles[c] != Role::kOrdinal && col_roles[c] != Role::kCategorical) continue;
    slot[c] = static_cast<int>(predictors.size());
    Column col;
    col.name = Trim(header[c]);
    col.role = col_roles[c];
    col.missing.assign(n_rows, 0);
    if (col.is_categorical()) {
      col.codes.assign(n_rows, -1);
    } else {
      col.numeric.assign(n_rows, std::numeric_limits<double>::quiet_NaN());
    }
    predictors.push_back(std::move(col));
    level_maps.emplace_back();
  }

  for (size_t r = 0; r < n_rows; ++r) {
    const auto& rec = records[r + 1];
    if (rec.size() != header.size()) {
      Fail(ErrorCode::kParse, "row " + std::to_string(r + 1) + ": expected " +
                                  std::to_string(header.size()) + " fields, found " +
                                  std::to_string(rec.size()));
    }
    for (size_t c = 0; c < header.size(); ++c) {
      const std::string& cell = rec[c];
      if (static_cast<int>(c) == dependent) {
        if (is_na(cell)) cell_error(ErrorCode::kValidation, r + 1, c, "response is missing");
        const auto value = ParseNumber(cell);
        if (!value) cell_error(ErrorCode::kParse, r + 1, c, "cannot parse '" + cell + "' as a number");
        response[r] = *value;
        continue;
      }
      if (slot[c] < 0) continue;
      Column& col = predictors[slot[c]];
      if (is_na(cell)) {
        col.missing[r] = 1;
        continue;
      }
      if (col.is_categorical()) {
        auto& levels = level_maps[slot[c]];
        const std::string key = Trim(cell);
        auto [it, inserted] = levels.emplace(key, static_cast<int32_t>(col.levels.size()));
        if (inserted) col.levels.push_back(key);
        col.codes[r] = it->second;
      } else {
        const auto value = ParseNumber(cell);
        if (!value) cell_error(ErrorCode::kParse, r + 1, c, "cannot parse '" + cell + "' as a number");
        col.numeric[r] = *value;
      }
    }
  }
  return Dataset(Trim(header[dependent]), std::move(response), std::move(predictors));
}

Dataset LoadCsv(const std::string& data_path, const std::string& roles_path,
                const std::vector<std::string>& na_tokens) {
  return ParseCsv(ReadFile(data_path), ReadFile(roles_path), na_tokens);
}

std::string FormatCsv(const Dataset& ds) {
  std::string out = QuoteCsvField(ds.response_name());
  for (const Column& col : ds.predictors()) out += "," + QuoteCsvField(col.name);
  out += "\n";
  for (size_t r = 0; r < ds.n_rows(); ++r) {
    out += FormatNumber(ds.response()[r]);
    for (const Column& col : ds.predictors()) {
      out += ",";
      if (col.is_missing(r)) {
        out += "NA";
      } else if (col.is_categorical()) {
        out += QuoteCsvField(col.levels[col.codes[r]]);
      } else {
        out += FormatNumber(col.numeric[r]);
      }
    }
    out += "\n";
  }
  return out;
}

std::string FormatRoles(const Dataset& ds) {
  std::string out = ds.response_name() + " d\n";
  for (const Column& col : ds.predictors()) {
    out += col.name + " " + RoleLetter(col.role) + "\n";
  }
  return out;
}

void WriteCsv(const Dataset& ds, const std::string& data_path,
              const std::string& roles_path) {
  WriteFile(data_path, FormatCsv(ds));
  WriteFile(roles_path, FormatRoles(ds));
}

Dataset PermuteResponse(const Dataset& ds, Stream& stream) {
  std::vector<double> y(ds.response().begin(), ds.response().end());
  for (size_t i = y.size(); i > 1; --i) {
    const size_t j = stream.Below(i);
    std::swap(y[i - 1], y[j]);
  }
  return ds.WithResponse(std::move(y));
}

std::vector<ColumnSummary> SummarizeColumns(const Dataset& ds) {
  std::vector<ColumnSummary> out;
  ColumnSummary response{ds.response_name(), Role::kDependent, 0, 0, 0.0, 0.0};
  const auto [lo, hi] = std::minmax_element(ds.response().begin(), ds.response().end());
  response.min = *lo;
  response.max = *hi;
  out.push_back(response);
  for (const Column& col : ds.predictors()) {
    ColumnSummary s;
    s.name = col.name;
    s.role = col.role;
    s.n_missing = static_cast<size_t>(std::count(col.missing.begin(), col.missing.end(), 1));
    if (col.is_categorical()) {
      std::vector<uint8_t> seen(col.levels.size(), 0);
      for (size_t r = 0; r < col.size(); ++r) {
        if (!col.is_missing(r)) seen[col.codes[r]] = 1;
      }
      s.n_levels = static_cast<int>(std::count(seen.begin(), seen.end(), 1));
    } else {
      bool any = false;
      for (size_t r = 0; r < col.size(); ++r) {
        if (col.is_missing(r)) continue;
        const double v = col.numeric[r];
        s.min = any ? std::min(s.min, v) : v;
        s.max = any ? std::max(s.max, v) : v;
        any = true;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace vimp
