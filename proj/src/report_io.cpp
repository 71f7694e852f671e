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

#include "vimp/report_io.hpp"

#include <cmath>
#include <fstream>

#include "json.hpp"
#include "vimp/error.hpp"

namespace vimp {
namespace {

nlohmann::json NumberOrNull(double x) {
  if (std::isnan(x) || std::isinf(x)) return nullptr;
  return x;
}

}  // namespace

std::string ImportanceCsv(const ImportanceReport& report, Method method) {
  std::string out = "name,v,v_bar,VI,normalized,important,method\n";
  for (size_t k = 0; k < report.size(); ++k) {
    out += QuoteCsvField(report.names[k]) + "," + FormatNumber(report.raw[k]) + "," +
           FormatNumber(report.perm_mean[k]) + "," + FormatNumber(report.vi[k]) + "," +
           FormatNumber(report.normalized[k]) + "," +
           (report.important[k] ? "true" : "false") + "," + MethodName(method) + "\n";
  }
  return out;
}

std::string ScoresCsv(const std::vector<std::string>& names, const std::vector<double>& scores,
                      Method method) {
  std::string out = "name,v,v_bar,VI,normalized,important,method\n";
  for (size_t k = 0; k < names.size(); ++k) {
    const std::string score = FormatNumber(scores[k]);
    out += QuoteCsvField(names[k]) + "," + score + ",NA," + score + ",NA,NA," +
           MethodName(method) + "\n";
  }
  return out;
}

std::string ImportanceJson(const ImportanceReport& report) {
  nlohmann::ordered_json doc;
  doc["method"] = "guide";
  doc["permutations"] = report.permutations;
  doc["seed"] = report.seed;
  doc["alpha"] = report.thresholded ? NumberOrNull(report.alpha) : nullptr;
  doc["v_star"] = report.thresholded ? NumberOrNull(report.v_star) : nullptr;
  doc["m"] = report.m;
  doc["v_tilde"] = report.normalized_defined ? NumberOrNull(report.v_tilde) : nullptr;
  doc["normalized_defined"] = report.normalized_defined;
  if (report.thresholded && !report.normalized_defined) {
    doc["warning"] = "no variable exceeds the permutation threshold; normalized equals VI";
  }
  doc["perm_max"] = report.perm_max;
  auto& vars = doc["variables"] = nlohmann::ordered_json::array();
  for (size_t k = 0; k < report.size(); ++k) {
    nlohmann::ordered_json v;
    v["name"] = report.names[k];
    v["v"] = NumberOrNull(report.raw[k]);
    v["v_bar"] = NumberOrNull(report.perm_mean[k]);
    v["VI"] = NumberOrNull(report.vi[k]);
    v["normalized"] = NumberOrNull(report.normalized[k]);
    v["important"] = report.important[k] != 0;
    vars.push_back(std::move(v));
  }
  return doc.dump(2) + "\n";
}

std::string BiasSummaryCsv(const BiasReport& report) {
  std::string out = "variable,mean,se,lower,upper\n";
  for (size_t k = 0; k < report.names.size(); ++k) {
    const double m = report.means[k], se = report.ses[k];
    out += QuoteCsvField(report.names[k]) + "," + FormatNumber(m) + "," + FormatNumber(se) +
           "," + FormatNumber(m - 2.0 * se) + "," + FormatNumber(m + 2.0 * se) + "\n";
  }
  return out;
}

std::string BiasTrialsCsv(const BiasReport& report) {
  std::string out = "trial,variable,score\n";
  for (size_t t = 0; t < report.scores.size(); ++t) {
    for (size_t k = 0; k < report.names.size(); ++k) {
      out += std::to_string(t + 1) + "," + QuoteCsvField(report.names[k]) + "," +
             FormatNumber(report.scores[t][k]) + "\n";
    }
  }
  return out;
}

std::string PredValueCsv(const PredValueReport& report) {
  std::string out = "# S0=" + FormatNumber(report.s0) + "\n# S=" + FormatNumber(report.s_all) +
                    "\n# scheme=" + report.scheme + "\n# seed=" + std::to_string(report.seed) +
                    "\nvariable,S_j,S_minus_j,MPV,CPV\n";
  for (size_t j = 0; j < report.names.size(); ++j) {
    out += QuoteCsvField(report.names[j]) + "," + FormatNumber(report.s_only[j]) + "," +
           FormatNumber(report.s_without[j]) + "," + FormatNumber(report.mpv[j]) + "," +
           FormatNumber(report.cpv[j]) + "\n";
  }
  return out;
}

void WriteTextFile(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCode::kIo, "cannot write '" + path + "'");
  out << contents;
  if (!out) Fail(ErrorCode::kIo, "error writing '" + path + "'");
}

}  // namespace vimp
