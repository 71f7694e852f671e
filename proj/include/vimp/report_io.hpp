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

#ifndef VIMP_REPORT_IO_HPP_
#define VIMP_REPORT_IO_HPP_

#include <string>

#include "vimp/importance.hpp"
#include "vimp/predvalue.hpp"
#include "vimp/simbench.hpp"

namespace vimp {

// name,v,v_bar,VI,normalized,important,method
std::string ImportanceCsv(const ImportanceReport& report, Method method = Method::kGuide);
// Global threshold metadata plus one object per variable.
std::string ImportanceJson(const ImportanceReport& report);

// Plain per-variable scores (rpart importance) in the importance CSV schema;
// v_bar, normalized and important are NA.
std::string ScoresCsv(const std::vector<std::string>& names, const std::vector<double>& scores,
                      Method method);

// variable,mean,se,lower,upper with lower/upper = mean -/+ 2 se.
std::string BiasSummaryCsv(const BiasReport& report);
// trial,variable,score
std::string BiasTrialsCsv(const BiasReport& report);

// "# key=value" lines for S0, S, scheme and seed, then
// variable,S_j,S_minus_j,MPV,CPV.
std::string PredValueCsv(const PredValueReport& report);

void WriteTextFile(const std::string& path, const std::string& contents);

}  // namespace vimp

#endif  // VIMP_REPORT_IO_HPP_
