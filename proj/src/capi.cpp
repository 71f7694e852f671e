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

#include "vimp/vimp.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <new>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "vimp/cart.hpp"
#include "vimp/dataset.hpp"
#include "vimp/error.hpp"
#include "vimp/importance.hpp"
#include "vimp/predvalue.hpp"
#include "vimp/report_io.hpp"
#include "vimp/simbench.hpp"

#ifndef VIMP_VERSION
#define VIMP_VERSION "0.0.0"
#endif

struct vimp_dataset {
  vimp::Dataset ds;
};

struct vimp_importance {
  vimp::Method method = vimp::Method::kGuide;
  vimp::ImportanceReport report;  // GUIDE
  std::vector<std::string> names;  // CART
  std::vector<double> scores;      // CART
};

struct vimp_bias {
  vimp::BiasReport report;
};

struct vimp_predvalue_report {
  vimp::PredValueReport report;
};

namespace {

thread_local std::string g_last_error;

template <typename Fn>
vimp_status Guarded(Fn&& fn) {
  try {
    fn();
    return VIMP_OK;
  } catch (const vimp::Error& e) {
    g_last_error = e.what();
    return static_cast<vimp_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return VIMP_ERR_INTERNAL;
}

void Require(bool condition, const char* what) {
  if (!condition) vimp::Fail(vimp::ErrorCode::kInvalidArgument, what);
}

vimp::TreeConfig ToConfig(const vimp_tree_options& t) {
  vimp::TreeConfig config;
  config.max_split_depth = t.max_split_depth;
  config.min_node_to_split = t.min_node_to_split;
  config.min_child = t.min_child;
  config.Validate();
  return config;
}

vimp::Method ToMethod(vimp_method m) {
  Require(m == VIMP_METHOD_GUIDE || m == VIMP_METHOD_CART, "unknown method");
  return m == VIMP_METHOD_GUIDE ? vimp::Method::kGuide : vimp::Method::kCart;
}

std::vector<std::string> SplitNames(const char* text) {
  std::vector<std::string> out;
  if (!text) return out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string ReadFile(const char* path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) vimp::Fail(vimp::ErrorCode::kIo, std::string("cannot open '") + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

extern "C" {

const char* vimp_version(void) { return VIMP_VERSION; }

const char* vimp_last_error(void) { return g_last_error.c_str(); }

void vimp_tree_options_default(vimp_tree_options* options) {
  if (!options) return;
  const vimp::TreeConfig config;
  options->max_split_depth = config.max_split_depth;
  options->min_node_to_split = config.min_node_to_split;
  options->min_child = config.min_child;
}

vimp_status vimp_dataset_load_csv(const char* data_path, const char* roles_path,
                                  const char* const* na_tokens, size_t n_na_tokens,
                                  vimp_dataset** out) {
  return Guarded([&] {
    Require(data_path && roles_path && out, "null argument");
    *out = nullptr;
    std::vector<std::string> tokens = vimp::DefaultNaTokens();
    if (na_tokens) tokens.assign(na_tokens, na_tokens + n_na_tokens);
    *out = new vimp_dataset{vimp::LoadCsv(data_path, roles_path, tokens)};
  });
}

void vimp_dataset_free(vimp_dataset* ds) { delete ds; }

size_t vimp_dataset_num_rows(const vimp_dataset* ds) { return ds ? ds->ds.n_rows() : 0; }

size_t vimp_dataset_num_predictors(const vimp_dataset* ds) {
  return ds ? ds->ds.n_predictors() : 0;
}

const char* vimp_dataset_predictor_name(const vimp_dataset* ds, size_t k) {
  if (!ds || k >= ds->ds.n_predictors()) return nullptr;
  return ds->ds.predictor(k).name.c_str();
}

vimp_status vimp_dataset_write_csv(const vimp_dataset* ds, const char* data_path,
                                   const char* roles_path) {
  return Guarded([&] {
    Require(ds && data_path && roles_path, "null argument");
    vimp::WriteCsv(ds->ds, data_path, roles_path);
  });
}

void vimp_score_options_default(vimp_score_options* options) {
  if (!options) return;
  options->permutations = 300;
  options->alpha = 0.05;
  options->seed = 0;
  options->threads = 0;
  options->method = VIMP_METHOD_GUIDE;
  vimp_tree_options_default(&options->tree);
}

vimp_status vimp_score(const vimp_dataset* ds, const vimp_score_options* options,
                       vimp_importance** out) {
  return Guarded([&] {
    Require(ds && options && out, "null argument");
    *out = nullptr;
    auto result = std::make_unique<vimp_importance>();
    result->method = ToMethod(options->method);
    const vimp::TreeConfig config = ToConfig(options->tree);
    if (result->method == vimp::Method::kCart) {
      for (const auto& c : ds->ds.predictors()) result->names.push_back(c.name);
      result->scores = vimp::RpartImportance(vimp::GrowCart(ds->ds, config),
                                             ds->ds.n_predictors());
    } else {
      vimp::ImportanceOptions opts;
      opts.permutations = options->permutations;
      opts.seed = options->seed;
      opts.threads = options->threads;
      opts.tree = config;
      result->report = vimp::BiasAdjusted(ds->ds, opts);
      vimp::ApplyThreshold(result->report, options->alpha);
    }
    *out = result.release();
  });
}

void vimp_importance_free(vimp_importance* report) { delete report; }

size_t vimp_importance_num_variables(const vimp_importance* report) {
  if (!report) return 0;
  return report->method == vimp::Method::kCart ? report->names.size() : report->report.size();
}

vimp_status vimp_importance_variable(const vimp_importance* report, size_t k,
                                     vimp_variable_score* out) {
  return Guarded([&] {
    Require(report && out, "null argument");
    Require(k < vimp_importance_num_variables(report), "variable index out of range");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (report->method == vimp::Method::kCart) {
      *out = {report->names[k].c_str(), report->scores[k], nan, report->scores[k], nan, -1};
      return;
    }
    const auto& r = report->report;
    *out = {r.names[k].c_str(), r.raw[k], r.perm_mean[k], r.vi[k], r.normalized[k],
            r.important[k] ? 1 : 0};
  });
}

vimp_status vimp_importance_threshold(const vimp_importance* report, vimp_threshold_info* out) {
  return Guarded([&] {
    Require(report && out, "null argument");
    Require(report->method == vimp::Method::kGuide, "CART reports carry no threshold");
    const auto& r = report->report;
    *out = {r.alpha, r.v_star, r.v_tilde, r.m, r.normalized_defined ? 1 : 0, r.permutations};
  });
}

vimp_status vimp_importance_write_csv(const vimp_importance* report, const char* path) {
  return Guarded([&] {
    Require(report && path, "null argument");
    vimp::WriteTextFile(path, report->method == vimp::Method::kCart
                                  ? vimp::ScoresCsv(report->names, report->scores,
                                                    vimp::Method::kCart)
                                  : vimp::ImportanceCsv(report->report));
  });
}

vimp_status vimp_importance_write_json(const vimp_importance* report, const char* path) {
  return Guarded([&] {
    Require(report && path, "null argument");
    Require(report->method == vimp::Method::kGuide, "JSON reports are GUIDE-only");
    vimp::WriteTextFile(path, vimp::ImportanceJson(report->report));
  });
}

void vimp_permtest_options_default(vimp_permtest_options* options) {
  if (!options) return;
  options->permutations = 1000;
  options->guide_permutations = 300;
  options->method = VIMP_METHOD_GUIDE;
  options->seed = 0;
  options->threads = 0;
  vimp_tree_options_default(&options->tree);
}

void vimp_simbench_options_default(vimp_simbench_options* options) {
  if (!options) return;
  options->model = "E0";
  options->trials = 1000;
  options->n = 400;
  options->method = VIMP_METHOD_GUIDE;
  options->permutations = 300;
  options->seed = 0;
  options->threads = 0;
  options->mcar_rate = 0.0;
  options->mcar_columns = nullptr;
  vimp_tree_options_default(&options->tree);
}

vimp_status vimp_permtest(const vimp_dataset* ds, const vimp_permtest_options* options,
                          vimp_bias** out) {
  return Guarded([&] {
    Require(ds && options && out, "null argument");
    *out = nullptr;
    auto report = vimp::PermutationBias(ds->ds, ToMethod(options->method),
                                        options->permutations, options->guide_permutations,
                                        options->seed, options->threads, ToConfig(options->tree));
    *out = new vimp_bias{std::move(report)};
  });
}

vimp_status vimp_simbench(const vimp_simbench_options* options, vimp_bias** out) {
  return Guarded([&] {
    Require(options && out, "null argument");
    *out = nullptr;
    const auto model = vimp::ParseSimModel(options->model ? options->model : "");
    Require(model.has_value(), "model must be one of E0..E5");
    Require(options->n >= 1, "n must be positive");
    Require(options->mcar_rate >= 0.0 && options->mcar_rate < 1.0, "mcar_rate must lie in [0, 1)");
    vimp::SimOptions sim;
    sim.model = *model;
    sim.method = ToMethod(options->method);
    sim.trials = options->trials;
    sim.n = options->n;
    sim.permutations = options->permutations;
    sim.seed = options->seed;
    sim.threads = options->threads;
    sim.tree = ToConfig(options->tree);
    sim.mcar_rate = options->mcar_rate;
    sim.mcar_columns = SplitNames(options->mcar_columns);
    *out = new vimp_bias{vimp::RunBiasExperiment(sim)};
  });
}

void vimp_bias_free(vimp_bias* report) { delete report; }

size_t vimp_bias_num_variables(const vimp_bias* report) {
  return report ? report->report.names.size() : 0;
}

int vimp_bias_trials(const vimp_bias* report) { return report ? report->report.trials : 0; }

int vimp_bias_overlap(const vimp_bias* report) {
  return report && report->report.overlap ? 1 : 0;
}

vimp_status vimp_bias_variable(const vimp_bias* report, size_t k, const char** name,
                               double* mean, double* se) {
  return Guarded([&] {
    Require(report, "null argument");
    Require(k < report->report.names.size(), "variable index out of range");
    if (name) *name = report->report.names[k].c_str();
    if (mean) *mean = report->report.means[k];
    if (se) *se = report->report.ses[k];
  });
}

vimp_status vimp_bias_write_summary_csv(const vimp_bias* report, const char* path) {
  return Guarded([&] {
    Require(report && path, "null argument");
    vimp::WriteTextFile(path, vimp::BiasSummaryCsv(report->report));
  });
}

vimp_status vimp_bias_write_trials_csv(const vimp_bias* report, const char* path) {
  return Guarded([&] {
    Require(report && path, "null argument");
    vimp::WriteTextFile(path, vimp::BiasTrialsCsv(report->report));
  });
}

void vimp_predvalue_options_default(vimp_predvalue_options* options) {
  if (!options) return;
  const vimp::ForestConfig config;
  options->cv = "kfold:10";
  options->n_trees = config.n_trees;
  options->bootstrap = config.bootstrap ? 1 : 0;
  options->max_depth = config.max_depth;
  options->min_node_to_split = config.min_node_to_split;
  options->min_child = config.min_child;
  options->seed = 0;
  options->threads = 0;
}

vimp_status vimp_predvalue(const vimp_dataset* ds, const vimp_predvalue_options* options,
                           vimp_predvalue_report** out) {
  return Guarded([&] {
    Require(ds && options && out, "null argument");
    *out = nullptr;
    vimp::ForestConfig config;
    config.n_trees = options->n_trees;
    config.bootstrap = options->bootstrap != 0;
    config.max_depth = options->max_depth;
    config.min_node_to_split = options->min_node_to_split;
    config.min_child = options->min_child;
    config.seed = options->seed;
    config.tree().Validate();
    const auto cv = vimp::CvScheme::Parse(options->cv ? options->cv : "kfold:10");
    *out = new vimp_predvalue_report{vimp::MpvCpv(ds->ds, config, cv, options->threads)};
  });
}

void vimp_predvalue_free(vimp_predvalue_report* report) { delete report; }

size_t vimp_predvalue_num_variables(const vimp_predvalue_report* report) {
  return report ? report->report.names.size() : 0;
}

vimp_status vimp_predvalue_summary(const vimp_predvalue_report* report, double* s0, double* s_all,
                                   const char** scheme) {
  return Guarded([&] {
    Require(report, "null argument");
    if (s0) *s0 = report->report.s0;
    if (s_all) *s_all = report->report.s_all;
    if (scheme) *scheme = report->report.scheme.c_str();
  });
}

vimp_status vimp_predvalue_variable(const vimp_predvalue_report* report, size_t k, const char** name,
                                    double* s_only, double* s_without, double* mpv,
                                    double* cpv) {
  return Guarded([&] {
    Require(report, "null argument");
    const auto& r = report->report;
    Require(k < r.names.size(), "variable index out of range");
    if (name) *name = r.names[k].c_str();
    if (s_only) *s_only = r.s_only[k];
    if (s_without) *s_without = r.s_without[k];
    if (mpv) *mpv = r.mpv[k];
    if (cpv) *cpv = r.cpv[k];
  });
}

vimp_status vimp_predvalue_write_csv(const vimp_predvalue_report* report, const char* path) {
  return Guarded([&] {
    Require(report && path, "null argument");
    vimp::WriteTextFile(path, vimp::PredValueCsv(report->report));
  });
}

vimp_status vimp_predvalue_correlate(const vimp_predvalue_report* report, const double* scores,
                                     size_t n, double* cor_mpv, double* cor_cpv) {
  return Guarded([&] {
    Require(report && scores && cor_mpv && cor_cpv, "null argument");
    const auto [mpv, cpv] = vimp::ScoreConsistency(std::span<const double>(scores, n),
                                                   report->report);
    *cor_mpv = mpv;
    *cor_cpv = cpv;
  });
}

vimp_status vimp_predvalue_correlate_vi_csv(const vimp_predvalue_report* report,
                                            const char* vi_csv_path, double* cor_mpv,
                                            double* cor_cpv) {
  return Guarded([&] {
    Require(report && vi_csv_path && cor_mpv && cor_cpv, "null argument");
    const auto records = vimp::ParseCsvRecords(ReadFile(vi_csv_path));
    if (records.empty()) vimp::Fail(vimp::ErrorCode::kValidation, "vi csv: empty file");
    const auto& header = records[0];
    std::optional<size_t> name_col, vi_col;
    for (size_t c = 0; c < header.size(); ++c) {
      if (header[c] == "name") name_col = c;
      if (header[c] == "VI") vi_col = c;
    }
    if (!name_col || !vi_col) {
      vimp::Fail(vimp::ErrorCode::kValidation, "vi csv: needs 'name' and 'VI' columns");
    }
    std::map<std::string, double> by_name;
    for (size_t r = 1; r < records.size(); ++r) {
      const auto& rec = records[r];
      if (rec.size() != header.size()) {
        vimp::Fail(vimp::ErrorCode::kParse, "vi csv: row " + std::to_string(r) +
                                                " has the wrong number of fields");
      }
      try {
        size_t used = 0;
        const double v = std::stod(rec[*vi_col], &used);
        if (used != rec[*vi_col].size()) throw std::invalid_argument("trailing");
        by_name[rec[*name_col]] = v;
      } catch (const std::logic_error&) {
        vimp::Fail(vimp::ErrorCode::kParse, "vi csv: row " + std::to_string(r) +
                                                ", column 'VI': not a number");
      }
    }
    std::vector<double> scores;
    for (const auto& name : report->report.names) {
      const auto it = by_name.find(name);
      if (it == by_name.end()) {
        vimp::Fail(vimp::ErrorCode::kValidation, "vi csv: no score for variable '" + name + "'");
      }
      scores.push_back(it->second);
    }
    const auto [mpv, cpv] = vimp::ScoreConsistency(scores, report->report);
    *cor_mpv = mpv;
    *cor_cpv = cpv;
  });
}

}  // extern "C"
