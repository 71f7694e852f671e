/*
 * Copyright 2026 The vimp Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/*
 * C interface to the vimp library: unbiased variable importance for
 * regression data, permutation bias audits, the simulation benchmark and
 * predictive-value estimates.
 *
 * Objects are opaque handles created by a vimp_* call and released with the
 * matching *_free function. Every fallible call returns a vimp_status; on
 * failure vimp_last_error() describes the problem (thread-local, valid until
 * the next failing call on the same thread). Strings returned by accessors
 * are owned by the handle.
 */

#ifndef VIMP_VIMP_H_
#define VIMP_VIMP_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define VIMP_API __declspec(dllexport)
#else
#define VIMP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vimp_status {
  VIMP_OK = 0,
  VIMP_ERR_IO = 1,
  VIMP_ERR_VALIDATION = 2,
  VIMP_ERR_PARSE = 3,
  VIMP_ERR_DOMAIN = 4,
  VIMP_ERR_ZERO_VARIANCE = 5,
  VIMP_ERR_INVALID_ARGUMENT = 6,
  VIMP_ERR_INTERNAL = 7
} vimp_status;

typedef enum vimp_method { VIMP_METHOD_GUIDE = 0, VIMP_METHOD_CART = 1 } vimp_method;

typedef struct vimp_dataset vimp_dataset;
typedef struct vimp_importance vimp_importance;
typedef struct vimp_bias vimp_bias;
typedef struct vimp_predvalue_report vimp_predvalue_report;

VIMP_API const char* vimp_version(void);
VIMP_API const char* vimp_last_error(void);

/* Tree growth limits shared by the GUIDE and CART growers. */
typedef struct vimp_tree_options {
  int max_split_depth;   /* split nodes at depths 0..max_split_depth-1; default 4 */
  int min_node_to_split; /* default 8 */
  int min_child;         /* default 2 */
} vimp_tree_options;

VIMP_API void vimp_tree_options_default(vimp_tree_options* options);

/* ---- datasets ---------------------------------------------------------- */

/* na_tokens may be NULL for the defaults {"NA", ""}. */
VIMP_API vimp_status vimp_dataset_load_csv(const char* data_path, const char* roles_path,
                                           const char* const* na_tokens, size_t n_na_tokens,
                                           vimp_dataset** out);
VIMP_API void vimp_dataset_free(vimp_dataset* ds);
VIMP_API size_t vimp_dataset_num_rows(const vimp_dataset* ds);
VIMP_API size_t vimp_dataset_num_predictors(const vimp_dataset* ds);
VIMP_API const char* vimp_dataset_predictor_name(const vimp_dataset* ds, size_t k);
VIMP_API vimp_status vimp_dataset_write_csv(const vimp_dataset* ds, const char* data_path,
                                            const char* roles_path);

/* ---- importance scores ------------------------------------------------- */

typedef struct vimp_score_options {
  int permutations; /* B, default 300 */
  double alpha;     /* default 0.05 */
  uint64_t seed;
  int threads;      /* 0: VIMP_THREADS or hardware concurrency */
  vimp_method method;
  vimp_tree_options tree;
} vimp_score_options;

typedef struct vimp_variable_score {
  const char* name;
  double v;          /* raw score */
  double v_bar;      /* permutation mean; NaN for CART */
  double vi;         /* bias-adjusted score (CART: rpart importance) */
  double normalized; /* NaN for CART */
  int important;     /* -1 for CART */
} vimp_variable_score;

typedef struct vimp_threshold_info {
  double alpha;
  double v_star;
  double v_tilde;
  int m;
  int normalized_defined;
  int permutations;
} vimp_threshold_info;

VIMP_API void vimp_score_options_default(vimp_score_options* options);
VIMP_API vimp_status vimp_score(const vimp_dataset* ds, const vimp_score_options* options,
                                vimp_importance** out);
VIMP_API void vimp_importance_free(vimp_importance* report);
VIMP_API size_t vimp_importance_num_variables(const vimp_importance* report);
VIMP_API vimp_status vimp_importance_variable(const vimp_importance* report, size_t k,
                                              vimp_variable_score* out);
/* VIMP_ERR_INVALID_ARGUMENT for CART reports, which carry no threshold. */
VIMP_API vimp_status vimp_importance_threshold(const vimp_importance* report,
                                               vimp_threshold_info* out);
VIMP_API vimp_status vimp_importance_write_csv(const vimp_importance* report, const char* path);
VIMP_API vimp_status vimp_importance_write_json(const vimp_importance* report, const char* path);

/* ---- bias audits ------------------------------------------------------- */

typedef struct vimp_permtest_options {
  int permutations;       /* J, default 1000 */
  int guide_permutations; /* B inside each GUIDE score, default 300 */
  vimp_method method;
  uint64_t seed;
  int threads;
  vimp_tree_options tree;
} vimp_permtest_options;

typedef struct vimp_simbench_options {
  const char* model; /* "E0".."E5" */
  int trials;        /* default 1000 */
  size_t n;          /* default 400 */
  vimp_method method;
  int permutations;  /* GUIDE B, default 300 */
  uint64_t seed;
  int threads;
  double mcar_rate;          /* fraction of cells set missing, default 0 */
  const char* mcar_columns;  /* comma-separated names, e.g. "N1,C1,S1" */
  vimp_tree_options tree;
} vimp_simbench_options;

VIMP_API void vimp_permtest_options_default(vimp_permtest_options* options);
VIMP_API void vimp_simbench_options_default(vimp_simbench_options* options);
VIMP_API vimp_status vimp_permtest(const vimp_dataset* ds, const vimp_permtest_options* options,
                                   vimp_bias** out);
VIMP_API vimp_status vimp_simbench(const vimp_simbench_options* options, vimp_bias** out);
VIMP_API void vimp_bias_free(vimp_bias* report);
VIMP_API size_t vimp_bias_num_variables(const vimp_bias* report);
VIMP_API int vimp_bias_trials(const vimp_bias* report);
VIMP_API int vimp_bias_overlap(const vimp_bias* report);
VIMP_API vimp_status vimp_bias_variable(const vimp_bias* report, size_t k, const char** name,
                                        double* mean, double* se);
VIMP_API vimp_status vimp_bias_write_summary_csv(const vimp_bias* report, const char* path);
VIMP_API vimp_status vimp_bias_write_trials_csv(const vimp_bias* report, const char* path);

/* ---- predictive values ------------------------------------------------- */

typedef struct vimp_predvalue_options {
  const char* cv; /* "kfold:<k>" (default "kfold:10") or "loo" */
  int n_trees;    /* default 100 */
  int bootstrap;  /* default 1 */
  int max_depth;  /* default 6 */
  int min_node_to_split;
  int min_child;
  uint64_t seed;
  int threads;
} vimp_predvalue_options;

VIMP_API void vimp_predvalue_options_default(vimp_predvalue_options* options);
VIMP_API vimp_status vimp_predvalue(const vimp_dataset* ds, const vimp_predvalue_options* options,
                                    vimp_predvalue_report** out);
VIMP_API void vimp_predvalue_free(vimp_predvalue_report* report);
VIMP_API size_t vimp_predvalue_num_variables(const vimp_predvalue_report* report);
VIMP_API vimp_status vimp_predvalue_summary(const vimp_predvalue_report* report, double* s0,
                                            double* s_all, const char** scheme);
VIMP_API vimp_status vimp_predvalue_variable(const vimp_predvalue_report* report, size_t k,
                                             const char** name, double* s_only,
                                             double* s_without, double* mpv, double* cpv);
VIMP_API vimp_status vimp_predvalue_write_csv(const vimp_predvalue_report* report, const char* path);
/* Correlations of scores[0..n) (predictor order) with MPV and CPV. */
VIMP_API vimp_status vimp_predvalue_correlate(const vimp_predvalue_report* report, const double* scores,
                                              size_t n, double* cor_mpv, double* cor_cpv);
/* Same, reading the VI column of a vi.csv written by vimp_importance_write_csv. */
VIMP_API vimp_status vimp_predvalue_correlate_vi_csv(const vimp_predvalue_report* report,
                                                     const char* vi_csv_path, double* cor_mpv,
                                                     double* cor_cpv);

#ifdef __cplusplus
}
#endif

#endif /* VIMP_VIMP_H_ */
