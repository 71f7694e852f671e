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

// Command-line front end. Every library call goes through the C interface.

#include <openssl/evp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vimp/vimp.h"

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitInternal = 3;

// Raised to unwind a command after a failed library call or file operation.
struct CommandError {
  int exit_code;
  std::string message;
};

int ExitCodeFor(vimp_status status) {
  switch (status) {
    case VIMP_OK:
      return kExitOk;
    case VIMP_ERR_IO:
      return kExitIo;
    case VIMP_ERR_INTERNAL:
      return kExitInternal;
    default:
      return kExitValidation;
  }
}

void Check(vimp_status status) {
  if (status != VIMP_OK) throw CommandError{ExitCodeFor(status), vimp_last_error()};
}

std::string Sha256File(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CommandError{kExitIo, "cannot read '" + path + "'"};
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw CommandError{kExitInternal, "cannot initialize SHA-256"};
  }
  std::vector<char> buffer(1 << 16);
  while (in) {
    in.read(buffer.data(), static_cast<std::streamsize>(buffer.size()));
    EVP_DigestUpdate(ctx, buffer.data(), static_cast<size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx, digest, &length);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

Json FileEntry(const std::string& path) {
  return Json{{"path", path}, {"sha256", Sha256File(path)}};
}

// Options shared by the commands that read a dataset.
struct DataArgs {
  std::string data;
  std::string roles;
  std::vector<std::string> na;
};

struct CommonArgs {
  uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = ".";
};

void AddDataArgs(CLI::App* cmd, DataArgs& args) {
  cmd->add_option("data", args.data, "Data CSV with a header row")->required();
  cmd->add_option("roles", args.roles, "Roles file: '<column> <d|n|c|x>' per line")->required();
  cmd->add_option("--na", args.na, "Missing-value token (repeatable; default NA and empty)");
}

void AddCommonArgs(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--seed", args.seed, "Random seed")->capture_default_str();
  cmd->add_option("--threads", args.threads,
                  "Worker threads (0: VIMP_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--out-dir", args.out_dir, "Output directory")->capture_default_str();
}

void AddTreeArgs(CLI::App* cmd, vimp_tree_options& tree) {
  cmd->add_option("--max-depth", tree.max_split_depth, "Split nodes at depths below this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--min-node", tree.min_node_to_split, "Smallest node that may be split")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--min-child", tree.min_child, "Smallest child node")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

vimp_method ToMethod(const std::string& name) {
  return name == "cart" ? VIMP_METHOD_CART : VIMP_METHOD_GUIDE;
}

// Loads the dataset and owns the handle for the command's lifetime.
class LoadedData {
 public:
  explicit LoadedData(const DataArgs& args) {
    std::vector<const char*> tokens;
    for (const auto& t : args.na) tokens.push_back(t.c_str());
    Check(vimp_dataset_load_csv(args.data.c_str(), args.roles.c_str(),
                                args.na.empty() ? nullptr : tokens.data(), tokens.size(), &ds_));
  }
  ~LoadedData() { vimp_dataset_free(ds_); }
  LoadedData(const LoadedData&) = delete;
  LoadedData& operator=(const LoadedData&) = delete;
  const vimp_dataset* get() const { return ds_; }

 private:
  vimp_dataset* ds_ = nullptr;
};

template <typename T, void (*Free)(T*)>
struct Handle {
  T* ptr = nullptr;
  ~Handle() { Free(ptr); }
};

std::string OutPath(const CommonArgs& common, const std::string& name) {
  return (fs::path(common.out_dir) / name).string();
}

void PrepareOutDir(const CommonArgs& common) {
  std::error_code ec;
  fs::create_directories(common.out_dir, ec);
  if (ec || !fs::is_directory(common.out_dir)) {
    throw CommandError{kExitIo, "cannot create output directory '" + common.out_dir + "'"};
  }
}

Json TreeJson(const vimp_tree_options& tree) {
  return Json{{"max_depth", tree.max_split_depth},
              {"min_node", tree.min_node_to_split},
              {"min_child", tree.min_child}};
}

struct Manifest {
  Json flags = Json::object();
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  Json extra = Json::object();
};

void WriteManifest(const std::string& command, const std::vector<std::string>& argv,
                   const CommonArgs& common, const Manifest& m, double seconds) {
  Json doc;
  doc["tool"] = "vimp";
  doc["version"] = vimp_version();
  doc["command"] = command;
  doc["argv"] = argv;
  doc["flags"] = m.flags;
  doc["seed"] = common.seed;
  doc["threads"] = common.threads;
  const char* env = std::getenv("VIMP_THREADS");
  doc["env"] = Json{{"VIMP_THREADS", env ? Json(env) : Json(nullptr)}};
  Json inputs = Json::array();
  for (const auto& p : m.inputs) inputs.push_back(FileEntry(p));
  doc["inputs"] = inputs;
  Json outputs = Json::array();
  for (const auto& p : m.outputs) outputs.push_back(FileEntry(p));
  doc["outputs"] = outputs;
  for (const auto& [key, value] : m.extra.items()) doc[key] = value;
  doc["wall_time_seconds"] = seconds;
  const std::string path = OutPath(common, "manifest.json");
  std::ofstream out(path, std::ios::binary);
  out << doc.dump(2) << "\n";
  if (!out) throw CommandError{kExitIo, "cannot write '" + path + "'"};
}

Json DataFlags(const DataArgs& data) {
  return Json{{"data", data.data}, {"roles", data.roles},
              {"na", data.na.empty() ? Json(nullptr) : Json(data.na)}};
}

void PrintBias(const vimp_bias* report) {
  const size_t k_vars = vimp_bias_num_variables(report);
  std::printf("%-12s %12s %12s\n", "variable", "mean", "se");
  for (size_t k = 0; k < k_vars; ++k) {
    const char* name = nullptr;
    double mean = 0.0, se = 0.0;
    Check(vimp_bias_variable(report, k, &name, &mean, &se));
    std::printf("%-12s %12.6g %12.6g\n", name, mean, se);
  }
}

std::string VerdictLine(const vimp_bias* report) {
  return vimp_bias_overlap(report)
             ? "verdict: unbiased (all mean +/- 2 SE intervals overlap)"
             : "verdict: biased (some mean +/- 2 SE intervals are disjoint)";
}

// ---- score ----------------------------------------------------------------

struct ScoreArgs {
  DataArgs data;
  CommonArgs common;
  std::string method = "guide";
  vimp_score_options options{};
};

void RunScore(ScoreArgs& a, Manifest& m) {
  LoadedData ds(a.data);
  a.options.seed = a.common.seed;
  a.options.threads = a.common.threads;
  a.options.method = ToMethod(a.method);
  Handle<vimp_importance, vimp_importance_free> report;
  Check(vimp_score(ds.get(), &a.options, &report.ptr));
  PrepareOutDir(a.common);
  const std::string csv = OutPath(a.common, "vi.csv");
  const std::string json = OutPath(a.common, "vi.json");
  Check(vimp_importance_write_csv(report.ptr, csv.c_str()));
  Check(vimp_importance_write_json(report.ptr, json.c_str()));
  m.outputs = {csv, json};

  const size_t k_vars = vimp_importance_num_variables(report.ptr);
  std::printf("%-12s %12s %12s %12s %12s %s\n", "variable", "v", "v_bar", "VI", "normalized",
              "important");
  for (size_t k = 0; k < k_vars; ++k) {
    vimp_variable_score s;
    Check(vimp_importance_variable(report.ptr, k, &s));
    std::printf("%-12s %12.6g %12.6g %12.6g %12.6g %s\n", s.name, s.v, s.v_bar, s.vi,
                s.normalized, s.important < 0 ? "NA" : (s.important ? "yes" : "no"));
  }
  if (a.options.method == VIMP_METHOD_GUIDE) {
    vimp_threshold_info t;
    Check(vimp_importance_threshold(report.ptr, &t));
    std::printf("alpha=%g v*=%.6g m=%d\n", t.alpha, t.v_star, t.m);
    m.extra["important_count"] = t.m;
  }
}

// ---- permtest -------------------------------------------------------------

struct PermtestArgs {
  DataArgs data;
  CommonArgs common;
  std::string method = "guide";
  vimp_permtest_options options{};
};

void RunPermtest(PermtestArgs& a, Manifest& m) {
  LoadedData ds(a.data);
  a.options.seed = a.common.seed;
  a.options.threads = a.common.threads;
  a.options.method = ToMethod(a.method);
  Handle<vimp_bias, vimp_bias_free> report;
  Check(vimp_permtest(ds.get(), &a.options, &report.ptr));
  PrepareOutDir(a.common);
  const std::string summary = OutPath(a.common, "permbias.csv");
  const std::string trials = OutPath(a.common, "permtrials.csv");
  Check(vimp_bias_write_summary_csv(report.ptr, summary.c_str()));
  Check(vimp_bias_write_trials_csv(report.ptr, trials.c_str()));
  m.outputs = {summary, trials};
  m.extra["overlap"] = vimp_bias_overlap(report.ptr) != 0;
  PrintBias(report.ptr);
  std::printf("%s\n", VerdictLine(report.ptr).c_str());
}

// ---- simbench -------------------------------------------------------------

struct SimbenchArgs {
  CommonArgs common;
  std::string model = "E0";
  std::string method = "guide";
  std::string mcar_columns;
  vimp_simbench_options options{};
};

void RunSimbench(SimbenchArgs& a, Manifest& m) {
  a.options.model = a.model.c_str();
  a.options.seed = a.common.seed;
  a.options.threads = a.common.threads;
  a.options.method = ToMethod(a.method);
  a.options.mcar_columns = a.mcar_columns.empty() ? nullptr : a.mcar_columns.c_str();
  Handle<vimp_bias, vimp_bias_free> report;
  Check(vimp_simbench(&a.options, &report.ptr));
  PrepareOutDir(a.common);
  const std::string trials = OutPath(a.common, "trials.csv");
  const std::string summary = OutPath(a.common, "summary.csv");
  Check(vimp_bias_write_trials_csv(report.ptr, trials.c_str()));
  Check(vimp_bias_write_summary_csv(report.ptr, summary.c_str()));
  m.outputs = {trials, summary};
  m.extra["overlap"] = vimp_bias_overlap(report.ptr) != 0;
  PrintBias(report.ptr);
  std::printf("%s\n", VerdictLine(report.ptr).c_str());
}

// ---- predvalue ------------------------------------------------------------

struct PredvalueArgs {
  DataArgs data;
  CommonArgs common;
  std::string cv = "kfold:10";
  std::string vi;
  bool no_bootstrap = false;
  vimp_predvalue_options options{};
};

void RunPredvalue(PredvalueArgs& a, Manifest& m) {
  LoadedData ds(a.data);
  a.options.cv = a.cv.c_str();
  a.options.seed = a.common.seed;
  a.options.threads = a.common.threads;
  a.options.bootstrap = a.no_bootstrap ? 0 : 1;
  Handle<vimp_predvalue_report, vimp_predvalue_free> report;
  Check(vimp_predvalue(ds.get(), &a.options, &report.ptr));
  double cor_mpv = 0.0, cor_cpv = 0.0;
  if (!a.vi.empty()) {
    Check(vimp_predvalue_correlate_vi_csv(report.ptr, a.vi.c_str(), &cor_mpv, &cor_cpv));
  }
  PrepareOutDir(a.common);
  const std::string csv = OutPath(a.common, "predvalue.csv");
  Check(vimp_predvalue_write_csv(report.ptr, csv.c_str()));
  m.outputs = {csv};

  double s0 = 0.0, s_all = 0.0;
  const char* scheme = nullptr;
  Check(vimp_predvalue_summary(report.ptr, &s0, &s_all, &scheme));
  std::printf("scheme=%s S0=%.6g S=%.6g\n", scheme, s0, s_all);
  std::printf("%-12s %12s %12s %12s %12s\n", "variable", "S_j", "S_minus_j", "MPV", "CPV");
  for (size_t j = 0; j < vimp_predvalue_num_variables(report.ptr); ++j) {
    const char* name = nullptr;
    double s_only = 0.0, s_without = 0.0, mpv = 0.0, cpv = 0.0;
    Check(vimp_predvalue_variable(report.ptr, j, &name, &s_only, &s_without, &mpv, &cpv));
    std::printf("%-12s %12.6g %12.6g %12.6g %12.6g\n", name, s_only, s_without, mpv, cpv);
  }
  if (!a.vi.empty()) {
    const std::string path = OutPath(a.common, "correlations.csv");
    std::ofstream out(path, std::ios::binary);
    char line[128];
    out << "measure,correlation\n";
    std::snprintf(line, sizeof(line), "MPV,%.17g\nCPV,%.17g\n", cor_mpv, cor_cpv);
    out << line;
    if (!out) throw CommandError{kExitIo, "cannot write '" + path + "'"};
    m.outputs.push_back(path);
    m.inputs.push_back(a.vi);
    m.extra["correlations"] = Json{{"MPV", cor_mpv}, {"CPV", cor_cpv}};
    std::printf("cor(VI, MPV)=%.6g cor(VI, CPV)=%.6g\n", cor_mpv, cor_cpv);
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  CLI::App app{"Unbiased variable importance for regression data"};
  app.set_version_flag("--version", std::string(vimp_version()));
  app.require_subcommand(1);
  const std::vector<std::string> methods = {"guide", "cart"};

  ScoreArgs score;
  vimp_score_options_default(&score.options);
  auto* score_cmd = app.add_subcommand("score", "Bias-adjusted importance scores and threshold");
  AddDataArgs(score_cmd, score.data);
  AddCommonArgs(score_cmd, score.common);
  score_cmd->add_option("--b", score.options.permutations, "Response permutations")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  score_cmd->add_option("--alpha", score.options.alpha, "Threshold level")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  score_cmd->add_option("--method", score.method, "Scoring method")
      ->check(CLI::IsMember(methods))
      ->capture_default_str();
  AddTreeArgs(score_cmd, score.options.tree);

  PermtestArgs perm;
  vimp_permtest_options_default(&perm.options);
  auto* perm_cmd = app.add_subcommand("permtest", "Scores under permuted responses");
  AddDataArgs(perm_cmd, perm.data);
  AddCommonArgs(perm_cmd, perm.common);
  perm_cmd->add_option("--j", perm.options.permutations, "Permuted responses to score")
      ->check(CLI::Range(2, 1 << 30))
      ->capture_default_str();
  perm_cmd->add_option("--b", perm.options.guide_permutations,
                       "Permutations inside each GUIDE score")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  perm_cmd->add_option("--method", perm.method, "Scoring method")
      ->check(CLI::IsMember(methods))
      ->capture_default_str();
  AddTreeArgs(perm_cmd, perm.options.tree);

  SimbenchArgs sim;
  vimp_simbench_options_default(&sim.options);
  auto* sim_cmd = app.add_subcommand("simbench", "Simulation benchmark on models E0 to E5");
  AddCommonArgs(sim_cmd, sim.common);
  sim_cmd->add_option("--model", sim.model, "Simulation model")
      ->check(CLI::IsMember({"E0", "E1", "E2", "E3", "E4", "E5"}))
      ->capture_default_str();
  sim_cmd->add_option("--trials", sim.options.trials, "Simulated datasets")
      ->check(CLI::Range(2, 1 << 30))
      ->capture_default_str();
  sim_cmd->add_option("--n", sim.options.n, "Rows per dataset")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_cmd->add_option("--method", sim.method, "Scoring method")
      ->check(CLI::IsMember(methods))
      ->capture_default_str();
  sim_cmd->add_option("--b", sim.options.permutations, "Permutations inside each GUIDE score")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sim_cmd->add_option("--mcar-rate", sim.options.mcar_rate,
                      "Fraction of values set missing in --mcar-columns")
      ->check(CLI::Range(0.0, 0.999999))
      ->capture_default_str();
  sim_cmd->add_option("--mcar-columns", sim.mcar_columns,
                      "Comma-separated columns receiving missing values");
  AddTreeArgs(sim_cmd, sim.options.tree);

  PredvalueArgs pv;
  vimp_predvalue_options_default(&pv.options);
  auto* pv_cmd = app.add_subcommand("predvalue", "Marginal and conditional predictive values");
  AddDataArgs(pv_cmd, pv.data);
  AddCommonArgs(pv_cmd, pv.common);
  pv_cmd->add_option("--cv", pv.cv, "kfold:<k> or loo")->capture_default_str();
  pv_cmd->add_option("--trees", pv.options.n_trees, "Trees per forest")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pv_cmd->add_option("--max-depth", pv.options.max_depth, "Split nodes at depths below this")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pv_cmd->add_option("--min-node", pv.options.min_node_to_split,
                     "Smallest node that may be split")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pv_cmd->add_option("--min-child", pv.options.min_child, "Smallest child node")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  pv_cmd->add_flag("--no-bootstrap", pv.no_bootstrap, "Grow every tree on all training rows");
  pv_cmd->add_option("--vi", pv.vi, "vi.csv whose VI column is correlated with MPV and CPV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  const auto start = std::chrono::steady_clock::now();
  Manifest manifest;
  const CommonArgs* common = nullptr;
  std::string command;
  try {
    if (score_cmd->parsed()) {
      command = "score";
      common = &score.common;
      manifest.flags = DataFlags(score.data);
      manifest.flags["b"] = score.options.permutations;
      manifest.flags["alpha"] = score.options.alpha;
      manifest.flags["method"] = score.method;
      manifest.flags["tree"] = TreeJson(score.options.tree);
      manifest.inputs = {score.data.data, score.data.roles};
      RunScore(score, manifest);
    } else if (perm_cmd->parsed()) {
      command = "permtest";
      common = &perm.common;
      manifest.flags = DataFlags(perm.data);
      manifest.flags["j"] = perm.options.permutations;
      manifest.flags["b"] = perm.options.guide_permutations;
      manifest.flags["method"] = perm.method;
      manifest.flags["tree"] = TreeJson(perm.options.tree);
      manifest.inputs = {perm.data.data, perm.data.roles};
      RunPermtest(perm, manifest);
    } else if (sim_cmd->parsed()) {
      command = "simbench";
      common = &sim.common;
      manifest.flags["model"] = sim.model;
      manifest.flags["trials"] = sim.options.trials;
      manifest.flags["n"] = sim.options.n;
      manifest.flags["method"] = sim.method;
      manifest.flags["b"] = sim.options.permutations;
      manifest.flags["mcar_rate"] = sim.options.mcar_rate;
      manifest.flags["mcar_columns"] = sim.mcar_columns;
      manifest.flags["tree"] = TreeJson(sim.options.tree);
      RunSimbench(sim, manifest);
    } else {
      command = "predvalue";
      common = &pv.common;
      manifest.flags = DataFlags(pv.data);
      manifest.flags["cv"] = pv.cv;
      manifest.flags["trees"] = pv.options.n_trees;
      manifest.flags["bootstrap"] = !pv.no_bootstrap;
      manifest.flags["max_depth"] = pv.options.max_depth;
      manifest.flags["min_node"] = pv.options.min_node_to_split;
      manifest.flags["min_child"] = pv.options.min_child;
      manifest.flags["vi"] = pv.vi.empty() ? Json(nullptr) : Json(pv.vi);
      manifest.inputs = {pv.data.data, pv.data.roles};
      RunPredvalue(pv, manifest);
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    WriteManifest(command, args, *common, manifest, seconds);
  } catch (const CommandError& e) {
    std::cerr << "vimp " << command << ": " << e.message << "\n";
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "vimp " << command << ": " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
