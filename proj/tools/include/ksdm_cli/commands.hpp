// Copyright 2026 The ksdm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef KSDM_CLI_COMMANDS_HPP
#define KSDM_CLI_COMMANDS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ksdm/gof.hpp"
#include "ksdm/io.hpp"
#include "ksdm_cli/config.hpp"

namespace ksdm::cli {

struct RunOptions {
  /// Overrides the config seed.
  std::optional<std::uint64_t> seed;
  /// Overrides output.dir.
  std::string out_dir;
  /// Input sample file for ksd / mksde / gof.
  std::string samples_path;
  int threads = 0;
};

std::uint64_t effective_seed(const ExperimentConfig& cfg, const RunOptions& opts);
std::string effective_out_dir(const ExperimentConfig& cfg, const RunOptions& opts);

struct SampleReport {
  SampleFile file;
  std::string path;
  /// Rejection or Metropolis acceptance rate; 1 for exact methods.
  double acceptance_rate = 1.0;
};

/// Draws samples per the sampler block and writes <out>/samples.jsonl.
SampleReport cmd_sample(const ExperimentConfig& cfg, const RunOptions& opts);

struct KsdReport {
  Index n = 0;
  double u = 0.0;
  double v = 0.0;
  double u_se = 0.0;
  double v_se = 0.0;
  std::string json;
};

/// U and V statistics of the sample file against the family block model,
/// with bootstrap standard errors. Writes <out>/ksd.json.
KsdReport cmd_ksd(const ExperimentConfig& cfg, const RunOptions& opts);

struct MksdeReport {
  MksdeSolution solution;
  Index n = 0;
  std::string json;
};

/// Minimum-KSD estimate for the family kind in the config. Writes
/// <out>/mksde.json.
MksdeReport cmd_mksde(const ExperimentConfig& cfg, const RunOptions& opts);

struct GofReport {
  GofResult result;
  std::string json;
  std::string csv_row;
};

/// Composite goodness-of-fit test. Writes <out>/gof.json and <out>/gof.csv.
GofReport cmd_gof(const ExperimentConfig& cfg, const RunOptions& opts);

/// Matrix Fisher study on V_2(3).
struct MleVsMksdeSettings {
  std::vector<std::string> labels;
  std::vector<Mat> f0;
  std::vector<int> n_values;
  int replicates = 20;
  std::uint64_t seed = 0;
  RadialKernel kernel = RadialKernel::gaussian(1.0);
  bool run_numeric_mle = true;
  bool run_u = true;
  MleOptions mle;
  int threads = 0;
};

struct EstimateRow {
  std::string f0_label;
  int n = 0;
  int replicate = 0;
  std::string estimator;
  double frob_error = 0.0;
};

/// E1 = (1,0;1,0;1,0), E2 = (1,1;1,1;1,1).
Mat e1_matrix();
Mat e2_matrix();
MleVsMksdeSettings default_mle_vs_mksde_settings();
std::vector<EstimateRow> run_mle_vs_mksde(const MleVsMksdeSettings& s);
/// Writes <out>/mle_vs_mksde.csv (per replicate) and
/// <out>/mle_vs_mksde_summary.csv (median and quartiles).
std::vector<EstimateRow> cmd_experiment_mle_vs_mksde(const ExperimentConfig& cfg, const RunOptions& opts);

/// Matrix Fisher data tested against a composite family on V_2(3).
struct GofStudySettings {
  std::vector<std::string> labels;
  std::vector<Mat> f;
  std::vector<int> n_values;
  std::vector<StatKind> kinds = {StatKind::U, StatKind::V};
  FamilyKind tested = FamilyKind::MatrixBingham;
  int replicates = 20;
  double beta = 0.05;
  int n_sim = 5000;
  std::uint64_t seed = 0;
  RadialKernel kernel = RadialKernel::gaussian(1.0);
  int threads = 0;
};

struct GofRow {
  std::string f_label;
  int n = 0;
  StatKind kind = StatKind::V;
  int replicate = 0;
  double statistic = 0.0;
  double p_value = 1.0;
  bool reject = false;
};

GofStudySettings default_gof_study_settings();
std::vector<GofRow> run_gof_study(const GofStudySettings& s);
/// Writes <out>/gof_pvalues.csv (per replicate) and <out>/gof_table.csv
/// (median p-values, one row per (F, kind), one column per n).
std::vector<GofRow> cmd_experiment_gof(const ExperimentConfig& cfg, const RunOptions& opts);

/// Closed form vs brute force vs finite differences over every supported
/// (manifold, kernel, family) combination.
struct OracleCase {
  std::string name;
  int pairs = 0;
  /// max |closed - brute| / (1 + |brute|)
  double closed_vs_brute = 0.0;
  /// max |brute - fd| / (1 + |brute|)
  double brute_vs_fd = 0.0;
  double brute_vs_fd_abs = 0.0;
};

std::vector<OracleCase> run_oracle_suite(int pairs, int fd_pairs, std::uint64_t seed, double h = 1e-4);
/// Prints one line per case; returns true when every case is within the
/// tolerances (1e-9 relative, 1e-5 finite difference).
bool cmd_selftest(std::ostream& os, std::uint64_t seed, int pairs = 20, int fd_pairs = 5);

double median(std::vector<double> v);
/// Type-7 quantile (linear interpolation), NaNs dropped.
double quantile(std::vector<double> v, double q);

/// Full command-line entry point. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ksdm::cli

#endif  // KSDM_CLI_COMMANDS_HPP
