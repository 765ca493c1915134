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
#ifndef KSDM_CLI_CONFIG_HPP
#define KSDM_CLI_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ksdm/kernels.hpp"
#include "ksdm/manifolds.hpp"
#include "ksdm/mksde.hpp"
#include "ksdm/models.hpp"
#include "ksdm/sampling.hpp"

namespace ksdm::cli {

/// Malformed or schema-violating configuration (exit code 1).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ManifoldBlock {
  std::string kind = "stiefel";
  Index n = 3;
  Index r = 2;
};

struct KernelBlock {
  std::string family = "gaussian";
  double tau = 1.0;
  double beta = 1.0;
  double gamma = 0.5;
};

struct FamilyBlock {
  std::string kind = "uniform";
  std::optional<Mat> f;
  std::optional<Mat> a;
  std::optional<Mat> xbar;
  std::optional<Mat> v;
  double sigma = 1.0;
  double dof = 0.0;
};

struct SamplerBlock {
  std::string method = "uniform";
  int n = 100;
  /// 0 picks the manifold default.
  double step = 0.0;
  int burn_in = 1000;
  int thin = 5;
  /// Bartlett degrees of freedom for method "wishart"; 0 derives it from the
  /// family block.
  double dof = 0.0;
};

struct EstimatorBlock {
  std::string kind = "V";
  double rank_tol = 1e-12;
  bool compare_mle = false;
  bool allow_nonconvex = false;
};

struct GofBlock {
  double beta = 0.05;
  int n_sim = 5000;
  bool fixed_theta = false;
};

struct KsdBlock {
  int bootstrap = 200;
};

struct SweepBlock {
  std::vector<int> n_values;
  int replicates = 20;
};

struct MleBlock {
  int pool_size = 20000;
  int max_iter = 500;
};

struct OutputBlock {
  std::string dir = ".";
  std::vector<std::string> formats = {"json", "csv"};
};

struct ExperimentConfig {
  ManifoldBlock manifold;
  KernelBlock kernel;
  FamilyBlock family;
  SamplerBlock sampler;
  EstimatorBlock estimator;
  GofBlock gof;
  KsdBlock ksd;
  SweepBlock sweep;
  MleBlock mle;
  OutputBlock output;
  std::uint64_t seed = 0;
  /// Keys present in the source document, dotted ("kernel.tau").
  std::vector<std::string> present;

  bool has(const std::string& key) const;
};

/// Parses and validates a JSON document. Unknown keys, wrong types and out
/// of range values raise ConfigError naming the key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

Manifold make_manifold(const ExperimentConfig& cfg);
RadialKernel make_kernel(const ExperimentConfig& cfg);
/// The family block as a fully specified score model.
ScoreModel make_model(const ExperimentConfig& cfg, const Manifold& m);
FamilyKind family_kind(const ExperimentConfig& cfg);
StatKind estimator_kind(const ExperimentConfig& cfg);

/// JSON object with the family parameters (for sample headers and reports).
std::string family_params_json(const ExperimentConfig& cfg);
/// JSON object describing the kernel.
std::string kernel_json(const ExperimentConfig& cfg);

}  // namespace ksdm::cli

#endif  // KSDM_CLI_CONFIG_HPP
