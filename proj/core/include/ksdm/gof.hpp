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
#ifndef KSDM_GOF_HPP
#define KSDM_GOF_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ksdm/mksde.hpp"

namespace ksdm {

struct GofOptions {
  StatKind kind = StatKind::V;
  double beta = 0.05;
  int n_sim = 5000;
  std::uint64_t seed = 0;
  double rank_tol = 1e-12;
  /// Use the stationary point of an indefinite U system instead of failing.
  bool allow_nonconvex = false;
  /// Test a single member instead of the composite family.
  std::optional<Vec> fixed_theta;
  int threads = 0;
};

struct GofResult {
  Vec theta_hat;
  /// n W_n(theta_hat).
  double statistic = 0.0;
  /// Eigenvalues of the Gram matrix divided by n, negatives clipped to 0.
  Vec eigenvalues;
  /// Eigenvalues below -1e-8 before clipping.
  int clipped_negative = 0;
  std::vector<double> null_draws;
  double quantile = 0.0;
  /// Number of null draws >= statistic.
  int exceedances = 0;
  /// (1 + exceedances) / (n_sim + 1).
  double p_value = 1.0;
  bool reject = false;
  StatKind kind = StatKind::V;
  double beta = 0.05;
  int n_sim = 0;
  std::uint64_t seed = 0;
  /// Importance-weighted tests are experimental.
  bool weighted = false;
};

/// gamma_l = sum_k lambda_k (Z_k^2 - 1) (U) or sum_k lambda_k Z_k^2 (V).
/// Draws are generated in blocks of 256 with substream (seed, block).
std::vector<double> simulate_null(const Vec& lambdas, StatKind kind, int n_sim, std::uint64_t seed, int threads = 0);

/// Order statistic x_(k) with k = ceil(level * n).
double empirical_quantile(std::vector<double> draws, double level);

GofResult gof_test(const ExponentialFamily& spec, const RadialKernel& k, const WeightedSample& sample,
                   const GofOptions& opts = {});

}  // namespace ksdm

#endif  // KSDM_GOF_HPP
