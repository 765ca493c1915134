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
#include "ksdm/gof.hpp"

#include <algorithm>
#include <cmath>

#include "ksdm/errors.hpp"
#include "ksdm/parallel.hpp"
#include "ksdm/rng.hpp"
#include "ksdm/steinkernel.hpp"

namespace ksdm {

std::vector<double> simulate_null(const Vec& lambdas, StatKind kind, int n_sim, std::uint64_t seed, int threads) {
  if (n_sim < 1) {
    throw DomainError("simulate_null: n_sim must be positive");
  }
  constexpr int kBlock = 256;
  const int blocks = (n_sim + kBlock - 1) / kBlock;
  std::vector<double> draws(static_cast<std::size_t>(n_sim));
  parallel_for(
      static_cast<std::size_t>(blocks),
      [&](std::size_t b) {
        Rng rng(seed, 0x6F0F0000ULL + b);
        const int lo = static_cast<int>(b) * kBlock;
        const int hi = std::min(n_sim, lo + kBlock);
        for (int l = lo; l < hi; ++l) {
          double g = 0.0;
          for (Index k = 0; k < lambdas.size(); ++k) {
            const double z = rng.normal();
            g += lambdas(k) * (kind == StatKind::U ? z * z - 1.0 : z * z);
          }
          draws[static_cast<std::size_t>(l)] = g;
        }
      },
      threads);
  return draws;
}

double empirical_quantile(std::vector<double> draws, double level) {
  if (draws.empty()) {
    throw DomainError("empirical_quantile: no draws");
  }
  if (!(level > 0.0 && level <= 1.0)) {
    throw DomainError("empirical_quantile: level must lie in (0, 1]");
  }
  std::sort(draws.begin(), draws.end());
  const double n = static_cast<double>(draws.size());
  auto k = static_cast<std::size_t>(std::ceil(level * n - 1e-12));
  k = std::clamp<std::size_t>(k, 1, draws.size());
  return draws[k - 1];
}

GofResult gof_test(const ExponentialFamily& spec, const RadialKernel& k, const WeightedSample& sample,
                   const GofOptions& opts) {
  if (!(opts.beta > 0.0 && opts.beta < 1.0)) {
    throw DomainError("gof_test: beta must lie in (0, 1)");
  }
  if (opts.n_sim < 100) {
    throw DomainError("gof_test: n_sim must be at least 100");
  }
  sample.check();
  const std::size_t n = sample.size();
  if (n < 5) {
    throw DomainError("gof_test: needs at least 5 points");
  }

  GofResult res;
  res.kind = opts.kind;
  res.beta = opts.beta;
  res.n_sim = opts.n_sim;
  res.seed = opts.seed;
  res.weighted = sample.weighted();

  if (opts.fixed_theta) {
    if (opts.fixed_theta->size() != spec.dim()) {
      throw DimensionError("gof_test: fixed theta has wrong length");
    }
    res.theta_hat = *opts.fixed_theta;
  } else {
    const MksdeSystem sys = assemble(spec, k, sample, opts.kind, opts.threads);
    res.theta_hat = solve(sys, opts.rank_tol, opts.allow_nonconvex).theta;
  }

  const SteinKernel ev(spec.model(res.theta_hat), k);
  const Mat gram = stein_gram(ev, sample.points, opts.threads);
  const Vec w = sample.weights();
  const double nn = static_cast<double>(n);
  res.statistic =
      nn * (opts.kind == StatKind::U ? u_stat_from_gram(gram, w) : v_stat_from_gram(gram, w));

  const Mat gw = w.asDiagonal() * gram * w.asDiagonal() / nn;
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym(gw), Eigen::EigenvaluesOnly);
  res.eigenvalues = eig.eigenvalues();
  for (Index i = 0; i < res.eigenvalues.size(); ++i) {
    if (res.eigenvalues(i) < -1e-8) {
      ++res.clipped_negative;
    }
    res.eigenvalues(i) = std::max(0.0, res.eigenvalues(i));
  }

  res.null_draws = simulate_null(res.eigenvalues, opts.kind, opts.n_sim, opts.seed, opts.threads);
  res.quantile = empirical_quantile(res.null_draws, 1.0 - opts.beta);
  res.exceedances = static_cast<int>(
      std::count_if(res.null_draws.begin(), res.null_draws.end(), [&](double g) { return g >= res.statistic; }));
  res.p_value = (1.0 + res.exceedances) / (opts.n_sim + 1.0);
  res.reject = res.statistic > res.quantile;
  return res;
}

}  // namespace ksdm
