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
#ifndef KSDM_KSDSTATS_HPP
#define KSDM_KSDSTATS_HPP

#include <cstdint>
#include <vector>

#include "ksdm/steinkernel.hpp"

namespace ksdm {

/// Points with log importance weights log q^w(x_i). Empty log_weights means
/// unweighted.
struct WeightedSample {
  std::vector<Mat> points;
  std::vector<double> log_weights;

  std::size_t size() const { return points.size(); }
  bool weighted() const { return !log_weights.empty(); }
  /// exp(log_weights), or all ones.
  Vec weights() const;
  /// Throws on length mismatch or non-finite log weights.
  void check() const;
};

WeightedSample unweighted(std::vector<Mat> points);

/// n^-2 sum_ij G_ij w_i w_j.
double v_stat_from_gram(const Mat& gram, const Vec& w);
/// (n(n-1))^-1 sum_{i != j} G_ij w_i w_j. Requires n >= 2.
double u_stat_from_gram(const Mat& gram, const Vec& w);

double v_stat(const SteinKernel& ev, const WeightedSample& s, int threads = 0);
double u_stat(const SteinKernel& ev, const WeightedSample& s, int threads = 0);

struct BootstrapSe {
  double u_se = 0.0;
  double v_se = 0.0;
};

/// Nonparametric bootstrap standard errors of U and V, resampling points
/// with replacement and reusing the Gram matrix.
BootstrapSe bootstrap_se(const Mat& gram, const Vec& w, int replicates, std::uint64_t seed);

}  // namespace ksdm

#endif  // KSDM_KSDSTATS_HPP
