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
#ifndef KSDM_SAMPLING_HPP
#define KSDM_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "ksdm/manifolds.hpp"
#include "ksdm/models.hpp"

namespace ksdm {

/// Haar-uniform points. Stiefel: sign-corrected QR of a Gaussian matrix;
/// Grassmann: U U^T of a uniform Stiefel frame. SPD has no uniform law and
/// throws DomainError. Point i uses substream i, so the output does not
/// depend on the thread count.
std::vector<Mat> sample_uniform(const Manifold& m, std::size_t n, std::uint64_t seed, int threads = 0);

struct RejectionStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  double rate() const { return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals); }
};

/// Exact matrix Fisher sampler: uniform proposals accepted with probability
/// exp(<F, X> - max_X <F, X>). Throws SamplerError when the acceptance rate
/// over the first probe batch falls below 1e-4.
std::vector<Mat> sample_rejection_mf(const Manifold& m, const Mat& f, std::size_t n, std::uint64_t seed,
                                     RejectionStats* stats = nullptr);
/// max over the manifold of <F, X>.
double mf_log_bound(const Manifold& m, const Mat& f);

struct MhConfig {
  double step = 0.3;
  int burn_in = 1000;
  int thin = 5;
};

MhConfig default_mh_config(ManifoldKind kind);

struct MhStats {
  std::uint64_t proposals = 0;
  std::uint64_t accepted = 0;
  double rate() const { return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals); }
};

/// Random-walk Metropolis with group-action proposals:
///   Stiefel    exp(eps W) X
///   Grassmann  exp(eps W) X exp(-eps W)
///   SPD        G^T X G,  G = exp(eps E / 2)
/// W = skew part of a standard Gaussian matrix, E a standard Gaussian
/// matrix. Both are sign-symmetric so the proposal is symmetric.
std::vector<Mat> sample_mh(const ScoreModel& model, std::size_t n, const MhConfig& cfg, std::uint64_t seed,
                           const Mat* start = nullptr, MhStats* stats = nullptr);

/// Bartlett construction of the textbook Wishart law W(V, dof) with
/// E[X] = dof V. Requires dof > N - 1.
std::vector<Mat> sample_wishart(const Mat& v, double dof, std::size_t n, std::uint64_t seed);

}  // namespace ksdm

#endif  // KSDM_SAMPLING_HPP
