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
#ifndef KSDM_MKSDE_HPP
#define KSDM_MKSDE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "ksdm/kernels.hpp"
#include "ksdm/ksdstats.hpp"
#include "ksdm/models.hpp"

namespace ksdm {

enum class StatKind { U, V };

std::string to_string(StatKind kind);
StatKind stat_kind_from_string(const std::string& name);

/// Per-pair pieces of kappa_{p_theta}(x, y) = theta^T Q theta + b(x,y)^T theta
/// + b(y,x)^T theta + c(x,y), where b(x,y) pairs the x-side gradient of
/// log(e^eta kappa) with the y-side statistic gradients.
struct PairQb {
  Mat q;
  Vec b;
  double c = 0.0;
};

PairQb pair_qb(const ExponentialFamily& spec, const RadialKernel& k, const Mat& x, const Mat& y);

/// Kronecker/shuffle form on the Stiefel manifold:
///   A(X,Y) = 1/2 Z(X)^T (X^T Y (x) I_N - (X^T (x) Y) S_{N,r}) Z(Y) kappa
///   b(X,Y) = 1/2 Z(X)^T (X^T Y (x) I_N - (X^T (x) Y) S_{N,r}) vec(grad eta(Y)) kappa
///          + Z(X)^T vec(A(grad_Y log kappa Y^T) X) kappa
/// A(X,Y) equals pair_qb(X,Y).q and b(X,Y) equals pair_qb(Y,X).b.
PairQb pair_qb_vectorized_stiefel(const ExponentialFamily& spec, const RadialKernel& k, const Mat& x, const Mat& y);

/// Specialized Stiefel closed forms, b in the convention of
/// pair_qb_vectorized_stiefel. The MF forms return q = A(Y,X) = A(X,Y)^T,
///   1/2 (Y^T X (x) I_N - S_{r,N} (X (x) Y^T)) times the kernel factor,
/// which gives the same symmetrized system. The MB forms return A(X,Y) and
/// the part of b(X,Y) that is symmetric in A.
PairQb mf_gaussian_closed(const Mat& x, const Mat& y, double tau);
PairQb mb_gaussian_closed(const Mat& x, const Mat& y, double tau);
PairQb mf_inverse_quadratic_closed(const Mat& x, const Mat& y, double beta, double gamma);
PairQb mb_inverse_quadratic_closed(const Mat& x, const Mat& y, double beta, double gamma);

struct MksdeSystem {
  Mat q;
  Vec b;
  /// Statistic at theta = 0.
  double c = 0.0;
  StatKind kind = StatKind::V;
  Index n = 0;

  /// theta^T Q theta + 2 b^T theta + c: the U or V statistic at theta.
  double value(const Vec& theta) const;
};

/// Weighted average of pair blocks over ordered pairs (i != j for U).
MksdeSystem assemble(const ExponentialFamily& spec, const RadialKernel& k, const WeightedSample& sample, StatKind kind,
                     int threads = 0);

struct MksdeSolution {
  Vec theta;
  Index null_space_rank = 0;
  /// theta^T Q theta + 2 b^T theta at theta.
  double objective = 0.0;
  double min_eigenvalue = 0.0;
  bool convex = true;
  /// Orthonormal basis of the numerical null space of Q (columns).
  Mat null_basis;
};

/// theta = -Q^+ b. For U systems whose smallest eigenvalue falls below
/// -1e-6 trace(Q)/s this throws NonConvexError unless allow_nonconvex, in
/// which case the stationary point is returned with convex = false.
MksdeSolution solve(const MksdeSystem& sys, double rank_tol = 1e-12, bool allow_nonconvex = false);

struct MleOptions {
  int pool_size = 20000;
  std::uint64_t seed = 20240601;
  int max_iter = 500;
  double tol = 1e-8;
};

/// Maximum likelihood for the Stiefel matrix Fisher family with a Monte
/// Carlo normalizing constant over a fixed uniform pool.
Mat mle_numeric_mf(const std::vector<Mat>& points, const Manifold& m, const MleOptions& opts = {});
/// N times the sample mean, the small-concentration approximation.
Mat mle_small_f(const std::vector<Mat>& points, const Manifold& m);

}  // namespace ksdm

#endif  // KSDM_MKSDE_HPP
