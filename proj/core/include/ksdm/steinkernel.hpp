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
#ifndef KSDM_STEINKERNEL_HPP
#define KSDM_STEINKERNEL_HPP

#include <vector>

#include "ksdm/kernels.hpp"
#include "ksdm/manifolds.hpp"
#include "ksdm/models.hpp"

namespace ksdm {

enum class SteinMode { ClosedForm, BruteForce, FiniteDifference };

/// Pi_X with sum_l (K^l_X f)(K^l_Y g) = c <Pi_X(grad f), Pi_Y(grad g)>_F:
///   Stiefel    A(G X^T)        c = 1
///   Grassmann  A(S(G) X)       c = 4
///   SPD        X S(G)          c = 4
Mat killing_projection(const Manifold& m, const Mat& x, const Mat& g);
double killing_projection_scale(const Manifold& m);

/// sum_l K^l_Y K^l_X log kappa(X, Y) for a radial kernel, closed form.
double kernel_second_order(const Manifold& m, const RadialKernel& k, const Mat& x, const Mat& y);

/// kappa_p(X, Y) in closed form given precomputed scores at X and Y.
double kp_closed_scores(const Manifold& m, const RadialKernel& k, const Mat& x, const Mat& y, const Mat& sx,
                        const Mat& sy);

class SteinKernel {
 public:
  SteinKernel(ScoreModel model, RadialKernel kernel, SteinMode mode = SteinMode::ClosedForm, double h = 1e-4);

  const Manifold& manifold() const { return model_.manifold(); }
  const ScoreModel& model() const { return model_; }
  const RadialKernel& kernel() const { return kernel_; }
  SteinMode mode() const { return mode_; }

  /// Evaluates with the configured mode.
  double operator()(const Mat& x, const Mat& y) const;

  double closed(const Mat& x, const Mat& y) const;
  /// Explicit loop over the killing basis, analytic derivatives.
  double bruteforce(const Mat& x, const Mat& y) const;
  /// Every killing derivative by central differences along group-action
  /// curves with step h.
  double finite_difference(const Mat& x, const Mat& y) const;

 private:
  ScoreModel model_;
  RadialKernel kernel_;
  SteinMode mode_;
  double h_;
};

/// (kappa_p(x_i, x_j))_ij. Upper triangle computed, then mirrored. Closed
/// form mode evaluates each score once.
Mat stein_gram(const SteinKernel& ev, const std::vector<Mat>& points, int threads = 0);

}  // namespace ksdm

#endif  // KSDM_STEINKERNEL_HPP
