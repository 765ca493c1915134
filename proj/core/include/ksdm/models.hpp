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
#ifndef KSDM_MODELS_HPP
#define KSDM_MODELS_HPP

#include <string>

#include "ksdm/manifolds.hpp"
#include "ksdm/matalg.hpp"

namespace ksdm {

enum class FamilyKind {
  Uniform,
  MatrixFisher,
  MatrixBingham,
  MatrixFisherBingham,
  RiemannianGaussian,
  Wishart,
};

std::string to_string(FamilyKind kind);
/// "uniform", "mf", "mb", "mfb", "rg", "wishart".
FamilyKind family_kind_from_string(const std::string& name);

/// Unnormalized log-density and its Euclidean gradient (the score) for one
/// parametric family on one manifold.
///
///   MF       tr(F^T X)                      Stiefel, Grassmann
///   MB       tr(X^T A X)                    Stiefel
///   MFB      tr(X^T A X) + tr(F^T X)        Stiefel
///   RG       -d(X, Xbar)^2 / (2 sigma^2)    all three
///   Wishart  (r-N+1)/2 log|X| - tr(V^-1 X)/2  SPD
///   Uniform  0                              all three
///
/// Wishart densities are taken relative to the affine-invariant volume on
/// P(N); see wishart_bartlett_dof().
class ScoreModel {
 public:
  static ScoreModel uniform(const Manifold& m);
  static ScoreModel matrix_fisher(const Manifold& m, const Mat& f);
  static ScoreModel matrix_bingham(const Manifold& m, const Mat& a);
  static ScoreModel matrix_fisher_bingham(const Manifold& m, const Mat& a, const Mat& f);
  static ScoreModel riemannian_gaussian(const Manifold& m, const Mat& xbar, double sigma);
  static ScoreModel wishart(const Manifold& m, const Mat& v, double dof);

  FamilyKind kind() const { return kind_; }
  const Manifold& manifold() const { return manifold_; }
  const Mat& f() const { return f_; }
  const Mat& a() const { return a_; }
  const Mat& xbar() const { return xbar_; }
  double sigma() const { return sigma_; }
  const Mat& v() const { return v_; }
  double dof() const { return dof_; }

  Mat score(const Mat& x) const;
  double unnorm_logpdf(const Mat& x) const;

 private:
  ScoreModel(FamilyKind kind, const Manifold& m) : kind_(kind), manifold_(m) {}

  FamilyKind kind_;
  Manifold manifold_;
  Mat f_;
  Mat a_;
  Mat a_sum_;
  Mat xbar_;
  double sigma_ = 1.0;
  Mat v_;
  Mat v_inv_;
  double dof_ = 0.0;
};

/// Degrees of freedom of the textbook (Lebesgue-density) Wishart law that
/// is stationary for ScoreModel::wishart with parameter r.
double wishart_bartlett_dof(Index n, double r);
/// Inverse of wishart_bartlett_dof().
double wishart_model_dof(Index n, double bartlett_dof);

/// log p_theta(X) = theta^T zeta(X) + eta(X). theta is the column-major vec
/// of the natural parameter; MFB packs (vec(A), vec(F)).
class ExponentialFamily {
 public:
  ExponentialFamily(FamilyKind kind, const Manifold& m);

  FamilyKind kind() const { return kind_; }
  const Manifold& manifold() const { return manifold_; }
  /// Statistic dimension s.
  Index dim() const { return dim_; }

  Vec zeta(const Mat& x) const;
  double eta(const Mat& x) const;
  Mat grad_eta(const Mat& x) const;
  /// Euclidean gradient of zeta_k.
  Mat grad_zeta(Index k, const Mat& x) const;
  /// Z(X): column k is vec(grad_zeta(k, X)).
  Mat zstack(const Mat& x) const;

  ScoreModel model(const Vec& theta) const;
  Vec pack(const ScoreModel& model) const;
  /// F block of theta (MF, MFB), empty otherwise.
  Mat f_of(const Vec& theta) const;
  /// A block of theta (MB, MFB), empty otherwise.
  Mat a_of(const Vec& theta) const;

 private:
  FamilyKind kind_;
  Manifold manifold_;
  Index dim_;
};

ExponentialFamily expfam_for(FamilyKind kind, const Manifold& m);

}  // namespace ksdm

#endif  // KSDM_MODELS_HPP
