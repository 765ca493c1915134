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
#ifndef KSDM_MANIFOLDS_HPP
#define KSDM_MANIFOLDS_HPP

#include <string>

#include "ksdm/matalg.hpp"

namespace ksdm {

enum class ManifoldKind { Stiefel, Grassmann, Spd };

std::string to_string(ManifoldKind kind);
/// Accepts "stiefel", "grassmann", "spd". Throws DomainError otherwise.
ManifoldKind manifold_kind_from_string(const std::string& name);

/// One of V_r(N) (N x r orthonormal frames), G_r(N) (rank-r orthogonal
/// projectors, stored N x N) or P(N) (SPD matrices). r is ignored for P(N).
///
/// Points are plain matrices; validate() checks them. Killing fields are
/// indexed 0..killing_count()-1: pairs i<j in row order for Stiefel and
/// Grassmann, l = i + j N over all (i, j) for SPD.
class Manifold {
 public:
  static constexpr double kPointTol = 1e-8;

  Manifold(ManifoldKind kind, Index n, Index r = 0);

  static Manifold stiefel(Index n, Index r) { return Manifold(ManifoldKind::Stiefel, n, r); }
  static Manifold grassmann(Index n, Index r) { return Manifold(ManifoldKind::Grassmann, n, r); }
  static Manifold spd(Index n) { return Manifold(ManifoldKind::Spd, n, n); }

  ManifoldKind kind() const { return kind_; }
  Index n() const { return n_; }
  Index r() const { return r_; }
  std::string name() const;

  Index rows() const { return n_; }
  Index cols() const { return kind_ == ManifoldKind::Stiefel ? r_ : n_; }
  /// Intrinsic dimension.
  Index dim() const;

  /// Throws DimensionError / DomainError if X is not a point within
  /// kPointTol. SPD points are symmetrized before the eigenvalue check.
  void validate(const Mat& x) const;
  bool contains(const Mat& x, double tol = kPointTol) const;

  /// Snaps a slightly drifted representative back onto the manifold
  /// (polar factor, eigen-projection, or symmetrization).
  Mat project(const Mat& x) const;

  /// Distance of D from the tangent space at X (Frobenius norm of the
  /// violated constraints).
  double tangent_residual(const Mat& x, const Mat& d) const;

  Index killing_count() const;
  /// The generator matrix of field l: a skew basis element for Stiefel and
  /// Grassmann, E_ij for SPD.
  Mat killing_generator(Index l) const;
  /// K^l_X.
  Mat killing_tangent(Index l, const Mat& x) const;
  /// exp(t g) acting on X, so that d/dt at 0 is killing_tangent(l, X).
  Mat group_action(Index l, double t, const Mat& x) const;
  /// <grad, K^l_X>_F.
  double directional_derivative(const Mat& grad, Index l, const Mat& x) const;

  /// Riemannian exponential. Stiefel uses the canonical metric, Grassmann
  /// the metric g(D1, D2) = tr(D1 D2)/2 on projectors, SPD the
  /// affine-invariant metric.
  Mat exp(const Mat& x, const Mat& d) const;
  /// Riemannian logarithm. Throws CutLocusError or ConvergenceError.
  Mat log(const Mat& x, const Mat& y) const;
  /// Norm of tangent D at X in the metric above.
  double tangent_norm(const Mat& x, const Mat& d) const;
  double dist(const Mat& x, const Mat& y) const;

  bool operator==(const Manifold& other) const {
    return kind_ == other.kind_ && n_ == other.n_ && r_ == other.r_;
  }

 private:
  void check_shape(const Mat& x, const char* what) const;
  void pair_of(Index l, Index& i, Index& j) const;

  ManifoldKind kind_;
  Index n_;
  Index r_;
};

/// Stiefel canonical-metric geodesic.
Mat stiefel_exp(const Mat& x, const Mat& d);
/// Iterative Stiefel logarithm (canonical metric).
Mat stiefel_log(const Mat& x, const Mat& y, double tol = 1e-10, int max_iter = 100);
/// Orthonormal completion X_perp with [X X_perp] orthogonal.
Mat orthogonal_complement(const Mat& x);

/// Grassmann exp/log on projectors.
Mat grassmann_exp(const Mat& p, const Mat& d);
Mat grassmann_log(const Mat& p, const Mat& q);
/// Top-r eigenvectors of a projector.
Mat grassmann_basis(const Mat& p, Index r);

Mat spd_exp(const Mat& x, const Mat& d);
Mat spd_log(const Mat& x, const Mat& y);
/// sqrt(tr Log^2(X^{-1} Y)).
double spd_dist(const Mat& x, const Mat& y);

/// Euclidean-gradient representative of -d^2(X, Xbar) / (2 sigma^2).
Mat riemannian_score_rg(const Manifold& m, const Mat& xbar, double sigma, const Mat& x);

}  // namespace ksdm

#endif  // KSDM_MANIFOLDS_HPP
