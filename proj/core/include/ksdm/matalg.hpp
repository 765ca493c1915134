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
#ifndef KSDM_MATALG_HPP
#define KSDM_MATALG_HPP

#include <Eigen/Dense>

#include <vector>

namespace ksdm {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

/// Frobenius inner product tr(A^T B). Throws DimensionError on shape mismatch.
double frobenius(const Mat& a, const Mat& b);

/// Column-stacking vectorization.
Vec vec(const Mat& a);
/// Inverse of vec() for the given shape.
Mat unvec(const Vec& v, Index rows, Index cols);

/// (A + A^T) / 2. Square input only.
Mat sym(const Mat& a);
/// (A - A^T) / 2. Square input only.
Mat skew(const Mat& a);

Mat kron(const Mat& a, const Mat& b);

/// E_ij: the rows x cols matrix with a single one at (i, j).
Mat unit_matrix(Index rows, Index cols, Index i, Index j);
/// (E_ij - E_ji) * sqrt(2)/2, an element of the orthonormal basis of
/// skew-symmetric n x n matrices (i < j).
Mat skew_unit(Index n, Index i, Index j);

/// Perfect shuffle S_{n,r}: the permutation with S vec(A) = vec(A^T) for
/// every n x r matrix A. Stored as an index map, materialized on request.
class ShuffleMatrix {
 public:
  ShuffleMatrix(Index n, Index r);

  Index n() const { return n_; }
  Index r() const { return r_; }
  Index size() const { return n_ * r_; }

  /// (S v)[k] = v[source(k)].
  Index source(Index k) const { return perm_[static_cast<std::size_t>(k)]; }

  Vec apply(const Vec& v) const;
  /// S * M, permuting rows.
  Mat apply_left(const Mat& m) const;
  /// M * S, permuting columns.
  Mat apply_right(const Mat& m) const;
  /// S^T, which is S_{r,n}.
  ShuffleMatrix transposed() const { return ShuffleMatrix(r_, n_); }
  Mat dense() const;

 private:
  Index n_;
  Index r_;
  std::vector<Index> perm_;
};

/// Moore-Penrose pseudoinverse via SVD. Singular values below
/// rank_tol * sigma_max are treated as zero.
Mat pinv(const Mat& a, double rank_tol = 1e-12);
/// Number of singular values above rank_tol * sigma_max.
Index numerical_rank(const Mat& a, double rank_tol = 1e-12);

/// Symmetrizes a nearly symmetric matrix; asymmetry above 1e-10 (relative)
/// is a DomainError.
Mat require_symmetric(const Mat& x, const char* what);

/// Matrix logarithm of an SPD matrix through its eigendecomposition.
Mat matrix_log_spd(const Mat& x);
/// Principal square root of an SPD matrix.
Mat matrix_sqrt_spd(const Mat& x);
/// Inverse principal square root of an SPD matrix.
Mat matrix_inv_sqrt_spd(const Mat& x);
/// Matrix exponential of a symmetric matrix.
Mat matrix_exp_sym(const Mat& x);
/// General matrix exponential (Pade, scaling and squaring).
Mat expm(const Mat& x);
/// Principal logarithm of a general real matrix without eigenvalues on the
/// closed negative real axis.
Mat logm(const Mat& x);

bool all_finite(const Mat& x);

}  // namespace ksdm

#endif  // KSDM_MATALG_HPP
