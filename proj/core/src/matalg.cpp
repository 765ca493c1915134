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
#include "ksdm/matalg.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <sstream>

#include "ksdm/errors.hpp"

namespace ksdm {

namespace {

std::string shape(const Mat& a) {
  std::ostringstream os;
  os << a.rows() << "x" << a.cols();
  return os.str();
}

void require_square(const Mat& a, const char* what) {
  if (a.rows() != a.cols()) {
    throw DimensionError(std::string(what) + ": expected a square matrix, got " + shape(a));
  }
}

template <typename F>
Mat spectral_map(const Mat& x, const char* what, F&& f) {
  const Mat s = require_symmetric(x, what);
  Eigen::SelfAdjointEigenSolver<Mat> eig(s);
  const Vec& lambda = eig.eigenvalues();
  Vec mapped(lambda.size());
  for (Index i = 0; i < lambda.size(); ++i) {
    mapped(i) = f(lambda(i));
  }
  const Mat& q = eig.eigenvectors();
  return q * mapped.asDiagonal() * q.transpose();
}

Mat spd_map(const Mat& x, const char* what, double (*f)(double)) {
  return spectral_map(x, what, [&](double l) {
    if (!(l > 0.0)) {
      throw DomainError(std::string(what) + ": matrix is not positive definite");
    }
    return f(l);
  });
}

}  // namespace

double frobenius(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("frobenius: shape mismatch " + shape(a) + " vs " + shape(b));
  }
  return a.cwiseProduct(b).sum();
}

Vec vec(const Mat& a) { return Eigen::Map<const Vec>(a.data(), a.size()); }

Mat unvec(const Vec& v, Index rows, Index cols) {
  if (rows * cols != v.size()) {
    throw DimensionError("unvec: length does not match shape");
  }
  return Eigen::Map<const Mat>(v.data(), rows, cols);
}

Mat sym(const Mat& a) {
  require_square(a, "sym");
  return 0.5 * (a + a.transpose());
}

Mat skew(const Mat& a) {
  require_square(a, "skew");
  return 0.5 * (a - a.transpose());
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Mat unit_matrix(Index rows, Index cols, Index i, Index j) {
  Mat e = Mat::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

Mat skew_unit(Index n, Index i, Index j) {
  const double c = std::sqrt(2.0) / 2.0;
  Mat e = Mat::Zero(n, n);
  e(i, j) = c;
  e(j, i) = -c;
  return e;
}

ShuffleMatrix::ShuffleMatrix(Index n, Index r) : n_(n), r_(r), perm_(static_cast<std::size_t>(n * r)) {
  if (n <= 0 || r <= 0) {
    throw DimensionError("ShuffleMatrix: dimensions must be positive");
  }
  // A(i, j) sits at i + j n in vec(A) and at j + i r in vec(A^T).
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < r; ++j) {
      perm_[static_cast<std::size_t>(j + i * r)] = i + j * n;
    }
  }
}

Vec ShuffleMatrix::apply(const Vec& v) const {
  if (v.size() != size()) {
    throw DimensionError("ShuffleMatrix::apply: length mismatch");
  }
  Vec out(v.size());
  for (Index k = 0; k < size(); ++k) {
    out(k) = v(source(k));
  }
  return out;
}

Mat ShuffleMatrix::apply_left(const Mat& m) const {
  if (m.rows() != size()) {
    throw DimensionError("ShuffleMatrix::apply_left: row count mismatch");
  }
  Mat out(m.rows(), m.cols());
  for (Index k = 0; k < size(); ++k) {
    out.row(k) = m.row(source(k));
  }
  return out;
}

Mat ShuffleMatrix::apply_right(const Mat& m) const {
  if (m.cols() != size()) {
    throw DimensionError("ShuffleMatrix::apply_right: column count mismatch");
  }
  // (M S)(:, j) = M(:, k) where S(k, j) = 1, i.e. source(k) == j.
  Mat out(m.rows(), m.cols());
  for (Index k = 0; k < size(); ++k) {
    out.col(source(k)) = m.col(k);
  }
  return out;
}

Mat ShuffleMatrix::dense() const {
  Mat s = Mat::Zero(size(), size());
  for (Index k = 0; k < size(); ++k) {
    s(k, source(k)) = 1.0;
  }
  return s;
}

Mat pinv(const Mat& a, double rank_tol) {
  if (a.size() == 0) {
    throw DimensionError("pinv: empty matrix");
  }
  if (!(rank_tol > 0.0)) {
    throw DomainError("pinv: rank_tol must be positive");
  }
  Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  const double cutoff = rank_tol * (s.size() > 0 ? s(0) : 0.0);
  Vec inv = Vec::Zero(s.size());
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) {
      inv(i) = 1.0 / s(i);
    }
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Index numerical_rank(const Mat& a, double rank_tol) {
  if (a.size() == 0) {
    return 0;
  }
  Eigen::JacobiSVD<Mat> svd(a);
  const Vec& s = svd.singularValues();
  const double cutoff = rank_tol * s(0);
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i) {
    if (s(i) > cutoff && s(i) > 0.0) {
      ++rank;
    }
  }
  return rank;
}

Mat require_symmetric(const Mat& x, const char* what) {
  require_square(x, what);
  const double asym = (x - x.transpose()).norm();
  if (asym > 1e-10 * std::max(1.0, x.norm())) {
    throw DomainError(std::string(what) + ": matrix is not symmetric");
  }
  return 0.5 * (x + x.transpose());
}

Mat matrix_log_spd(const Mat& x) {
  return spd_map(x, "matrix_log_spd", [](double l) { return std::log(l); });
}

Mat matrix_sqrt_spd(const Mat& x) {
  return spd_map(x, "matrix_sqrt_spd", [](double l) { return std::sqrt(l); });
}

Mat matrix_inv_sqrt_spd(const Mat& x) {
  return spd_map(x, "matrix_inv_sqrt_spd", [](double l) { return 1.0 / std::sqrt(l); });
}

Mat matrix_exp_sym(const Mat& x) {
  return spectral_map(x, "matrix_exp_sym", [](double l) { return std::exp(l); });
}

Mat expm(const Mat& x) {
  require_square(x, "expm");
  return x.exp();
}

Mat logm(const Mat& x) {
  require_square(x, "logm");
  return x.log();
}

bool all_finite(const Mat& x) { return x.allFinite(); }

}  // namespace ksdm
