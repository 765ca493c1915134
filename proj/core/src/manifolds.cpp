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
#include "ksdm/manifolds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ksdm/errors.hpp"

namespace ksdm {

std::string to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Stiefel:
      return "stiefel";
    case ManifoldKind::Grassmann:
      return "grassmann";
    case ManifoldKind::Spd:
      return "spd";
  }
  return "unknown";
}

ManifoldKind manifold_kind_from_string(const std::string& name) {
  if (name == "stiefel") return ManifoldKind::Stiefel;
  if (name == "grassmann") return ManifoldKind::Grassmann;
  if (name == "spd") return ManifoldKind::Spd;
  throw DomainError("unknown manifold kind '" + name + "'");
}

Manifold::Manifold(ManifoldKind kind, Index n, Index r) : kind_(kind), n_(n), r_(r) {
  if (n < 1) {
    throw DimensionError("manifold dimension N must be positive");
  }
  if (kind == ManifoldKind::Spd) {
    r_ = n;
    return;
  }
  if (r < 1 || r > n) {
    throw DimensionError("manifold rank r must satisfy 1 <= r <= N");
  }
}

std::string Manifold::name() const {
  std::ostringstream os;
  switch (kind_) {
    case ManifoldKind::Stiefel:
      os << "V_" << r_ << "(" << n_ << ")";
      break;
    case ManifoldKind::Grassmann:
      os << "G_" << r_ << "(" << n_ << ")";
      break;
    case ManifoldKind::Spd:
      os << "P(" << n_ << ")";
      break;
  }
  return os.str();
}

Index Manifold::dim() const {
  switch (kind_) {
    case ManifoldKind::Stiefel:
      return n_ * r_ - r_ * (r_ + 1) / 2;
    case ManifoldKind::Grassmann:
      return r_ * (n_ - r_);
    case ManifoldKind::Spd:
      return n_ * (n_ + 1) / 2;
  }
  return 0;
}

void Manifold::check_shape(const Mat& x, const char* what) const {
  if (x.rows() != rows() || x.cols() != cols()) {
    std::ostringstream os;
    os << what << ": expected " << rows() << "x" << cols() << " for " << name() << ", got " << x.rows() << "x"
       << x.cols();
    throw DimensionError(os.str());
  }
}

void Manifold::validate(const Mat& x) const {
  check_shape(x, "validate");
  if (!x.allFinite()) {
    throw DomainError("validate: non-finite entries");
  }
  switch (kind_) {
    case ManifoldKind::Stiefel: {
      const double err = (x.transpose() * x - Mat::Identity(r_, r_)).norm();
      if (err > kPointTol) {
        throw DomainError("validate: columns not orthonormal (residual " + std::to_string(err) + ")");
      }
      return;
    }
    case ManifoldKind::Grassmann: {
      if ((x - x.transpose()).norm() > kPointTol) {
        throw DomainError("validate: projector not symmetric");
      }
      if ((x * x - x).norm() > kPointTol) {
        throw DomainError("validate: matrix not idempotent");
      }
      if (std::abs(x.trace() - static_cast<double>(r_)) > kPointTol) {
        throw DomainError("validate: projector trace differs from r");
      }
      return;
    }
    case ManifoldKind::Spd: {
      const Mat s = require_symmetric(x, "validate");
      Eigen::SelfAdjointEigenSolver<Mat> eig(s, Eigen::EigenvaluesOnly);
      if (!(eig.eigenvalues()(0) > 0.0)) {
        throw DomainError("validate: matrix not positive definite");
      }
      return;
    }
  }
}

bool Manifold::contains(const Mat& x, double tol) const {
  if (x.rows() != rows() || x.cols() != cols() || !x.allFinite()) {
    return false;
  }
  switch (kind_) {
    case ManifoldKind::Stiefel:
      return (x.transpose() * x - Mat::Identity(r_, r_)).norm() <= tol;
    case ManifoldKind::Grassmann:
      return (x - x.transpose()).norm() <= tol && (x * x - x).norm() <= tol &&
             std::abs(x.trace() - static_cast<double>(r_)) <= tol;
    case ManifoldKind::Spd: {
      if ((x - x.transpose()).norm() > 1e-10 * std::max(1.0, x.norm())) {
        return false;
      }
      Eigen::SelfAdjointEigenSolver<Mat> eig(sym(x), Eigen::EigenvaluesOnly);
      return eig.eigenvalues()(0) > 0.0;
    }
  }
  return false;
}

Mat Manifold::project(const Mat& x) const {
  check_shape(x, "project");
  switch (kind_) {
    case ManifoldKind::Stiefel: {
      Eigen::JacobiSVD<Mat> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
      return svd.matrixU() * svd.matrixV().transpose();
    }
    case ManifoldKind::Grassmann: {
      const Mat u = grassmann_basis(sym(x), r_);
      return u * u.transpose();
    }
    case ManifoldKind::Spd:
      return sym(x);
  }
  return x;
}

double Manifold::tangent_residual(const Mat& x, const Mat& d) const {
  check_shape(x, "tangent_residual");
  check_shape(d, "tangent_residual");
  switch (kind_) {
    case ManifoldKind::Stiefel:
      return sym(x.transpose() * d).norm();
    case ManifoldKind::Grassmann:
      return (d - d.transpose()).norm() + (x * d + d * x - d).norm();
    case ManifoldKind::Spd:
      return (d - d.transpose()).norm();
  }
  return 0.0;
}

Index Manifold::killing_count() const {
  return kind_ == ManifoldKind::Spd ? n_ * n_ : n_ * (n_ - 1) / 2;
}

void Manifold::pair_of(Index l, Index& i, Index& j) const {
  if (l < 0 || l >= killing_count()) {
    throw DimensionError("killing field index out of range");
  }
  if (kind_ == ManifoldKind::Spd) {
    i = l % n_;
    j = l / n_;
    return;
  }
  Index k = l;
  for (i = 0; i < n_; ++i) {
    const Index row = n_ - 1 - i;
    if (k < row) {
      j = i + 1 + k;
      return;
    }
    k -= row;
  }
}

Mat Manifold::killing_generator(Index l) const {
  Index i = 0;
  Index j = 0;
  pair_of(l, i, j);
  if (kind_ == ManifoldKind::Spd) {
    return unit_matrix(n_, n_, i, j);
  }
  return skew_unit(n_, i, j);
}

Mat Manifold::killing_tangent(Index l, const Mat& x) const {
  check_shape(x, "killing_tangent");
  const Mat g = killing_generator(l);
  switch (kind_) {
    case ManifoldKind::Stiefel:
      return g * x;
    case ManifoldKind::Grassmann:
      return g * x - x * g;
    case ManifoldKind::Spd:
      return g.transpose() * x + x * g;
  }
  return x;
}

Mat Manifold::group_action(Index l, double t, const Mat& x) const {
  check_shape(x, "group_action");
  const Mat e = expm(t * killing_generator(l));
  switch (kind_) {
    case ManifoldKind::Stiefel:
      return e * x;
    case ManifoldKind::Grassmann:
      return e * x * e.transpose();
    case ManifoldKind::Spd:
      return e.transpose() * x * e;
  }
  return x;
}

double Manifold::directional_derivative(const Mat& grad, Index l, const Mat& x) const {
  check_shape(grad, "directional_derivative");
  return frobenius(grad, killing_tangent(l, x));
}

Mat Manifold::exp(const Mat& x, const Mat& d) const {
  check_shape(x, "exp");
  check_shape(d, "exp");
  switch (kind_) {
    case ManifoldKind::Stiefel:
      return stiefel_exp(x, d);
    case ManifoldKind::Grassmann:
      return grassmann_exp(x, d);
    case ManifoldKind::Spd:
      return spd_exp(x, d);
  }
  return x;
}

Mat Manifold::log(const Mat& x, const Mat& y) const {
  check_shape(x, "log");
  check_shape(y, "log");
  switch (kind_) {
    case ManifoldKind::Stiefel:
      return stiefel_log(x, y);
    case ManifoldKind::Grassmann:
      return grassmann_log(x, y);
    case ManifoldKind::Spd:
      return spd_log(x, y);
  }
  return x;
}

double Manifold::tangent_norm(const Mat& x, const Mat& d) const {
  switch (kind_) {
    case ManifoldKind::Stiefel: {
      const double g = (d.transpose() * d).trace() - 0.5 * (x.transpose() * d).squaredNorm();
      return std::sqrt(std::max(0.0, g));
    }
    case ManifoldKind::Grassmann:
      return std::sqrt(0.5 * (d * d).trace());
    case ManifoldKind::Spd: {
      const Mat s = matrix_inv_sqrt_spd(x);
      return (s * d * s).norm();
    }
  }
  return 0.0;
}

double Manifold::dist(const Mat& x, const Mat& y) const {
  check_shape(x, "dist");
  check_shape(y, "dist");
  switch (kind_) {
    case ManifoldKind::Stiefel:
      return tangent_norm(x, stiefel_log(x, y));
    case ManifoldKind::Grassmann: {
      const Mat u = grassmann_basis(x, r_);
      const Mat v = grassmann_basis(y, r_);
      Eigen::JacobiSVD<Mat> svd(u.transpose() * v);
      double s2 = 0.0;
      for (Index i = 0; i < svd.singularValues().size(); ++i) {
        const double theta = std::acos(std::clamp(svd.singularValues()(i), -1.0, 1.0));
        s2 += theta * theta;
      }
      return std::sqrt(s2);
    }
    case ManifoldKind::Spd:
      return spd_dist(x, y);
  }
  return 0.0;
}

Mat orthogonal_complement(const Mat& x) {
  const Index n = x.rows();
  const Index r = x.cols();
  Eigen::HouseholderQR<Mat> qr(x);
  const Mat q = qr.householderQ() * Mat::Identity(n, n);
  return q.rightCols(n - r);
}

Mat stiefel_exp(const Mat& x, const Mat& d) {
  const Index n = x.rows();
  const Index r = x.cols();
  const Mat a = skew(x.transpose() * d);
  if (r == n) {
    return x * expm(a);
  }
  const Mat xp = orthogonal_complement(x);
  const Mat b = xp.transpose() * d;
  Mat m = Mat::Zero(n, n);
  m.topLeftCorner(r, r) = a;
  m.topRightCorner(r, n - r) = -b.transpose();
  m.bottomLeftCorner(n - r, r) = b;
  Mat q(n, n);
  q << x, xp;
  return q * expm(m).leftCols(r);
}

Mat stiefel_log(const Mat& x, const Mat& y, double tol, int max_iter) {
  const Index n = x.rows();
  const Index r = x.cols();
  if (y.rows() != n || y.cols() != r) {
    throw DimensionError("stiefel_log: shape mismatch");
  }
  if (r == n) {
    const Mat v = x.transpose() * y;
    if (v.determinant() < 0.0) {
      throw CutLocusError("stiefel_log: points lie in different components of O(N)");
    }
    const Mat l = logm(v);
    if (!l.allFinite()) {
      throw CutLocusError("stiefel_log: logarithm undefined");
    }
    return x * skew(l);
  }
  const Index p = n - r;
  const Mat xp = orthogonal_complement(x);
  const Mat yp = orthogonal_complement(y);
  Mat v(n, n);
  v.topLeftCorner(r, r) = x.transpose() * y;
  v.topRightCorner(r, p) = x.transpose() * yp;
  v.bottomLeftCorner(p, r) = xp.transpose() * y;
  v.bottomRightCorner(p, p) = xp.transpose() * yp;
  if (v.determinant() < 0.0) {
    v.col(r) *= -1.0;
  }
  for (int it = 0; it < max_iter; ++it) {
    Mat l = logm(v);
    if (!l.allFinite()) {
      throw CutLocusError("stiefel_log: logarithm undefined");
    }
    l = skew(l);
    const Mat c = l.bottomRightCorner(p, p);
    if (c.norm() < tol) {
      return x * l.topLeftCorner(r, r) + xp * l.bottomLeftCorner(p, r);
    }
    v.rightCols(p) = v.rightCols(p) * expm(-c);
  }
  throw ConvergenceError("stiefel_log: no convergence; target may be beyond the injectivity radius");
}

Mat grassmann_basis(const Mat& p, Index r) {
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym(p));
  return eig.eigenvectors().rightCols(r);
}

Mat grassmann_log(const Mat& p, const Mat& q) {
  const Index n = p.rows();
  const Index r = static_cast<Index>(std::lround(p.trace()));
  if (r <= 0 || r > n) {
    throw DomainError("grassmann_log: invalid projector");
  }
  const Mat u = grassmann_basis(p, r);
  const Mat v = grassmann_basis(q, r);
  const Mat m = u.transpose() * v;
  Eigen::JacobiSVD<Mat> msvd(m);
  if (msvd.singularValues()(r - 1) < 1e-10) {
    throw CutLocusError("grassmann_log: principal angle at pi/2");
  }
  const Mat t = (v - u * m) * m.inverse();
  Eigen::JacobiSVD<Mat> svd(t, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vec theta = svd.singularValues();
  for (Index i = 0; i < theta.size(); ++i) {
    theta(i) = std::atan(theta(i));
  }
  const Mat du = svd.matrixU() * theta.asDiagonal() * svd.matrixV().transpose();
  return du * u.transpose() + u * du.transpose();
}

Mat grassmann_exp(const Mat& p, const Mat& d) {
  const Index r = static_cast<Index>(std::lround(p.trace()));
  const Mat u = grassmann_basis(p, r);
  const Mat du = d * u;
  Eigen::JacobiSVD<Mat> svd(du, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vec& s = svd.singularValues();
  const Vec c = s.array().cos();
  const Vec sn = s.array().sin();
  const Mat& rm = svd.matrixV();
  Mat u1 = u * rm * c.asDiagonal() * rm.transpose() + svd.matrixU() * sn.asDiagonal() * rm.transpose();
  Eigen::HouseholderQR<Mat> qr(u1);
  u1 = qr.householderQ() * Mat::Identity(u1.rows(), u1.cols());
  return sym(u1 * u1.transpose());
}

Mat spd_exp(const Mat& x, const Mat& d) {
  const Mat s = matrix_sqrt_spd(x);
  const Mat si = matrix_inv_sqrt_spd(x);
  return sym(s * matrix_exp_sym(sym(si * d * si)) * s);
}

Mat spd_log(const Mat& x, const Mat& y) {
  const Mat s = matrix_sqrt_spd(x);
  const Mat si = matrix_inv_sqrt_spd(x);
  return sym(s * matrix_log_spd(sym(si * y * si)) * s);
}

double spd_dist(const Mat& x, const Mat& y) {
  const Mat xs = require_symmetric(x, "spd_dist");
  const Mat ys = require_symmetric(y, "spd_dist");
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> eig(ys, xs, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw DomainError("spd_dist: matrix not positive definite");
  }
  double s2 = 0.0;
  for (Index i = 0; i < eig.eigenvalues().size(); ++i) {
    const double l = eig.eigenvalues()(i);
    if (!(l > 0.0)) {
      throw DomainError("spd_dist: matrix not positive definite");
    }
    s2 += std::log(l) * std::log(l);
  }
  return std::sqrt(s2);
}

Mat riemannian_score_rg(const Manifold& m, const Mat& xbar, double sigma, const Mat& x) {
  if (!(sigma > 0.0)) {
    throw DomainError("riemannian_score_rg: sigma must be positive");
  }
  const double s2 = sigma * sigma;
  switch (m.kind()) {
    case ManifoldKind::Stiefel: {
      const Mat proj = Mat::Identity(m.n(), m.n()) - 0.5 * x * x.transpose();
      return proj * stiefel_log(x, xbar) / s2;
    }
    case ManifoldKind::Grassmann:
      return grassmann_log(x, xbar) / (2.0 * s2);
    case ManifoldKind::Spd: {
      // Log(Xbar^{-1} X) X^{-1}, evaluated in the symmetric form
      // Xbar^{-1/2} log(Z) Z^{-1} Xbar^{-1/2} with Z = Xbar^{-1/2} X Xbar^{-1/2}.
      const Mat h = matrix_inv_sqrt_spd(xbar);
      Eigen::SelfAdjointEigenSolver<Mat> eig(sym(h * x * h));
      Vec f = eig.eigenvalues();
      for (Index i = 0; i < f.size(); ++i) {
        if (!(f(i) > 0.0)) {
          throw DomainError("riemannian_score_rg: matrix not positive definite");
        }
        f(i) = std::log(f(i)) / f(i);
      }
      const Mat& q = eig.eigenvectors();
      return -sym(h * q * f.asDiagonal() * q.transpose() * h) / s2;
    }
  }
  return x;
}

}  // namespace ksdm
