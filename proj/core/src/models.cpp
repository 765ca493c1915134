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
#include "ksdm/models.hpp"

#include <cmath>

#include "ksdm/errors.hpp"

namespace ksdm {

std::string to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Uniform:
      return "uniform";
    case FamilyKind::MatrixFisher:
      return "mf";
    case FamilyKind::MatrixBingham:
      return "mb";
    case FamilyKind::MatrixFisherBingham:
      return "mfb";
    case FamilyKind::RiemannianGaussian:
      return "rg";
    case FamilyKind::Wishart:
      return "wishart";
  }
  return "unknown";
}

FamilyKind family_kind_from_string(const std::string& name) {
  if (name == "uniform") return FamilyKind::Uniform;
  if (name == "mf") return FamilyKind::MatrixFisher;
  if (name == "mb") return FamilyKind::MatrixBingham;
  if (name == "mfb") return FamilyKind::MatrixFisherBingham;
  if (name == "rg") return FamilyKind::RiemannianGaussian;
  if (name == "wishart") return FamilyKind::Wishart;
  throw DomainError("unknown family '" + name + "'");
}

namespace {

void require_shape(const Mat& a, Index rows, Index cols, const char* what) {
  if (a.rows() != rows || a.cols() != cols) {
    throw DimensionError(std::string(what) + ": parameter has wrong shape");
  }
  if (!a.allFinite()) {
    throw DomainError(std::string(what) + ": parameter has non-finite entries");
  }
}

void require_kind(const Manifold& m, bool ok, const char* what) {
  if (!ok) {
    throw DomainError(std::string(what) + " is not supported on " + m.name());
  }
}

}  // namespace

ScoreModel ScoreModel::uniform(const Manifold& m) { return ScoreModel(FamilyKind::Uniform, m); }

ScoreModel ScoreModel::matrix_fisher(const Manifold& m, const Mat& f) {
  require_kind(m, m.kind() != ManifoldKind::Spd, "matrix Fisher family");
  require_shape(f, m.rows(), m.cols(), "matrix Fisher");
  ScoreModel s(FamilyKind::MatrixFisher, m);
  s.f_ = f;
  return s;
}

ScoreModel ScoreModel::matrix_bingham(const Manifold& m, const Mat& a) {
  require_kind(m, m.kind() == ManifoldKind::Stiefel, "matrix Bingham family");
  require_shape(a, m.n(), m.n(), "matrix Bingham");
  ScoreModel s(FamilyKind::MatrixBingham, m);
  s.a_ = a;
  s.a_sum_ = a + a.transpose();
  return s;
}

ScoreModel ScoreModel::matrix_fisher_bingham(const Manifold& m, const Mat& a, const Mat& f) {
  require_kind(m, m.kind() == ManifoldKind::Stiefel, "matrix Fisher-Bingham family");
  require_shape(a, m.n(), m.n(), "matrix Fisher-Bingham");
  require_shape(f, m.rows(), m.cols(), "matrix Fisher-Bingham");
  ScoreModel s(FamilyKind::MatrixFisherBingham, m);
  s.a_ = a;
  s.a_sum_ = a + a.transpose();
  s.f_ = f;
  return s;
}

ScoreModel ScoreModel::riemannian_gaussian(const Manifold& m, const Mat& xbar, double sigma) {
  m.validate(xbar);
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("Riemannian Gaussian: sigma must be positive");
  }
  ScoreModel s(FamilyKind::RiemannianGaussian, m);
  s.xbar_ = m.kind() == ManifoldKind::Spd ? sym(xbar) : xbar;
  s.sigma_ = sigma;
  return s;
}

ScoreModel ScoreModel::wishart(const Manifold& m, const Mat& v, double dof) {
  require_kind(m, m.kind() == ManifoldKind::Spd, "Wishart family");
  m.validate(v);
  if (!(dof > static_cast<double>(m.n()) - 1.0) || !std::isfinite(dof)) {
    throw DomainError("Wishart: dof must exceed N - 1");
  }
  ScoreModel s(FamilyKind::Wishart, m);
  s.v_ = sym(v);
  s.v_inv_ = sym(s.v_.llt().solve(Mat::Identity(m.n(), m.n())));
  s.dof_ = dof;
  return s;
}

Mat ScoreModel::score(const Mat& x) const {
  if (x.rows() != manifold_.rows() || x.cols() != manifold_.cols()) {
    throw DimensionError("score: point has wrong shape");
  }
  switch (kind_) {
    case FamilyKind::Uniform:
      return Mat::Zero(x.rows(), x.cols());
    case FamilyKind::MatrixFisher:
      return manifold_.kind() == ManifoldKind::Grassmann ? sym(f_) : f_;
    case FamilyKind::MatrixBingham:
      return a_sum_ * x;
    case FamilyKind::MatrixFisherBingham:
      return a_sum_ * x + f_;
    case FamilyKind::RiemannianGaussian:
      return riemannian_score_rg(manifold_, xbar_, sigma_, x);
    case FamilyKind::Wishart: {
      const Index n = manifold_.n();
      const Mat x_inv = sym(sym(x).llt().solve(Mat::Identity(n, n)));
      return -0.5 * v_inv_ + 0.5 * (dof_ - static_cast<double>(n) + 1.0) * x_inv;
    }
  }
  return x;
}

double ScoreModel::unnorm_logpdf(const Mat& x) const {
  if (x.rows() != manifold_.rows() || x.cols() != manifold_.cols()) {
    throw DimensionError("unnorm_logpdf: point has wrong shape");
  }
  switch (kind_) {
    case FamilyKind::Uniform:
      return 0.0;
    case FamilyKind::MatrixFisher:
      return frobenius(f_, x);
    case FamilyKind::MatrixBingham:
      return (x.transpose() * a_ * x).trace();
    case FamilyKind::MatrixFisherBingham:
      return (x.transpose() * a_ * x).trace() + frobenius(f_, x);
    case FamilyKind::RiemannianGaussian: {
      const double d = manifold_.dist(x, xbar_);
      return -d * d / (2.0 * sigma_ * sigma_);
    }
    case FamilyKind::Wishart: {
      Eigen::LLT<Mat> llt(sym(x));
      if (llt.info() != Eigen::Success) {
        throw DomainError("Wishart log-density: matrix not positive definite");
      }
      const Mat& l = llt.matrixL();
      const double logdet = 2.0 * l.diagonal().array().log().sum();
      const double n = static_cast<double>(manifold_.n());
      return 0.5 * (dof_ - n + 1.0) * logdet - 0.5 * frobenius(v_inv_, x);
    }
  }
  return 0.0;
}

double wishart_bartlett_dof(Index n, double r) { return r - static_cast<double>(n) + 1.0; }

double wishart_model_dof(Index n, double bartlett_dof) { return bartlett_dof + static_cast<double>(n) - 1.0; }

ExponentialFamily::ExponentialFamily(FamilyKind kind, const Manifold& m) : kind_(kind), manifold_(m), dim_(0) {
  const Index n = m.n();
  const Index r = m.r();
  switch (m.kind()) {
    case ManifoldKind::Stiefel:
      if (kind == FamilyKind::MatrixFisher) {
        dim_ = n * r;
      } else if (kind == FamilyKind::MatrixBingham) {
        dim_ = n * n;
      } else if (kind == FamilyKind::MatrixFisherBingham) {
        dim_ = n * n + n * r;
      }
      break;
    case ManifoldKind::Grassmann:
      if (kind == FamilyKind::MatrixFisher) {
        dim_ = n * n;
      } else if (kind == FamilyKind::MatrixBingham || kind == FamilyKind::MatrixFisherBingham) {
        throw DomainError("on the Grassmann manifold the Bingham families reduce to matrix Fisher; use mf");
      }
      break;
    case ManifoldKind::Spd:
      break;
  }
  if (dim_ == 0) {
    throw DomainError("no exponential-family form for " + to_string(kind) + " on " + m.name());
  }
}

Vec ExponentialFamily::zeta(const Mat& x) const {
  switch (kind_) {
    case FamilyKind::MatrixFisher:
      return vec(x);
    case FamilyKind::MatrixBingham:
      return vec(x * x.transpose());
    case FamilyKind::MatrixFisherBingham: {
      Vec z(dim_);
      const Index nn = manifold_.n() * manifold_.n();
      z.head(nn) = vec(x * x.transpose());
      z.tail(dim_ - nn) = vec(x);
      return z;
    }
    default:
      break;
  }
  throw DomainError("zeta: unsupported family");
}

double ExponentialFamily::eta(const Mat&) const { return 0.0; }

Mat ExponentialFamily::grad_eta(const Mat& x) const { return Mat::Zero(x.rows(), x.cols()); }

Mat ExponentialFamily::grad_zeta(Index k, const Mat& x) const {
  if (k < 0 || k >= dim_) {
    throw DimensionError("grad_zeta: component out of range");
  }
  const Index n = manifold_.n();
  const Index rows = x.rows();
  const Index cols = x.cols();
  auto fisher = [&](Index kk) { return unit_matrix(rows, cols, kk % rows, kk / rows); };
  auto bingham = [&](Index kk) {
    const Index i = kk % n;
    const Index j = kk / n;
    return Mat((unit_matrix(n, n, i, j) + unit_matrix(n, n, j, i)) * x);
  };
  switch (kind_) {
    case FamilyKind::MatrixFisher:
      return fisher(k);
    case FamilyKind::MatrixBingham:
      return bingham(k);
    case FamilyKind::MatrixFisherBingham:
      return k < n * n ? bingham(k) : fisher(k - n * n);
    default:
      break;
  }
  throw DomainError("grad_zeta: unsupported family");
}

Mat ExponentialFamily::zstack(const Mat& x) const {
  Mat z(x.size(), dim_);
  for (Index k = 0; k < dim_; ++k) {
    z.col(k) = vec(grad_zeta(k, x));
  }
  return z;
}

Mat ExponentialFamily::f_of(const Vec& theta) const {
  if (theta.size() != dim_) {
    throw DimensionError("theta has wrong length");
  }
  const Index rows = manifold_.rows();
  const Index cols = manifold_.cols();
  if (kind_ == FamilyKind::MatrixFisher) {
    return unvec(theta, rows, cols);
  }
  if (kind_ == FamilyKind::MatrixFisherBingham) {
    return unvec(theta.tail(rows * cols), rows, cols);
  }
  return Mat();
}

Mat ExponentialFamily::a_of(const Vec& theta) const {
  if (theta.size() != dim_) {
    throw DimensionError("theta has wrong length");
  }
  const Index n = manifold_.n();
  if (kind_ == FamilyKind::MatrixBingham || kind_ == FamilyKind::MatrixFisherBingham) {
    return unvec(theta.head(n * n), n, n);
  }
  return Mat();
}

ScoreModel ExponentialFamily::model(const Vec& theta) const {
  switch (kind_) {
    case FamilyKind::MatrixFisher:
      return ScoreModel::matrix_fisher(manifold_, f_of(theta));
    case FamilyKind::MatrixBingham:
      return ScoreModel::matrix_bingham(manifold_, a_of(theta));
    case FamilyKind::MatrixFisherBingham:
      return ScoreModel::matrix_fisher_bingham(manifold_, a_of(theta), f_of(theta));
    default:
      break;
  }
  throw DomainError("model: unsupported family");
}

Vec ExponentialFamily::pack(const ScoreModel& model) const {
  if (model.kind() != kind_ || !(model.manifold() == manifold_)) {
    throw DomainError("pack: model does not belong to this family");
  }
  switch (kind_) {
    case FamilyKind::MatrixFisher:
      return vec(model.f());
    case FamilyKind::MatrixBingham:
      return vec(model.a());
    case FamilyKind::MatrixFisherBingham: {
      Vec t(dim_);
      const Index nn = manifold_.n() * manifold_.n();
      t.head(nn) = vec(model.a());
      t.tail(dim_ - nn) = vec(model.f());
      return t;
    }
    default:
      break;
  }
  throw DomainError("pack: unsupported family");
}

ExponentialFamily expfam_for(FamilyKind kind, const Manifold& m) { return ExponentialFamily(kind, m); }

}  // namespace ksdm
