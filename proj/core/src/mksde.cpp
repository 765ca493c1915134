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
#include "ksdm/mksde.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ksdm/errors.hpp"
#include "ksdm/parallel.hpp"
#include "ksdm/sampling.hpp"
#include "ksdm/steinkernel.hpp"

namespace ksdm {

std::string to_string(StatKind kind) { return kind == StatKind::U ? "U" : "V"; }

StatKind stat_kind_from_string(const std::string& name) {
  if (name == "U" || name == "u") return StatKind::U;
  if (name == "V" || name == "v") return StatKind::V;
  throw DomainError("unknown statistic kind '" + name + "' (expected U or V)");
}

namespace {

// Columns vec(Pi_X(grad zeta_k(X))).
Mat projected_stack(const ExponentialFamily& spec, const Mat& x) {
  const Manifold& m = spec.manifold();
  Mat w(m.n() * m.n(), spec.dim());
  for (Index k = 0; k < spec.dim(); ++k) {
    w.col(k) = vec(killing_projection(m, x, spec.grad_zeta(k, x)));
  }
  return w;
}

struct PairScalars {
  double kappa;
  double dpsi;
  double second;
};

PairScalars pair_scalars(const Manifold& m, const RadialKernel& k, const Mat& x, const Mat& y) {
  const double s = squared_distance(x, y);
  return {std::exp(-k.psi(s)), k.dpsi(s), kernel_second_order(m, k, x, y)};
}

void require_stiefel(const ExponentialFamily& spec) {
  if (spec.manifold().kind() != ManifoldKind::Stiefel) {
    throw DomainError("vectorized form is only defined on the Stiefel manifold");
  }
}

// (I + S_{N,N}) / 2 applied to v.
Vec symmetric_part(const Vec& v, Index n) {
  const ShuffleMatrix s(n, n);
  return 0.5 * (v + s.apply(v));
}

Mat kron_core(const Mat& x, const Mat& y) {
  const Index n = x.rows();
  const Index r = x.cols();
  const ShuffleMatrix s(n, r);
  return kron(x.transpose() * y, Mat::Identity(n, n)) - s.apply_right(kron(x.transpose(), y));
}

}  // namespace

PairQb pair_qb(const ExponentialFamily& spec, const RadialKernel& k, const Mat& x, const Mat& y) {
  const Manifold& m = spec.manifold();
  const double c = killing_projection_scale(m);
  const PairScalars ps = pair_scalars(m, k, x, y);
  const Mat wx = projected_stack(spec, x);
  const Mat wy = projected_stack(spec, y);
  const Vec px = vec(killing_projection(m, x, spec.grad_eta(x) + 2.0 * ps.dpsi * (y - x)));
  const Vec py = vec(killing_projection(m, y, spec.grad_eta(y) + 2.0 * ps.dpsi * (x - y)));
  PairQb out;
  out.q = c * ps.kappa * wx.transpose() * wy;
  out.b = c * ps.kappa * wy.transpose() * px;
  out.c = ps.kappa * (c * px.dot(py) + ps.second);
  return out;
}

PairQb pair_qb_vectorized_stiefel(const ExponentialFamily& spec, const RadialKernel& k, const Mat& x, const Mat& y) {
  require_stiefel(spec);
  const double kappa = k.eval(x, y);
  const Mat zx = spec.zstack(x);
  const Mat zy = spec.zstack(y);
  const Mat core = kron_core(x, y);
  const Mat gy = k.grad_log(y, x);
  PairQb out;
  out.q = 0.5 * zx.transpose() * core * zy * kappa;
  out.b = (0.5 * zx.transpose() * core * vec(spec.grad_eta(y)) +
           zx.transpose() * vec(skew(gy * y.transpose()) * x)) *
          kappa;
  return out;
}

PairQb mf_gaussian_closed(const Mat& x, const Mat& y, double tau) {
  const Index n = x.rows();
  const Index r = x.cols();
  const double kappa = RadialKernel::gaussian(tau).eval(x, y);
  const ShuffleMatrix s_rn(r, n);
  PairQb out;
  out.q = 0.5 * (kron(y.transpose() * x, Mat::Identity(n, n)) - s_rn.apply_left(kron(x, y.transpose()))) * kappa;
  out.b = tau * vec(skew(x * y.transpose()) * x) * kappa;
  return out;
}

PairQb mb_gaussian_closed(const Mat& x, const Mat& y, double tau) {
  const Index n = x.rows();
  const double kappa = RadialKernel::gaussian(tau).eval(x, y);
  const Mat px = x * x.transpose();
  const Mat py = y * y.transpose();
  const ShuffleMatrix s(n, n);
  const Mat core = kron(px * py, Mat::Identity(n, n)) - kron(px, py);
  const Mat left = core + s.apply_left(core);
  PairQb out;
  out.q = 0.5 * (left + s.apply_right(left)) * kappa;
  out.b = symmetric_part(tau * vec(x * y.transpose() * (px - Mat::Identity(n, n))), n) * kappa;
  return out;
}

PairQb mf_inverse_quadratic_closed(const Mat& x, const Mat& y, double beta, double gamma) {
  const Index n = x.rows();
  const Index r = x.cols();
  const double base = beta + squared_distance(x, y);
  const double kappa = std::pow(base, -gamma);
  const ShuffleMatrix s_rn(r, n);
  PairQb out;
  out.q = 0.5 * kappa * (kron(y.transpose() * x, Mat::Identity(n, n)) - s_rn.apply_left(kron(x, y.transpose())));
  out.b = 2.0 * gamma * std::pow(base, -gamma - 1.0) * vec(skew(x * y.transpose()) * x);
  return out;
}

PairQb mb_inverse_quadratic_closed(const Mat& x, const Mat& y, double beta, double gamma) {
  const Index n = x.rows();
  const double base = beta + squared_distance(x, y);
  const double kappa = std::pow(base, -gamma);
  const Mat px = x * x.transpose();
  const Mat py = y * y.transpose();
  const ShuffleMatrix s(n, n);
  const Mat core = kron(px * py, Mat::Identity(n, n)) - kron(px, py);
  const Mat left = core + s.apply_left(core);
  PairQb out;
  out.q = 0.5 * kappa * (left + s.apply_right(left));
  out.b = symmetric_part(2.0 * gamma * std::pow(base, -gamma - 1.0) * vec(x * y.transpose() * (px - Mat::Identity(n, n))),
                         n);
  return out;
}

double MksdeSystem::value(const Vec& theta) const {
  if (theta.size() != b.size()) {
    throw DimensionError("theta has wrong length");
  }
  return theta.dot(q * theta) + 2.0 * b.dot(theta) + c;
}

MksdeSystem assemble(const ExponentialFamily& spec, const RadialKernel& k, const WeightedSample& sample, StatKind kind,
                     int threads) {
  sample.check();
  const std::size_t n = sample.size();
  if (kind == StatKind::U && n < 2) {
    throw DomainError("assemble: U statistic needs at least two points");
  }
  if (n < 1) {
    throw DomainError("assemble: empty sample");
  }
  const Manifold& m = spec.manifold();
  const Index s = spec.dim();
  const double cscale = killing_projection_scale(m);
  const Vec w = sample.weights();
  const auto& pts = sample.points;

  std::vector<Mat> stacks(n);
  parallel_for(n, [&](std::size_t i) { stacks[i] = projected_stack(spec, pts[i]); }, threads);

  std::vector<Mat> q_part(n);
  std::vector<Vec> b_part(n);
  std::vector<double> c_part(n, 0.0);
  parallel_for(
      n,
      [&](std::size_t i) {
        const Mat& xi = pts[i];
        Mat acc = Mat::Zero(m.n() * m.n(), s);
        Vec bi = Vec::Zero(s);
        double ci = 0.0;
        const Mat eta_i = spec.grad_eta(xi);
        for (std::size_t j = 0; j < n; ++j) {
          if (kind == StatKind::U && i == j) {
            continue;
          }
          const Mat& xj = pts[j];
          const double wij = w(static_cast<Index>(i)) * w(static_cast<Index>(j));
          const PairScalars ps = pair_scalars(m, k, xi, xj);
          const Vec pij = vec(killing_projection(m, xi, eta_i + 2.0 * ps.dpsi * (xj - xi)));
          const Vec pji = vec(killing_projection(m, xj, spec.grad_eta(xj) + 2.0 * ps.dpsi * (xi - xj)));
          const double f = wij * cscale * ps.kappa;
          acc += f * stacks[j];
          bi += f * stacks[j].transpose() * pij;
          ci += wij * ps.kappa * (cscale * pij.dot(pji) + ps.second);
        }
        q_part[i] = stacks[i].transpose() * acc;
        b_part[i] = bi;
        c_part[i] = ci;
      },
      threads);

  const double nn = static_cast<double>(n);
  const double norm = kind == StatKind::U ? nn * (nn - 1.0) : nn * nn;
  MksdeSystem sys;
  sys.kind = kind;
  sys.n = static_cast<Index>(n);
  sys.q = Mat::Zero(s, s);
  sys.b = Vec::Zero(s);
  for (std::size_t i = 0; i < n; ++i) {
    sys.q += q_part[i];
    sys.b += b_part[i];
    sys.c += c_part[i];
  }
  sys.q = sym(sys.q) / norm;
  sys.b /= norm;
  sys.c /= norm;
  return sys;
}

MksdeSolution solve(const MksdeSystem& sys, double rank_tol, bool allow_nonconvex) {
  const Index s = sys.q.rows();
  if (s == 0 || sys.q.cols() != s || sys.b.size() != s) {
    throw DimensionError("solve: malformed system");
  }
  if (!sys.q.allFinite() || !sys.b.allFinite()) {
    throw DomainError("solve: system has non-finite entries");
  }
  Eigen::SelfAdjointEigenSolver<Mat> eig(sym(sys.q));
  const Vec& lambda = eig.eigenvalues();
  MksdeSolution sol;
  sol.min_eigenvalue = lambda(0);
  const double scale = std::abs(sys.q.trace()) / static_cast<double>(s);
  if (sys.kind == StatKind::U && lambda(0) < -1e-6 * scale) {
    sol.convex = false;
    if (!allow_nonconvex) {
      std::ostringstream os;
      os << "U-statistic quadratic form is not positive semi-definite (min eigenvalue " << lambda(0) << ")";
      throw NonConvexError(os.str(), lambda(0));
    }
  }
  sol.theta = -pinv(sys.q, rank_tol) * sys.b;
  sol.null_space_rank = s - numerical_rank(sys.q, rank_tol);
  sol.objective = sol.theta.dot(sys.q * sol.theta) + 2.0 * sys.b.dot(sol.theta);
  // Eigenvalues sorted ascending in magnitude order only when PSD; pick the
  // null directions by absolute value.
  std::vector<Index> order(static_cast<std::size_t>(s));
  for (Index i = 0; i < s; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Index a, Index b) { return std::abs(lambda(a)) < std::abs(lambda(b)); });
  sol.null_basis.resize(s, sol.null_space_rank);
  for (Index c = 0; c < sol.null_space_rank; ++c) {
    sol.null_basis.col(c) = eig.eigenvectors().col(order[static_cast<std::size_t>(c)]);
  }
  return sol;
}

Mat mle_small_f(const std::vector<Mat>& points, const Manifold& m) {
  if (points.empty()) {
    throw DomainError("mle_small_f: empty sample");
  }
  Mat mean = Mat::Zero(m.rows(), m.cols());
  for (const auto& p : points) {
    mean += p;
  }
  mean /= static_cast<double>(points.size());
  return static_cast<double>(m.n()) * mean;
}

Mat mle_numeric_mf(const std::vector<Mat>& points, const Manifold& m, const MleOptions& opts) {
  if (m.kind() != ManifoldKind::Stiefel) {
    throw DomainError("mle_numeric_mf: Stiefel manifold required");
  }
  if (points.empty()) {
    throw DomainError("mle_numeric_mf: empty sample");
  }
  if (opts.pool_size < 1) {
    throw DomainError("mle_numeric_mf: pool_size must be positive");
  }
  const Index d = m.rows() * m.cols();
  const Index pool = opts.pool_size;
  Mat u(d, pool);
  {
    const auto draws = sample_uniform(m, static_cast<std::size_t>(pool), opts.seed);
    for (Index j = 0; j < pool; ++j) {
      u.col(j) = vec(draws[static_cast<std::size_t>(j)]);
    }
  }
  Vec xbar = Vec::Zero(d);
  for (const auto& p : points) {
    xbar += vec(p);
  }
  xbar /= static_cast<double>(points.size());

  // l(F) = <F, xbar> - log mean_j exp(<F, U_j>); concave.
  auto evaluate = [&](const Vec& f, Vec* grad, Mat* hess) {
    const Vec a = u.transpose() * f;
    const double amax = a.maxCoeff();
    const Vec e = (a.array() - amax).exp();
    const double z = e.sum();
    const double value = f.dot(xbar) - (amax + std::log(z / static_cast<double>(pool)));
    if (grad != nullptr) {
      const Vec wts = e / z;
      const Vec mu = u * wts;
      *grad = xbar - mu;
      if (hess != nullptr) {
        *hess = u * wts.asDiagonal() * u.transpose() - mu * mu.transpose();
      }
    }
    return value;
  };

  Vec f = Vec::Zero(d);
  Vec grad;
  Mat cov;
  double value = evaluate(f, &grad, &cov);
  for (int it = 0; it < opts.max_iter; ++it) {
    if (grad.norm() < opts.tol) {
      return unvec(f, m.rows(), m.cols());
    }
    // Newton direction on the covariance; the ridge keeps it defined when the
    // pool covariance is singular.
    const double ridge = 1e-10 * (1.0 + cov.trace());
    Vec dir = (cov + ridge * Mat::Identity(d, d)).ldlt().solve(grad);
    if (!dir.allFinite() || dir.dot(grad) <= 0.0) {
      dir = grad;
    }
    double step = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 60; ++ls) {
      const Vec trial = f + step * dir;
      const double v = evaluate(trial, nullptr, nullptr);
      if (v >= value + 1e-4 * step * grad.dot(dir)) {
        f = trial;
        moved = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) {
      break;
    }
    value = evaluate(f, &grad, &cov);
  }
  if (grad.norm() < std::sqrt(opts.tol)) {
    return unvec(f, m.rows(), m.cols());
  }
  std::ostringstream os;
  os << "mle_numeric_mf: no convergence (gradient norm " << grad.norm() << ", last iterate norm " << f.norm() << ")";
  throw ConvergenceError(os.str());
}

}  // namespace ksdm
