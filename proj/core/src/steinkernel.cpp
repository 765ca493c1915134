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
#include "ksdm/steinkernel.hpp"

#include <cmath>

#include "ksdm/errors.hpp"
#include "ksdm/parallel.hpp"

namespace ksdm {

Mat killing_projection(const Manifold& m, const Mat& x, const Mat& g) {
  switch (m.kind()) {
    case ManifoldKind::Stiefel:
      return skew(g * x.transpose());
    case ManifoldKind::Grassmann:
      return skew(sym(g) * x);
    case ManifoldKind::Spd:
      return x * sym(g);
  }
  return g;
}

double killing_projection_scale(const Manifold& m) { return m.kind() == ManifoldKind::Stiefel ? 1.0 : 4.0; }

double kernel_second_order(const Manifold& m, const RadialKernel& k, const Mat& x, const Mat& y) {
  const double s = squared_distance(x, y);
  const double d1 = k.dpsi(s);
  const double d2 = k.d2psi(s);
  const double n = static_cast<double>(m.n());
  switch (m.kind()) {
    case ManifoldKind::Stiefel:
      return (n - 1.0) * d1 * frobenius(x, y) + 4.0 * d2 * skew(x * y.transpose()).squaredNorm();
    case ManifoldKind::Grassmann: {
      const double r = static_cast<double>(m.r());
      return 2.0 * d1 * (n * frobenius(x, y) - r * r) + 4.0 * d2 * (x * y - y * x).squaredNorm();
    }
    case ManifoldKind::Spd: {
      const Mat diff = x - y;
      return 4.0 * (n + 1.0) * d1 * frobenius(x, y) + 16.0 * d2 * frobenius(x * diff, y * diff);
    }
  }
  return 0.0;
}

double kp_closed_scores(const Manifold& m, const RadialKernel& k, const Mat& x, const Mat& y, const Mat& sx,
                        const Mat& sy) {
  const double s = squared_distance(x, y);
  const double kappa = std::exp(-k.psi(s));
  const Mat gx = sx + 2.0 * k.dpsi(s) * (y - x);
  const Mat gy = sy + 2.0 * k.dpsi(s) * (x - y);
  const double first =
      killing_projection_scale(m) * frobenius(killing_projection(m, x, gx), killing_projection(m, y, gy));
  return kappa * (first + kernel_second_order(m, k, x, y));
}

SteinKernel::SteinKernel(ScoreModel model, RadialKernel kernel, SteinMode mode, double h)
    : model_(std::move(model)), kernel_(kernel), mode_(mode), h_(h) {
  if (mode == SteinMode::FiniteDifference && !(h >= 1e-6 && h <= 1e-3)) {
    throw DomainError("finite-difference step must lie in [1e-6, 1e-3]");
  }
}

double SteinKernel::operator()(const Mat& x, const Mat& y) const {
  switch (mode_) {
    case SteinMode::ClosedForm:
      return closed(x, y);
    case SteinMode::BruteForce:
      return bruteforce(x, y);
    case SteinMode::FiniteDifference:
      return finite_difference(x, y);
  }
  return 0.0;
}

double SteinKernel::closed(const Mat& x, const Mat& y) const {
  return kp_closed_scores(manifold(), kernel_, x, y, model_.score(x), model_.score(y));
}

double SteinKernel::bruteforce(const Mat& x, const Mat& y) const {
  const Manifold& m = manifold();
  const double s = squared_distance(x, y);
  const double d1 = kernel_.dpsi(s);
  const double d2 = kernel_.d2psi(s);
  const Mat gx = model_.score(x) + kernel_.grad_log(x, y);
  const Mat gy = model_.score(y) + kernel_.grad_log(y, x);
  const Mat diff = x - y;
  double total = 0.0;
  for (Index l = 0; l < m.killing_count(); ++l) {
    const Mat kx = m.killing_tangent(l, x);
    const Mat ky = m.killing_tangent(l, y);
    const double first = frobenius(gx, kx) * frobenius(gy, ky);
    const double second = 2.0 * d1 * frobenius(kx, ky) + 4.0 * d2 * frobenius(diff, kx) * frobenius(diff, ky);
    total += first + second;
  }
  return kernel_.eval(x, y) * total;
}

double SteinKernel::finite_difference(const Mat& x, const Mat& y) const {
  const Manifold& m = manifold();
  const double h = h_;
  auto log_k = [&](const Mat& a, const Mat& b) { return kernel_.log_eval(a, b); };
  double total = 0.0;
  for (Index l = 0; l < m.killing_count(); ++l) {
    const Mat xp = m.group_action(l, h, x);
    const Mat xm = m.group_action(l, -h, x);
    const Mat yp = m.group_action(l, h, y);
    const Mat ym = m.group_action(l, -h, y);
    const double dx = (model_.unnorm_logpdf(xp) + log_k(xp, y) - model_.unnorm_logpdf(xm) - log_k(xm, y)) / (2.0 * h);
    const double dy = (model_.unnorm_logpdf(yp) + log_k(x, yp) - model_.unnorm_logpdf(ym) - log_k(x, ym)) / (2.0 * h);
    const double mixed = (log_k(xp, yp) - log_k(xp, ym) - log_k(xm, yp) + log_k(xm, ym)) / (4.0 * h * h);
    total += dx * dy + mixed;
  }
  return kernel_.eval(x, y) * total;
}

Mat stein_gram(const SteinKernel& ev, const std::vector<Mat>& points, int threads) {
  const std::size_t n = points.size();
  if (n == 0) {
    throw DimensionError("stein_gram: no points");
  }
  Mat g(static_cast<Index>(n), static_cast<Index>(n));
  if (ev.mode() == SteinMode::ClosedForm) {
    std::vector<Mat> scores(n);
    parallel_for(n, [&](std::size_t i) { scores[i] = ev.model().score(points[i]); }, threads);
    parallel_for(
        n,
        [&](std::size_t i) {
          for (std::size_t j = i; j < n; ++j) {
            g(static_cast<Index>(i), static_cast<Index>(j)) =
                kp_closed_scores(ev.manifold(), ev.kernel(), points[i], points[j], scores[i], scores[j]);
          }
        },
        threads);
  } else {
    parallel_for(
        n,
        [&](std::size_t i) {
          for (std::size_t j = i; j < n; ++j) {
            g(static_cast<Index>(i), static_cast<Index>(j)) = ev(points[i], points[j]);
          }
        },
        threads);
  }
  for (Index i = 0; i < static_cast<Index>(n); ++i) {
    for (Index j = 0; j < i; ++j) {
      g(i, j) = g(j, i);
    }
  }
  return g;
}

}  // namespace ksdm
