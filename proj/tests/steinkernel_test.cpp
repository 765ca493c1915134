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
#include <gtest/gtest.h>

#include <cmath>

#include "ksdm/errors.hpp"
#include "ksdm/steinkernel.hpp"
#include "support/generators.hpp"

namespace ksdm {
namespace {

using testing::nearby;
using testing::random_point;
using testing::random_spd;

struct Config {
  ScoreModel model;
  bool local;
};

std::vector<Config> setups(Rng& rng) {
  std::vector<Config> out;
  for (const Manifold& m : {Manifold::stiefel(3, 2), Manifold::stiefel(3, 1), Manifold::stiefel(4, 2)}) {
    const Mat f = rng.normal_matrix(m.rows(), m.cols());
    const Mat a = rng.normal_matrix(m.n(), m.n());
    out.push_back({ScoreModel::uniform(m), false});
    out.push_back({ScoreModel::matrix_fisher(m, f), false});
    out.push_back({ScoreModel::matrix_bingham(m, a), false});
    out.push_back({ScoreModel::matrix_fisher_bingham(m, a, f), false});
    out.push_back({ScoreModel::riemannian_gaussian(m, random_point(m, rng), 0.8), true});
  }
  const Manifold g = Manifold::grassmann(4, 2);
  out.push_back({ScoreModel::uniform(g), false});
  out.push_back({ScoreModel::matrix_fisher(g, rng.normal_matrix(4, 4)), false});
  out.push_back({ScoreModel::riemannian_gaussian(g, random_point(g, rng), 0.8), true});
  for (Index n : {2, 3}) {
    const Manifold p = Manifold::spd(n);
    out.push_back({ScoreModel::uniform(p), false});
    out.push_back({ScoreModel::wishart(p, random_spd(n, rng), static_cast<double>(n) + 2.0), false});
    out.push_back({ScoreModel::riemannian_gaussian(p, random_spd(n, rng), 0.8), false});
  }
  return out;
}

std::vector<RadialKernel> kernels() {
  return {RadialKernel::gaussian(1.0), RadialKernel::inverse_quadratic(1.0, 0.5)};
}

std::string label(const ScoreModel& m, const RadialKernel& k) {
  return to_string(m.kind()) + " on " + m.manifold().name() + " / " + to_string(k.family());
}

std::pair<Mat, Mat> draw_pair(const Config& s, Rng& rng) {
  const Manifold& m = s.model.manifold();
  if (s.local) return {nearby(m, s.model.xbar(), 0.4, rng), nearby(m, s.model.xbar(), 0.4, rng)};
  return {random_point(m, rng), random_point(m, rng)};
}

TEST(SteinKernel, ProjectionReproducesKillingSums) {
  Rng rng(40);
  for (const Manifold& m : testing::all_test_manifolds()) {
    const Mat x = random_point(m, rng);
    const Mat y = random_point(m, rng);
    const Mat gx = rng.normal_matrix(m.rows(), m.cols());
    const Mat gy = rng.normal_matrix(m.rows(), m.cols());
    double sum = 0.0;
    for (Index l = 0; l < m.killing_count(); ++l) {
      sum += m.directional_derivative(gx, l, x) * m.directional_derivative(gy, l, y);
    }
    const double closed =
        killing_projection_scale(m) * frobenius(killing_projection(m, x, gx), killing_projection(m, y, gy));
    EXPECT_NEAR(closed, sum, 1e-10 * (1.0 + std::abs(sum))) << m.name();
  }
}

TEST(SteinKernel, SecondOrderTermMatchesFiniteDifferences) {
  Rng rng(41);
  const double h = 1e-4;
  for (const Manifold& m : testing::all_test_manifolds()) {
    for (const RadialKernel& k : kernels()) {
      const Mat x = random_point(m, rng);
      const Mat y = random_point(m, rng);
      double fd = 0.0;
      for (Index l = 0; l < m.killing_count(); ++l) {
        const Mat xp = m.group_action(l, h, x), xm = m.group_action(l, -h, x);
        const Mat yp = m.group_action(l, h, y), ym = m.group_action(l, -h, y);
        fd += (k.log_eval(xp, yp) - k.log_eval(xp, ym) - k.log_eval(xm, yp) + k.log_eval(xm, ym)) / (4 * h * h);
      }
      const double closed = kernel_second_order(m, k, x, y);
      EXPECT_NEAR(closed, fd, 1e-5 * (1.0 + std::abs(closed))) << m.name() << " " << to_string(k.family());
    }
  }
}

// Property: closed form and brute force agree on random pairs for every
// supported configuration.
TEST(SteinKernel, ClosedFormEqualsBruteForce) {
  Rng rng(42);
  for (const Config& s : setups(rng)) {
    for (const RadialKernel& k : kernels()) {
      const SteinKernel ev(s.model, k);
      for (int p = 0; p < 20; ++p) {
        const auto [x, y] = draw_pair(s, rng);
        const double brute = ev.bruteforce(x, y);
        EXPECT_NEAR(ev.closed(x, y), brute, 1e-9 * (1.0 + std::abs(brute))) << label(s.model, k);
      }
    }
  }
}

TEST(SteinKernel, BruteForceEqualsFiniteDifferences) {
  Rng rng(43);
  for (const Config& s : setups(rng)) {
    for (const RadialKernel& k : kernels()) {
      const SteinKernel ev(s.model, k, SteinMode::FiniteDifference, 1e-4);
      for (int p = 0; p < 5; ++p) {
        const auto [x, y] = draw_pair(s, rng);
        const double brute = ev.bruteforce(x, y);
        EXPECT_NEAR(ev(x, y), brute, 1e-5 * (1.0 + std::abs(brute))) << label(s.model, k);
      }
    }
  }
}

TEST(SteinKernel, IsSymmetric) {
  Rng rng(44);
  for (const Config& s : setups(rng)) {
    const SteinKernel ev(s.model, RadialKernel::inverse_quadratic());
    const auto [x, y] = draw_pair(s, rng);
    EXPECT_NEAR(ev(x, y), ev(y, x), 1e-12 * (1.0 + std::abs(ev(x, y)))) << label(s.model, ev.kernel());
  }
}

TEST(SteinKernel, GramIsPositiveSemidefinite) {
  Rng rng(45);
  for (const Config& s : setups(rng)) {
    for (const RadialKernel& k : kernels()) {
      const SteinKernel ev(s.model, k);
      std::vector<Mat> pts;
      for (int i = 0; i < 15; ++i) {
        pts.push_back(s.local ? nearby(s.model.manifold(), s.model.xbar(), 0.4, rng)
                              : random_point(s.model.manifold(), rng));
      }
      const Mat g = stein_gram(ev, pts);
      EXPECT_LT((g - g.transpose()).norm(), 1e-12);
      for (int i = 0; i < 15; i += 4) {
        EXPECT_NEAR(g(i, 14 - i), ev.bruteforce(pts[i], pts[14 - i]), 1e-9 * (1.0 + std::abs(g(i, 14 - i))));
      }
      const double lmin = Eigen::SelfAdjointEigenSolver<Mat>(g).eigenvalues().minCoeff();
      EXPECT_GE(lmin, -1e-8 * std::max(1.0, g.norm())) << label(s.model, k);
    }
  }
}

TEST(SteinKernel, GramDoesNotDependOnThreads) {
  Rng rng(46);
  const Manifold m = Manifold::stiefel(3, 2);
  const SteinKernel ev(ScoreModel::matrix_fisher(m, rng.normal_matrix(3, 2)), RadialKernel::gaussian());
  const std::vector<Mat> pts = testing::random_points(m, 40, rng);
  EXPECT_EQ(stein_gram(ev, pts, 1), stein_gram(ev, pts, 3));
}

TEST(SteinKernel, FiniteDifferenceStepIsChecked) {
  const Manifold m = Manifold::stiefel(3, 2);
  EXPECT_THROW(SteinKernel(ScoreModel::uniform(m), RadialKernel::gaussian(), SteinMode::FiniteDifference, 1e-1),
               DomainError);
  EXPECT_NO_THROW(SteinKernel(ScoreModel::uniform(m), RadialKernel::gaussian(), SteinMode::FiniteDifference, 1e-5));
}

TEST(SteinKernel, ShapeMismatchThrows) {
  const Manifold m = Manifold::stiefel(3, 2);
  const SteinKernel ev(ScoreModel::uniform(m), RadialKernel::gaussian());
  EXPECT_THROW(ev(Mat::Zero(3, 2), Mat::Zero(2, 3)), DimensionError);
}

}  // namespace
}  // namespace ksdm
