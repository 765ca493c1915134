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
#include "ksdm/mksde.hpp"
#include "ksdm/sampling.hpp"
#include "support/generators.hpp"

namespace ksdm {
namespace {

using testing::random_point;
using testing::random_points;

struct Case {
  FamilyKind kind;
  Manifold m;
};

std::vector<Case> cases() {
  return {{FamilyKind::MatrixFisher, Manifold::stiefel(3, 2)},  {FamilyKind::MatrixBingham, Manifold::stiefel(3, 2)},
          {FamilyKind::MatrixFisherBingham, Manifold::stiefel(3, 2)}, {FamilyKind::MatrixFisher, Manifold::stiefel(4, 2)},
          {FamilyKind::MatrixBingham, Manifold::stiefel(4, 1)},  {FamilyKind::MatrixFisher, Manifold::grassmann(4, 2)}};
}

std::vector<RadialKernel> kernels() {
  return {RadialKernel::gaussian(1.0), RadialKernel::inverse_quadratic(1.0, 0.5)};
}

std::string label(const Case& c, const RadialKernel& k) {
  return to_string(c.kind) + " on " + c.m.name() + " / " + to_string(k.family());
}

double rel(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

TEST(Mksde, StatKindNames) {
  EXPECT_EQ(stat_kind_from_string("U"), StatKind::U);
  EXPECT_EQ(to_string(StatKind::V), "V");
  EXPECT_THROW(stat_kind_from_string("W"), DomainError);
}

// Oracle: the Stein kernel of the model at theta, evaluated directly.
TEST(Mksde, PairPiecesReproduceSteinKernel) {
  Rng rng(60);
  for (const Case& c : cases()) {
    const ExponentialFamily spec(c.kind, c.m);
    for (const RadialKernel& k : kernels()) {
      for (int t = 0; t < 5; ++t) {
        const Mat x = random_point(c.m, rng);
        const Mat y = random_point(c.m, rng);
        const Vec theta = rng.normal_matrix(spec.dim(), 1);
        const PairQb xy = pair_qb(spec, k, x, y);
        const PairQb yx = pair_qb(spec, k, y, x);
        const double direct = SteinKernel(spec.model(theta), k).bruteforce(x, y);
        const double quad = theta.dot(xy.q * theta) + xy.b.dot(theta) + yx.b.dot(theta) + xy.c;
        EXPECT_LT(rel(quad, direct), 1e-10) << label(c, k);
        EXPECT_LT(rel(xy.c, SteinKernel(spec.model(Vec::Zero(spec.dim())), k).bruteforce(x, y)), 1e-12);
        EXPECT_LT((xy.q - yx.q.transpose()).norm(), 1e-12);
      }
    }
  }
}

TEST(Mksde, QuadraticFormMatchesStatistics) {
  Rng rng(61);
  for (const Case& c : cases()) {
    const ExponentialFamily spec(c.kind, c.m);
    for (const RadialKernel& k : kernels()) {
      const WeightedSample s = unweighted(random_points(c.m, 25, rng));
      const MksdeSystem v = assemble(spec, k, s, StatKind::V);
      const MksdeSystem u = assemble(spec, k, s, StatKind::U);
      EXPECT_EQ(v.n, 25);
      for (int t = 0; t < 10; ++t) {
        const Vec theta = rng.normal_matrix(spec.dim(), 1);
        const SteinKernel ev(spec.model(theta), k);
        EXPECT_LT(rel(v.value(theta), v_stat(ev, s)), 1e-8) << label(c, k);
        EXPECT_LT(rel(u.value(theta), u_stat(ev, s)), 1e-8) << label(c, k);
      }
    }
  }
}

TEST(Mksde, WeightedQuadraticFormMatchesStatistics) {
  Rng rng(62);
  const Case c{FamilyKind::MatrixFisher, Manifold::stiefel(3, 2)};
  const ExponentialFamily spec(c.kind, c.m);
  WeightedSample s = unweighted(random_points(c.m, 20, rng));
  for (int i = 0; i < 20; ++i) s.log_weights.push_back(0.3 * rng.normal());
  const MksdeSystem v = assemble(spec, RadialKernel::gaussian(), s, StatKind::V);
  const Vec theta = rng.normal_matrix(spec.dim(), 1);
  EXPECT_LT(rel(v.value(theta), v_stat(SteinKernel(spec.model(theta), RadialKernel::gaussian()), s)), 1e-8);
}

TEST(Mksde, VSystemIsPositiveSemidefinite) {
  Rng rng(63);
  for (int t = 0; t < 20; ++t) {
    const Case c = cases()[static_cast<std::size_t>(t) % cases().size()];
    const RadialKernel k = kernels()[static_cast<std::size_t>(t) % 2];
    const MksdeSystem v =
        assemble(ExponentialFamily(c.kind, c.m), k, unweighted(random_points(c.m, 5 + t, rng)), StatKind::V);
    EXPECT_LT((v.q - v.q.transpose()).norm(), 1e-12 * (1.0 + v.q.norm()));
    const double lmin = Eigen::SelfAdjointEigenSolver<Mat>(v.q).eigenvalues().minCoeff();
    EXPECT_GE(lmin, -1e-8 * v.q.norm()) << label(c, k);
  }
}

TEST(Mksde, SolutionIsStationaryAndMinimal) {
  Rng rng(64);
  const Case c{FamilyKind::MatrixFisher, Manifold::stiefel(3, 2)};
  const ExponentialFamily spec(c.kind, c.m);
  const MksdeSystem v = assemble(spec, RadialKernel::gaussian(), unweighted(random_points(c.m, 50, rng)), StatKind::V);
  const MksdeSolution sol = solve(v);
  EXPECT_EQ(sol.null_space_rank, 0);
  EXPECT_TRUE(sol.convex);
  EXPECT_LT((v.q * sol.theta + v.b).norm(), 1e-10 * (1.0 + v.b.norm()));
  EXPECT_NEAR(sol.objective, v.value(sol.theta) - v.c, 1e-12);
  for (int t = 0; t < 10; ++t) {
    const Vec d = 0.1 * Vec(rng.normal_matrix(spec.dim(), 1));
    EXPECT_GE(v.value(sol.theta + d), v.value(sol.theta));
  }
}

TEST(Mksde, RankDeficientSystemGivesMinimumNormSolution) {
  // Bingham: only the symmetric part of A enters, so Q has a null space of
  // dimension N(N-1)/2 plus the trace direction on square frames.
  Rng rng(65);
  const Manifold m = Manifold::stiefel(3, 2);
  const ExponentialFamily spec(FamilyKind::MatrixBingham, m);
  const MksdeSystem v = assemble(spec, RadialKernel::gaussian(), unweighted(random_points(m, 60, rng)), StatKind::V);
  const MksdeSolution sol = solve(v, 1e-10);
  EXPECT_GE(sol.null_space_rank, 3);
  EXPECT_EQ(sol.null_basis.cols(), sol.null_space_rank);
  EXPECT_LT((sol.null_basis.transpose() * sol.theta).norm(), 1e-8);
  EXPECT_LT((v.q * sol.theta + v.b).norm(), 1e-8 * (1.0 + v.b.norm()));
  const Mat a = spec.a_of(sol.theta);
  EXPECT_LT((a - a.transpose()).norm(), 1e-8);
}

TEST(Mksde, PseudoinverseAgreesWithGradientDescent) {
  Rng rng(66);
  for (FamilyKind kind : {FamilyKind::MatrixFisher, FamilyKind::MatrixBingham}) {
    const Manifold m = Manifold::stiefel(3, 2);
    const ExponentialFamily spec(kind, m);
    const MksdeSystem v = assemble(spec, RadialKernel::gaussian(), unweighted(random_points(m, 40, rng)), StatKind::V);
    const MksdeSolution sol = solve(v, 1e-10);
    const Eigen::SelfAdjointEigenSolver<Mat> es(v.q);
    double lmin_pos = es.eigenvalues().maxCoeff();
    for (Index i = 0; i < es.eigenvalues().size(); ++i) {
      if (es.eigenvalues()(i) > 1e-10 * es.eigenvalues().maxCoeff()) lmin_pos = std::min(lmin_pos, es.eigenvalues()(i));
    }
    // Exact line search along the gradient of the convex quadratic.
    Vec theta = Vec::Zero(spec.dim());
    for (int it = 0; it < 2000; ++it) {
      const Vec g = 2.0 * (v.q * theta + v.b);
      const double gg = g.dot(g);
      if (gg < 1e-30) break;
      theta -= gg / (2.0 * g.dot(v.q * g)) * g;
    }
    EXPECT_NEAR(v.value(theta), v.value(sol.theta), 1e-8) << to_string(kind) << " lmin " << lmin_pos;
  }
}

TEST(Mksde, NonConvexUSystemIsReported) {
  MksdeSystem sys;
  sys.q = Mat::Identity(2, 2);
  sys.q(1, 1) = -1.0;
  sys.b = Vec::Ones(2);
  sys.kind = StatKind::U;
  sys.n = 10;
  try {
    solve(sys);
    FAIL() << "expected NonConvexError";
  } catch (const NonConvexError& e) {
    EXPECT_NEAR(e.min_eigenvalue(), -1.0, 1e-12);
  }
  const MksdeSolution sol = solve(sys, 1e-12, true);
  EXPECT_FALSE(sol.convex);
  EXPECT_LT((sys.q * sol.theta + sys.b).norm(), 1e-12);
}

TEST(Mksde, UNeedsTwoPoints) {
  const Manifold m = Manifold::stiefel(3, 2);
  EXPECT_THROW(assemble(ExponentialFamily(FamilyKind::MatrixFisher, m), RadialKernel::gaussian(),
                        unweighted({Mat::Identity(3, 2)}), StatKind::U),
               DomainError);
}

TEST(Mksde, AssemblyDoesNotDependOnThreads) {
  Rng rng(67);
  const Manifold m = Manifold::stiefel(3, 2);
  const ExponentialFamily spec(FamilyKind::MatrixFisherBingham, m);
  const WeightedSample s = unweighted(random_points(m, 30, rng));
  const MksdeSystem a = assemble(spec, RadialKernel::gaussian(), s, StatKind::V, 1);
  const MksdeSystem b = assemble(spec, RadialKernel::gaussian(), s, StatKind::V, 3);
  EXPECT_EQ(a.q, b.q);
  EXPECT_EQ(a.b, b.b);
}

TEST(Mksde, VectorizedStiefelFormEqualsElementwise) {
  Rng rng(68);
  for (const Manifold& m : {Manifold::stiefel(3, 2), Manifold::stiefel(4, 2)}) {
    for (FamilyKind kind : {FamilyKind::MatrixFisher, FamilyKind::MatrixBingham, FamilyKind::MatrixFisherBingham}) {
      const ExponentialFamily spec(kind, m);
      for (const RadialKernel& k : kernels()) {
        for (int t = 0; t < 5; ++t) {
          const Mat x = random_point(m, rng);
          const Mat y = random_point(m, rng);
          const PairQb fast = pair_qb_vectorized_stiefel(spec, k, x, y);
          EXPECT_LT((fast.q - pair_qb(spec, k, x, y).q).norm(), 1e-10);
          EXPECT_LT((fast.b - pair_qb(spec, k, y, x).b).norm(), 1e-10);
        }
      }
    }
  }
}

// Bingham pieces matter only through their symmetric-in-A part.
Vec sym_part(const Vec& b, Index n) { return vec(sym(unvec(b, n, n))); }

TEST(Mksde, SpecializedClosedForms) {
  Rng rng(69);
  for (const Manifold& m : {Manifold::stiefel(3, 2), Manifold::stiefel(4, 2)}) {
    const ExponentialFamily mf(FamilyKind::MatrixFisher, m);
    const ExponentialFamily mb(FamilyKind::MatrixBingham, m);
    const RadialKernel g = RadialKernel::gaussian(0.7);
    const RadialKernel iq = RadialKernel::inverse_quadratic(1.3, 0.6);
    for (int t = 0; t < 5; ++t) {
      const Mat x = random_point(m, rng);
      const Mat y = random_point(m, rng);
      PairQb s = mf_gaussian_closed(x, y, 0.7);
      EXPECT_LT((s.q - pair_qb(mf, g, y, x).q).norm(), 1e-10);
      EXPECT_LT((s.b - pair_qb(mf, g, y, x).b).norm(), 1e-10);
      s = mf_inverse_quadratic_closed(x, y, 1.3, 0.6);
      EXPECT_LT((s.q - pair_qb(mf, iq, y, x).q).norm(), 1e-10);
      EXPECT_LT((s.b - pair_qb(mf, iq, y, x).b).norm(), 1e-10);
      s = mb_gaussian_closed(x, y, 0.7);
      EXPECT_LT((s.q - pair_qb(mb, g, x, y).q).norm(), 1e-10);
      EXPECT_LT((s.b - sym_part(pair_qb(mb, g, y, x).b, m.n())).norm(), 1e-10);
      s = mb_inverse_quadratic_closed(x, y, 1.3, 0.6);
      EXPECT_LT((s.q - pair_qb(mb, iq, x, y).q).norm(), 1e-10);
      EXPECT_LT((s.b - sym_part(pair_qb(mb, iq, y, x).b, m.n())).norm(), 1e-10);
    }
  }
}

TEST(Mksde, EstimatorRecoversMatrixFisherParameter) {
  const Manifold m = Manifold::stiefel(3, 2);
  Mat f0 = Mat::Zero(3, 2);
  f0.col(0).setOnes();
  f0 *= 2.0;
  const ExponentialFamily spec(FamilyKind::MatrixFisher, m);
  const std::vector<Mat> pts = sample_rejection_mf(m, f0, 1500, 123);
  const MksdeSolution sol = solve(assemble(spec, RadialKernel::gaussian(), unweighted(pts), StatKind::V));
  EXPECT_LT((spec.f_of(sol.theta) - f0).norm(), 0.6);
  MleOptions mo;
  mo.pool_size = 5000;
  EXPECT_LT((mle_numeric_mf(pts, m, mo) - f0).norm(), 0.8);
}

TEST(Mksde, SmallConcentrationApproximation) {
  Rng rng(70);
  const Manifold m = Manifold::stiefel(3, 2);
  const std::vector<Mat> pts = random_points(m, 10, rng);
  Mat mean = Mat::Zero(3, 2);
  for (const Mat& p : pts) mean += p / 10.0;
  EXPECT_LT((mle_small_f(pts, m) - 3.0 * mean).norm(), 1e-14);
}

}  // namespace
}  // namespace ksdm
