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
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "ksdm/matalg.hpp"
#include "ksdm/rng.hpp"
#include "ksdm/steinkernel.hpp"
#include "ksdm_cli/commands.hpp"

namespace ksdm::cli {

namespace {

Mat random_point(const Manifold& m, Rng& rng) {
  if (m.kind() == ManifoldKind::Spd) {
    const Mat s = sym(rng.normal_matrix(m.n(), m.n()));
    return matrix_exp_sym(0.6 * s);
  }
  return m.project(rng.normal_matrix(m.rows(), m.cols()));
}

// Moves x along a random group direction of size eps.
Mat nearby(const Manifold& m, const Mat& x, double eps, Rng& rng) {
  Mat g = Mat::Zero(m.n(), m.n());
  for (Index l = 0; l < m.killing_count(); ++l) {
    g += rng.normal() * m.killing_generator(l);
  }
  const Mat e = expm(eps * g);
  switch (m.kind()) {
    case ManifoldKind::Stiefel:
      return m.project(e * x);
    case ManifoldKind::Grassmann:
      return m.project(e * x * e.transpose());
    case ManifoldKind::Spd:
      break;
  }
  return sym(e.transpose() * x * e);
}

struct Setup {
  std::string name;
  ScoreModel model;
  bool local;
};

std::vector<Setup> setups(Rng& rng) {
  std::vector<Setup> out;
  const std::vector<Manifold> compact = {Manifold::stiefel(3, 2), Manifold::stiefel(3, 1), Manifold::stiefel(4, 2),
                                         Manifold::grassmann(4, 2)};
  for (const Manifold& m : compact) {
    const Mat f = rng.normal_matrix(m.rows(), m.cols());
    out.push_back({m.name() + " uniform", ScoreModel::uniform(m), false});
    out.push_back({m.name() + " mf", ScoreModel::matrix_fisher(m, f), false});
    if (m.kind() == ManifoldKind::Stiefel) {
      const Mat a = rng.normal_matrix(m.n(), m.n());
      out.push_back({m.name() + " mb", ScoreModel::matrix_bingham(m, a), false});
      out.push_back({m.name() + " mfb", ScoreModel::matrix_fisher_bingham(m, a, f), false});
    }
    out.push_back({m.name() + " rg", ScoreModel::riemannian_gaussian(m, random_point(m, rng), 0.8), true});
  }
  for (Index n : {2, 3}) {
    const Manifold m = Manifold::spd(n);
    out.push_back({m.name() + " uniform", ScoreModel::uniform(m), false});
    out.push_back({m.name() + " wishart", ScoreModel::wishart(m, random_point(m, rng), static_cast<double>(n) + 2.0),
                   false});
    out.push_back({m.name() + " rg", ScoreModel::riemannian_gaussian(m, random_point(m, rng), 0.8), false});
  }
  return out;
}

}  // namespace

std::vector<OracleCase> run_oracle_suite(int pairs, int fd_pairs, std::uint64_t seed, double h) {
  Rng rng(seed);
  const std::vector<Setup> all = setups(rng);
  const std::vector<RadialKernel> kernels = {RadialKernel::gaussian(1.0), RadialKernel::inverse_quadratic(1.0, 0.5)};
  std::vector<OracleCase> cases;
  for (const Setup& s : all) {
    for (const RadialKernel& k : kernels) {
      const Manifold& m = s.model.manifold();
      const SteinKernel ev(s.model, k, SteinMode::ClosedForm, h);
      OracleCase c;
      c.name = s.name + " " + to_string(k.family());
      c.pairs = pairs;
      for (int p = 0; p < pairs; ++p) {
        Mat x;
        Mat y;
        if (s.local) {
          x = nearby(m, s.model.xbar(), 0.4, rng);
          y = nearby(m, s.model.xbar(), 0.4, rng);
        } else {
          x = random_point(m, rng);
          y = random_point(m, rng);
        }
        const double brute = ev.bruteforce(x, y);
        const double scale = 1.0 + std::abs(brute);
        c.closed_vs_brute = std::max(c.closed_vs_brute, std::abs(ev.closed(x, y) - brute) / scale);
        if (p < fd_pairs) {
          const double diff = std::abs(ev.finite_difference(x, y) - brute);
          c.brute_vs_fd = std::max(c.brute_vs_fd, diff / scale);
          c.brute_vs_fd_abs = std::max(c.brute_vs_fd_abs, diff);
        }
      }
      cases.push_back(c);
    }
  }
  return cases;
}

bool cmd_selftest(std::ostream& os, std::uint64_t seed, int pairs, int fd_pairs) {
  const std::vector<OracleCase> cases = run_oracle_suite(pairs, fd_pairs, seed);
  bool ok = true;
  for (const OracleCase& c : cases) {
    const bool pass = c.closed_vs_brute <= 1e-9 && c.brute_vs_fd <= 1e-5;
    ok = ok && pass;
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%-4s %-32s closed/brute %.2e  brute/fd %.2e\n", pass ? "ok" : "FAIL",
                  c.name.c_str(), c.closed_vs_brute, c.brute_vs_fd);
    os << buf;
  }
  os << (ok ? "selftest passed" : "selftest FAILED") << " (" << cases.size() << " cases)\n";
  return ok;
}

}  // namespace ksdm::cli
