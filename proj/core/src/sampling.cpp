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
#include "ksdm/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "ksdm/errors.hpp"
#include "ksdm/parallel.hpp"
#include "ksdm/rng.hpp"

namespace ksdm {

namespace {

Mat uniform_frame(Rng& rng, Index n, Index r) {
  const Mat g = rng.normal_matrix(n, r);
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(n, r);
  const Mat rr = qr.matrixQR().topRows(r).template triangularView<Eigen::Upper>();
  for (Index j = 0; j < r; ++j) {
    if (rr(j, j) < 0.0) {
      q.col(j) *= -1.0;
    }
  }
  return q;
}

Mat uniform_point(const Manifold& m, Rng& rng) {
  if (m.kind() == ManifoldKind::Stiefel) {
    return uniform_frame(rng, m.n(), m.r());
  }
  const Mat u = uniform_frame(rng, m.n(), m.r());
  return sym(u * u.transpose());
}

Mat default_start(const Manifold& m) {
  switch (m.kind()) {
    case ManifoldKind::Stiefel:
      return Mat::Identity(m.n(), m.r());
    case ManifoldKind::Grassmann: {
      Mat p = Mat::Zero(m.n(), m.n());
      p.topLeftCorner(m.r(), m.r()).setIdentity();
      return p;
    }
    case ManifoldKind::Spd:
      return Mat::Identity(m.n(), m.n());
  }
  return Mat();
}

}  // namespace

std::vector<Mat> sample_uniform(const Manifold& m, std::size_t n, std::uint64_t seed, int threads) {
  if (m.kind() == ManifoldKind::Spd) {
    throw DomainError("sample_uniform: no uniform distribution on SPD matrices");
  }
  if (n < 1) {
    throw DomainError("sample_uniform: n must be positive");
  }
  std::vector<Mat> out(n);
  const Rng root(seed, 0x5A11);
  parallel_for(
      n,
      [&](std::size_t i) {
        Rng rng = root.split(i);
        out[i] = uniform_point(m, rng);
      },
      threads);
  return out;
}

double mf_log_bound(const Manifold& m, const Mat& f) {
  switch (m.kind()) {
    case ManifoldKind::Stiefel: {
      Eigen::JacobiSVD<Mat> svd(f);
      return svd.singularValues().sum();
    }
    case ManifoldKind::Grassmann: {
      Eigen::SelfAdjointEigenSolver<Mat> eig(sym(f), Eigen::EigenvaluesOnly);
      return eig.eigenvalues().tail(m.r()).sum();
    }
    case ManifoldKind::Spd:
      break;
  }
  throw DomainError("matrix Fisher rejection sampling needs a Stiefel or Grassmann manifold");
}

std::vector<Mat> sample_rejection_mf(const Manifold& m, const Mat& f, std::size_t n, std::uint64_t seed,
                                     RejectionStats* stats) {
  const ScoreModel model = ScoreModel::matrix_fisher(m, f);
  const double bound = mf_log_bound(m, f);
  constexpr std::uint64_t kProbe = 20000;
  Rng rng(seed, 0x4EC7);
  RejectionStats local;
  std::vector<Mat> out;
  out.reserve(n);
  while (out.size() < n) {
    Mat x = uniform_point(m, rng);
    ++local.proposals;
    const double log_accept = model.unnorm_logpdf(x) - bound;
    if (std::log(rng.uniform()) < log_accept) {
      out.push_back(std::move(x));
      ++local.accepted;
    }
    if (local.proposals == kProbe && local.rate() < 1e-4) {
      if (stats != nullptr) *stats = local;
      throw SamplerError("rejection sampler acceptance below 1e-4; use Metropolis-Hastings for this concentration");
    }
  }
  if (stats != nullptr) *stats = local;
  return out;
}

MhConfig default_mh_config(ManifoldKind kind) {
  MhConfig cfg;
  cfg.step = kind == ManifoldKind::Spd ? 0.2 : 0.3;
  return cfg;
}

std::vector<Mat> sample_mh(const ScoreModel& model, std::size_t n, const MhConfig& cfg, std::uint64_t seed,
                           const Mat* start, MhStats* stats) {
  if (!(cfg.step > 0.0) || cfg.burn_in < 0 || cfg.thin < 0) {
    throw DomainError("sample_mh: step must be positive and burn_in, thin non-negative");
  }
  if (n < 1) {
    throw DomainError("sample_mh: n must be positive");
  }
  const Manifold& m = model.manifold();
  Mat x = start != nullptr ? *start : default_start(m);
  m.validate(x);
  if (m.kind() == ManifoldKind::Spd) {
    x = sym(x);
  }
  auto logp = [&](const Mat& p, bool& ok) {
    ok = true;
    try {
      return model.unnorm_logpdf(p);
    } catch (const CutLocusError&) {
    } catch (const ConvergenceError&) {
    } catch (const DomainError&) {
    }
    ok = false;
    return 0.0;
  };
  bool ok = true;
  double lp = logp(x, ok);
  if (!ok) {
    throw SamplerError("sample_mh: log-density undefined at the starting point");
  }
  Rng rng(seed, 0x3C4A);
  MhStats local;
  const int thin = std::max(1, cfg.thin);
  const Index nn = m.n();
  std::vector<Mat> out;
  out.reserve(n);
  const std::uint64_t total = static_cast<std::uint64_t>(cfg.burn_in) + static_cast<std::uint64_t>(n) * thin;
  for (std::uint64_t it = 1; it <= total; ++it) {
    Mat proposal;
    switch (m.kind()) {
      case ManifoldKind::Stiefel:
        proposal = expm(cfg.step * skew(rng.normal_matrix(nn, nn))) * x;
        break;
      case ManifoldKind::Grassmann: {
        const Mat r = expm(cfg.step * skew(rng.normal_matrix(nn, nn)));
        proposal = sym(r * x * r.transpose());
        break;
      }
      case ManifoldKind::Spd: {
        const Mat g = expm(0.5 * cfg.step * rng.normal_matrix(nn, nn));
        proposal = sym(g.transpose() * x * g);
        break;
      }
    }
    const double u = rng.uniform();
    ++local.proposals;
    bool prop_ok = true;
    const double lq = logp(proposal, prop_ok);
    if (prop_ok && std::log(u) < lq - lp) {
      x = std::move(proposal);
      lp = lq;
      ++local.accepted;
      if (m.kind() != ManifoldKind::Spd && !m.contains(x, 1e-10)) {
        x = m.project(x);
        lp = model.unnorm_logpdf(x);
      }
    }
    if (it > static_cast<std::uint64_t>(cfg.burn_in) && (it - cfg.burn_in) % thin == 0) {
      out.push_back(x);
    }
  }
  if (stats != nullptr) *stats = local;
  return out;
}

std::vector<Mat> sample_wishart(const Mat& v, double dof, std::size_t n, std::uint64_t seed) {
  const Index dim = v.rows();
  Manifold::spd(dim).validate(v);
  if (!(dof > static_cast<double>(dim) - 1.0)) {
    throw DomainError("sample_wishart: dof must exceed N - 1");
  }
  const Mat l = sym(v).llt().matrixL();
  const Rng root(seed, 0xB417);
  std::vector<Mat> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Rng rng = root.split(k);
    Mat a = Mat::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) {
      a(i, i) = std::sqrt(rng.chi_squared(dof - static_cast<double>(i)));
      for (Index j = 0; j < i; ++j) {
        a(i, j) = rng.normal();
      }
    }
    const Mat la = l * a;
    out[k] = sym(la * la.transpose());
  }
  return out;
}

}  // namespace ksdm
