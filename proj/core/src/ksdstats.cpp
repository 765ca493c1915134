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
#include "ksdm/ksdstats.hpp"

#include <cmath>

#include "ksdm/errors.hpp"
#include "ksdm/rng.hpp"

namespace ksdm {

Vec WeightedSample::weights() const {
  const Index n = static_cast<Index>(points.size());
  if (!weighted()) {
    return Vec::Ones(n);
  }
  Vec w(n);
  for (Index i = 0; i < n; ++i) {
    w(i) = std::exp(log_weights[static_cast<std::size_t>(i)]);
  }
  return w;
}

void WeightedSample::check() const {
  if (weighted() && log_weights.size() != points.size()) {
    throw DimensionError("weighted sample: log_weights length differs from point count");
  }
  for (double lw : log_weights) {
    if (!std::isfinite(lw)) {
      throw DomainError("weighted sample: non-finite log weight");
    }
  }
}

WeightedSample unweighted(std::vector<Mat> points) { return WeightedSample{std::move(points), {}}; }

double v_stat_from_gram(const Mat& gram, const Vec& w) {
  const Index n = gram.rows();
  if (n < 1 || gram.cols() != n || w.size() != n) {
    throw DimensionError("v_stat: Gram and weights disagree");
  }
  const double nn = static_cast<double>(n);
  return w.dot(gram * w) / (nn * nn);
}

double u_stat_from_gram(const Mat& gram, const Vec& w) {
  const Index n = gram.rows();
  if (gram.cols() != n || w.size() != n) {
    throw DimensionError("u_stat: Gram and weights disagree");
  }
  if (n < 2) {
    throw DomainError("u_stat: needs at least two points");
  }
  double diag = 0.0;
  for (Index i = 0; i < n; ++i) {
    diag += gram(i, i) * w(i) * w(i);
  }
  const double nn = static_cast<double>(n);
  return (w.dot(gram * w) - diag) / (nn * (nn - 1.0));
}

double v_stat(const SteinKernel& ev, const WeightedSample& s, int threads) {
  s.check();
  return v_stat_from_gram(stein_gram(ev, s.points, threads), s.weights());
}

double u_stat(const SteinKernel& ev, const WeightedSample& s, int threads) {
  s.check();
  if (s.size() < 2) {
    throw DomainError("u_stat: needs at least two points");
  }
  return u_stat_from_gram(stein_gram(ev, s.points, threads), s.weights());
}

BootstrapSe bootstrap_se(const Mat& gram, const Vec& w, int replicates, std::uint64_t seed) {
  const Index n = gram.rows();
  if (replicates < 2) {
    throw DomainError("bootstrap_se: needs at least two replicates");
  }
  if (n < 2) {
    return {};
  }
  Rng rng(seed, 0xB005);
  std::vector<double> us;
  std::vector<double> vs;
  std::vector<Index> idx(static_cast<std::size_t>(n));
  for (int b = 0; b < replicates; ++b) {
    for (auto& i : idx) {
      i = static_cast<Index>(rng() % static_cast<std::uint64_t>(n));
    }
    Mat g(n, n);
    Vec wb(n);
    for (Index a = 0; a < n; ++a) {
      wb(a) = w(idx[static_cast<std::size_t>(a)]);
      for (Index c = 0; c < n; ++c) {
        g(a, c) = gram(idx[static_cast<std::size_t>(a)], idx[static_cast<std::size_t>(c)]);
      }
    }
    vs.push_back(v_stat_from_gram(g, wb));
    us.push_back(u_stat_from_gram(g, wb));
  }
  auto sd = [](const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return std::sqrt(ss / static_cast<double>(x.size() - 1));
  };
  return {sd(us), sd(vs)};
}

}  // namespace ksdm
