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
#include "ksdm/rng.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace ksdm {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed + kGolden) ^ mix64(stream * 0xD1B54A32D192ED03ULL + 0x632BE59BD9B4E019ULL));
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : key_(derive_seed(seed, stream)) {}

Rng::result_type Rng::operator()() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double Rng::uniform() {
  // 53 high bits.
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  // Box-Muller with one fresh pair per call keeps the draw count per value
  // fixed, which keeps substreams aligned.
  double u1 = uniform();
  while (u1 <= 0.0) {
    u1 = uniform();
  }
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Mat Rng::normal_matrix(Index rows, Index cols) {
  Mat g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      g(i, j) = normal();
    }
  }
  return g;
}

double Rng::chi_squared(double dof) {
  std::chi_squared_distribution<double> dist(dof);
  return dist(*this);
}

}  // namespace ksdm
