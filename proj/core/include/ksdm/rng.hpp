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
#ifndef KSDM_RNG_HPP
#define KSDM_RNG_HPP

#include <cstdint>
#include <limits>

#include "ksdm/matalg.hpp"

namespace ksdm {

/// Mixes a (seed, stream) pair into an independent 64-bit key.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Counter-based generator: output i of stream (seed, stream) is
/// splitmix64(key + (i + 1) * golden). Any stream can be reconstructed from
/// its key and counter alone, so parallel workers never share state.
///
/// Satisfies UniformRandomBitGenerator; use it with <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()();

  /// Child stream; does not advance this generator.
  Rng split(std::uint64_t stream) const { return Rng(key_, stream); }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

  /// Uniform on [0, 1).
  double uniform();
  double normal();
  /// Matrix of i.i.d. standard normals.
  Mat normal_matrix(Index rows, Index cols);
  double chi_squared(double dof);

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace ksdm

#endif  // KSDM_RNG_HPP
