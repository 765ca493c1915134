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
#ifndef KSDM_IO_HPP
#define KSDM_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ksdm/manifolds.hpp"

namespace ksdm {

/// Sample file: one JSON header line
///   {"format":"ksdm-samples","manifold":{"kind":..,"N":..,"r":..},
///    "family":..,"params":{..},"seed":..,"method":..,"n":..}
/// followed by one point per line as a row-major JSON array of rows, every
/// number printed with 17 significant digits.
struct SampleFile {
  ManifoldKind kind = ManifoldKind::Stiefel;
  Index n = 0;
  Index r = 0;
  std::string family = "unknown";
  /// Serialized JSON object with the family parameters.
  std::string params_json = "{}";
  std::uint64_t seed = 0;
  std::string method = "unknown";
  std::vector<Mat> points;

  Manifold manifold() const { return Manifold(kind, n, r); }
};

/// [[a, b], [c, d]] with %.17g numbers.
std::string matrix_to_json(const Mat& a);
/// Parses a JSON array of equal-length rows. Throws DomainError.
Mat matrix_from_json(const std::string& text);

void write_samples(std::ostream& os, const SampleFile& file);
SampleFile read_samples(std::istream& is);
void write_samples_file(const std::string& path, const SampleFile& file);
/// Validates every point against the header manifold.
SampleFile read_samples_file(const std::string& path);

}  // namespace ksdm

#endif  // KSDM_IO_HPP
