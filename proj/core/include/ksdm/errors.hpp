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

#ifndef KSDM_ERRORS_HPP
#define KSDM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ksdm {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operand shapes do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Input outside the domain of a function (non-SPD matrix, invalid point, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Riemannian logarithm requested at or beyond the cut locus, or the
/// iterative logarithm failed to converge.
class CutLocusError : public Error {
 public:
  using Error::Error;
};

/// Iterative numerical procedure did not reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Quadratic form that should be minimized is indefinite beyond tolerance.
class NonConvexError : public Error {
 public:
  NonConvexError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Sampler cannot produce draws at a useful rate.
class SamplerError : public Error {
 public:
  using Error::Error;
};

}  // namespace ksdm

#endif  // KSDM_ERRORS_HPP
