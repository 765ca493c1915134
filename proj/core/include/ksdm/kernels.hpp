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
#ifndef KSDM_KERNELS_HPP
#define KSDM_KERNELS_HPP

#include <string>

#include "ksdm/matalg.hpp"

namespace ksdm {

enum class KernelFamily { Gaussian, InverseQuadratic };

std::string to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

/// kappa(X, Y) = exp(-psi(|X - Y|_F^2)) with
///   Gaussian:           psi(t) = tau t / 2
///   inverse quadratic:  psi(t) = gamma log(beta + t)
class RadialKernel {
 public:
  static RadialKernel gaussian(double tau = 1.0);
  static RadialKernel inverse_quadratic(double beta = 1.0, double gamma = 0.5);

  KernelFamily family() const { return family_; }
  double tau() const { return tau_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }

  double psi(double t) const;
  double dpsi(double t) const;
  double d2psi(double t) const;

  double eval(const Mat& x, const Mat& y) const;
  double log_eval(const Mat& x, const Mat& y) const;
  /// 2 psi'(|X - Y|^2) (Y - X): a Euclidean gradient of log kappa in X.
  Mat grad_log(const Mat& x, const Mat& y) const;

 private:
  RadialKernel(KernelFamily family, double tau, double beta, double gamma)
      : family_(family), tau_(tau), beta_(beta), gamma_(gamma) {}

  KernelFamily family_;
  double tau_;
  double beta_;
  double gamma_;
};

double squared_distance(const Mat& x, const Mat& y);

}  // namespace ksdm

#endif  // KSDM_KERNELS_HPP
