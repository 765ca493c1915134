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
#include "ksdm/kernels.hpp"

#include <cmath>

#include "ksdm/errors.hpp"

namespace ksdm {

std::string to_string(KernelFamily family) {
  return family == KernelFamily::Gaussian ? "gaussian" : "inverse_quadratic";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "gaussian") return KernelFamily::Gaussian;
  if (name == "inverse_quadratic") return KernelFamily::InverseQuadratic;
  throw DomainError("unknown kernel family '" + name + "'");
}

RadialKernel RadialKernel::gaussian(double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw DomainError("gaussian kernel: tau must be positive");
  }
  return RadialKernel(KernelFamily::Gaussian, tau, 0.0, 0.0);
}

RadialKernel RadialKernel::inverse_quadratic(double beta, double gamma) {
  if (!(beta > 0.0) || !(gamma > 0.0) || !std::isfinite(beta) || !std::isfinite(gamma)) {
    throw DomainError("inverse quadratic kernel: beta and gamma must be positive");
  }
  return RadialKernel(KernelFamily::InverseQuadratic, 0.0, beta, gamma);
}

double RadialKernel::psi(double t) const {
  return family_ == KernelFamily::Gaussian ? 0.5 * tau_ * t : gamma_ * std::log(beta_ + t);
}

double RadialKernel::dpsi(double t) const {
  return family_ == KernelFamily::Gaussian ? 0.5 * tau_ : gamma_ / (beta_ + t);
}

double RadialKernel::d2psi(double t) const {
  if (family_ == KernelFamily::Gaussian) {
    return 0.0;
  }
  return -gamma_ / ((beta_ + t) * (beta_ + t));
}

double squared_distance(const Mat& x, const Mat& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionError("kernel: shape mismatch");
  }
  return (x - y).squaredNorm();
}

double RadialKernel::eval(const Mat& x, const Mat& y) const { return std::exp(log_eval(x, y)); }

double RadialKernel::log_eval(const Mat& x, const Mat& y) const { return -psi(squared_distance(x, y)); }

Mat RadialKernel::grad_log(const Mat& x, const Mat& y) const {
  return 2.0 * dpsi(squared_distance(x, y)) * (y - x);
}

}  // namespace ksdm
