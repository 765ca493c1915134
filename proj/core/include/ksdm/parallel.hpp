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
#ifndef KSDM_PARALLEL_HPP
#define KSDM_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace ksdm {

/// Process-wide default worker count. 0 means hardware concurrency.
void set_default_threads(int threads);
int default_threads();

/// Runs body(i) for i in [0, n) on up to 'threads' workers (<= 0 picks the
/// default). Static block partition; each index runs exactly once. The first
/// exception thrown by any worker is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, int threads = 0);

}  // namespace ksdm

#endif  // KSDM_PARALLEL_HPP
