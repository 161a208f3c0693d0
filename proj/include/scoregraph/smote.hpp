// Copyright 2026 The scoregraph Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "scoregraph/rng.hpp"
#include "scoregraph/tensor.hpp"

namespace scoregraph {

/// Where one synthetic row came from: row = x[base] + lambda * (x[neighbor] - x[base]).
struct SmoteProvenance {
  int base = 0;
  int neighbor = 0;
  double lambda = 0.0;
  int label = 0;
};

struct SmoteResult {
  /// Original rows first, in input order, then synthetic rows.
  Tensor embeddings;
  std::vector<int> labels;
  /// One entry per synthetic row; entry i describes row (original count + i).
  std::vector<SmoteProvenance> provenance;
};

/// Oversamples every minority class up to the majority count. For a class
/// with n members the base rows are visited round-robin in index order, the
/// neighbor is drawn uniformly among the min(k_nn, n - 1) nearest same-class
/// rows (Euclidean, ties by index) and lambda comes from `lambda_source`.
/// Throws Error(Validation) when a class that needs new rows has only one.
SmoteResult smote_oversample(const Tensor& embeddings, std::span<const int> labels, int k_nn,
                             const std::function<double()>& lambda_source, Rng& rng);

/// Same, with lambda ~ Uniform[0, 1) drawn from `rng`.
SmoteResult smote_oversample(const Tensor& embeddings, std::span<const int> labels, int k_nn, Rng& rng);

SmoteResult smote_oversample(const Tensor& embeddings, std::span<const int> labels, int k_nn,
                             std::uint64_t seed);

}  // namespace scoregraph
