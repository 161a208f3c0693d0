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

#include <string>
#include <vector>

#include "scoregraph/graph.hpp"
#include "scoregraph/score.hpp"
#include "scoregraph/tensor.hpp"

namespace scoregraph {

struct FeatureMatrix {
  Tensor values;
  std::vector<std::string> names;
};

/// Column names for a spec; throws Error(Validation) for unknown specs.
std::vector<std::string> feature_names(const FeatureSpec& spec);

/// Per-note features in score note order. For "base-v1" every value lies in
/// [0, 1] and each one-hot group has exactly one active entry.
FeatureMatrix extract_features(const Score& score, const FeatureSpec& spec);

/// Column ranges [begin, end) of the one-hot groups of a spec.
std::vector<std::pair<std::size_t, std::size_t>> one_hot_groups(const FeatureSpec& spec);

}  // namespace scoregraph
