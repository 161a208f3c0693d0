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

// Slow, direct reimplementations used only to cross-check the library.

#include <array>
#include <set>
#include <vector>

#include "scoregraph/engine.hpp"
#include "scoregraph/explain.hpp"
#include "scoregraph/graph.hpp"
#include "scoregraph/model.hpp"
#include "scoregraph/score.hpp"

namespace oracle {

using EdgeSets = std::array<std::set<scoregraph::Edge>, scoregraph::kNumRelations>;

/// Tests the four edge predicates on every ordered pair of notes. Silent
/// spans come from scanning every tick of the timeline.
EdgeSets oracle_edges(const scoregraph::Score& score, bool merge_rest_spans = true);

EdgeSets as_sets(const scoregraph::EdgeSet& edges);

/// Forward pass written out per node and per relation, concatenating
/// [h_v, mean_u h_u] and multiplying by the full relation weight.
scoregraph::Tensor straight_forward(const scoregraph::ScoreGraph& graph, const scoregraph::Checkpoint& ckpt,
                                    const scoregraph::EdgeMask* mask = nullptr);

/// Full sort of (importance desc, src asc, dst asc).
std::array<std::vector<std::size_t>, scoregraph::kNumRelations> sort_topk(const scoregraph::EdgeMask& importance,
                                                                          const scoregraph::EdgeSet& edges, int k);

struct ManualFidelity {
  std::vector<double> fid_plus;
  std::vector<double> fid_minus;
  double mean_plus = 0.0;
  double mean_minus = 0.0;
};

/// Rebuilds both subgraphs edge by edge and node by node and calls predict.
ManualFidelity manual_fidelity(const scoregraph::ScoreGraph& graph, const scoregraph::Checkpoint& ckpt,
                               const std::vector<scoregraph::Explanation>& explanations);

}  // namespace oracle
