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

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scoregraph/score.hpp"
#include "scoregraph/tensor.hpp"

namespace scoregraph {

/// Stable integer codes are part of the serialization format.
enum class RelationType : int { Onset = 0, Consecutive = 1, During = 2, Rest = 3 };

inline constexpr int kNumRelations = 4;
inline constexpr std::array<RelationType, kNumRelations> kRelations = {
    RelationType::Onset, RelationType::Consecutive, RelationType::During, RelationType::Rest};

const char* to_string(RelationType r);
std::optional<RelationType> parse_relation(std::string_view name);

struct Edge {
  int src = 0;
  int dst = 0;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Edge lists indexed by RelationType code.
using EdgeSet = std::array<std::vector<Edge>, kNumRelations>;

struct GraphOptions {
  /// Merge temporally contiguous rests into one silent span before linking
  /// the notes around it. When false each rest event is its own span.
  bool merge_rest_spans = true;
};

struct FeatureSpec {
  std::string name = "base-v1";

  static FeatureSpec base_v1() { return {}; }
};

struct ScoreGraph {
  std::vector<std::string> node_ids;
  EdgeSet edges;
  Tensor features;
  std::vector<std::string> feature_names;
  std::vector<Tick> onsets;
  std::string feature_spec = "base-v1";

  std::size_t num_nodes() const { return node_ids.size(); }
  std::size_t num_features() const { return features.cols(); }
  std::optional<std::size_t> node_index(std::string_view id) const;
  std::size_t num_edges() const;

  /// Checks the structural invariants: no duplicate or self edges, symmetric
  /// onset relation, matching row counts, finite features.
  void validate() const;
};

/// Edges for the four relations, sorted by (src, dst).
EdgeSet compute_edges(const Score& score, const GraphOptions& options = {});

ScoreGraph build_graph(const Score& score, const FeatureSpec& spec = FeatureSpec::base_v1(),
                       const GraphOptions& options = {});

/// Copy of the graph keeping only the given edges (node set unchanged).
ScoreGraph with_edges(const ScoreGraph& graph, EdgeSet edges);

std::string graph_to_json(const ScoreGraph& graph);
ScoreGraph graph_from_json(std::string_view json);

}  // namespace scoregraph
