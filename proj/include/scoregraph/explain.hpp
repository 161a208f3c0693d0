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

#include "scoregraph/engine.hpp"
#include "scoregraph/graph.hpp"
#include "scoregraph/model.hpp"

namespace scoregraph {

enum class ExplainMethod { Saliency, IntegratedGradients, Deconv, GuidedBackprop };

/// "saliency", "ig", "deconv", "gbp".
const char* to_string(ExplainMethod method);
std::optional<ExplainMethod> parse_method(std::string_view name);
/// Column label used in evaluation tables: SAL, IG, DC, GBP.
const char* method_label(ExplainMethod method);

struct ExplainConfig {
  ExplainMethod method = ExplainMethod::Saliency;
  int top_k = 10;
  int ig_steps = 50;
  /// Defaults to the model's predicted class at the target note.
  std::optional<int> target_class;

  void validate() const;
};

using EdgeSelection = std::array<std::vector<Edge>, kNumRelations>;

struct Explanation {
  std::string target_note_id;
  std::size_t target_index = 0;
  ExplainMethod method = ExplainMethod::Saliency;
  int target_class = 0;
  int top_k = 10;
  std::array<double, kNumClasses> model_output{};
  /// Nonnegative soft importance per edge, aligned with graph.edges.
  EdgeMask edge_importance;
  /// Per relation, at most top_k edges ordered by rank.
  EdgeSelection selected_edges;
  /// Positions of the selected edges in the graph's per-relation edge lists.
  std::array<std::vector<std::size_t>, kNumRelations> selected_indices;
  /// n_nodes x n_features, nonnegative.
  Tensor feature_mask;
  /// Node indices of the selected edges' endpoints plus the target, ascending.
  std::vector<std::size_t> explanation_nodes;
  std::vector<std::string> node_ids;
  std::vector<std::string> feature_names;
};

/// Signed attributions from integrated gradients along the straight path
/// from zero features and zero edge masks to the actual input.
struct IntegratedGradients {
  Tensor features;
  EdgeMask edge_mask;
  double f_input = 0.0;
  double f_baseline = 0.0;

  double total() const;
};

/// Midpoint Riemann sum with `steps` gradient evaluations. `baseline_features`
/// and `baseline_mask` default to zero.
IntegratedGradients integrated_gradients(const ScoreGraph& graph, const Checkpoint& ckpt, std::size_t node,
                                         int cls, int steps, const Tensor* baseline_features = nullptr,
                                         const EdgeMask* baseline_mask = nullptr);

/// Indices of the k most important edges per relation, ranked by importance
/// descending, then src ascending, then dst ascending.
std::array<std::vector<std::size_t>, kNumRelations> topk_select(const EdgeMask& importance, const EdgeSet& edges,
                                                                int k);

/// Throws Error(NotFound) for an unknown note and Error(Numeric) when the
/// gradients are not finite.
Explanation explain(const ScoreGraph& graph, const Checkpoint& ckpt, std::string_view target_note,
                    const ExplainConfig& cfg);

struct FeatureImportance {
  /// Target-note features, highest mask value first (ties by column order).
  std::vector<std::pair<std::string, double>> target;
  /// Row sums of the feature mask, in node order.
  std::vector<std::pair<std::string, double>> node_totals;
};

FeatureImportance feature_importance(const Explanation& expl, int k);

std::string explanation_to_json(const Explanation& expl);

}  // namespace scoregraph
