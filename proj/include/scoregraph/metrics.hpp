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

#include <optional>
#include <string>
#include <vector>

#include "scoregraph/explain.hpp"
#include "scoregraph/graph.hpp"
#include "scoregraph/model.hpp"

namespace scoregraph {

struct MetricConfig {
  double w_plus = 0.5;
  double w_minus = 0.5;

  void validate() const;
};

/// Weighted harmonic mean of fid+ and 1 - fid-; zero when fid+ = 0 or fid- = 1.
double characterization(double fid_plus, double fid_minus, const MetricConfig& cfg = {});

struct FidelityInstance {
  std::string note_id;
  ExplainMethod method = ExplainMethod::Saliency;
  int original_class = 0;
  /// Prediction on the graph with the selected edges removed.
  int removed_class = 0;
  /// Prediction on the graph that keeps only the selected edges and the
  /// explanation nodes' features.
  int kept_class = 0;
  double fid_plus = 0.0;
  double fid_minus = 0.0;
};

struct FidelityReport {
  std::vector<FidelityInstance> instances;
  double fid_plus = 0.0;
  double fid_minus = 0.0;
  double characterization = 0.0;
};

/// G minus the selected edges, all features kept.
ScoreGraph removed_subgraph(const ScoreGraph& graph, const Explanation& expl);
/// Only the selected edges; features of nodes outside the explanation zeroed.
ScoreGraph kept_subgraph(const ScoreGraph& graph, const Explanation& expl);

/// Accuracy-style fidelity against the model's own prediction, evaluated by
/// rebuilding each subgraph. Throws Error(Validation) for an empty list.
FidelityReport fidelity(const ScoreGraph& graph, const Checkpoint& ckpt, const std::vector<Explanation>& explanations,
                        const MetricConfig& cfg = {});

enum class InstanceSource { Predicted, Annotated };

struct EvaluationConfig {
  std::vector<ExplainMethod> methods = {ExplainMethod::Saliency, ExplainMethod::GuidedBackprop, ExplainMethod::Deconv,
                                        ExplainMethod::IntegratedGradients};
  int top_k = 10;
  int ig_steps = 50;
  MetricConfig metric;
  InstanceSource instances = InstanceSource::Predicted;
};

struct EvaluationPiece {
  std::string name;
  ScoreGraph graph;
  /// Used only with InstanceSource::Annotated.
  CadenceAnnotations annotations;
};

struct EvaluationCell {
  /// Empty when the piece has no instances (reported as N/A).
  std::optional<double> value;
  FidelityReport report;
};

struct EvaluationTable {
  std::vector<std::string> pieces;
  std::vector<ExplainMethod> methods;
  /// cells[piece][method]
  std::vector<std::vector<EvaluationCell>> cells;
};

EvaluationTable evaluate(const std::vector<EvaluationPiece>& pieces, const Checkpoint& ckpt,
                         const EvaluationConfig& cfg = {});

std::string table_to_json(const EvaluationTable& table);
/// Aligned plain-text table, one row per piece and one column per method.
std::string table_to_text(const EvaluationTable& table);
/// piece,note_id,method,original,removed,kept,fid_plus,fid_minus
std::string instances_to_csv(const EvaluationTable& table);

}  // namespace scoregraph
