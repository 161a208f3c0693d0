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
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "scoregraph/graph.hpp"
#include "scoregraph/model.hpp"
#include "scoregraph/score.hpp"

namespace scoregraph {

struct TrainConfig {
  std::uint64_t seed = 7;
  int epochs = 50;
  double learning_rate = 0.05;
  int k_nn = 5;
  /// Fraction of pieces held out for validation (at least one when the
  /// corpus has two or more pieces).
  double validation_fraction = 0.1;
  bool smote = true;
};

struct TrainExample {
  std::string name;
  ScoreGraph graph;
  /// Class index per node.
  std::vector<int> labels;
};

/// Resolves annotations onto graph nodes; unlabeled nodes become no-cad.
TrainExample make_example(std::string name, ScoreGraph graph, const CadenceAnnotations& annotations);

struct EpochMetrics {
  int epoch = 0;
  /// Mean per-piece cross-entropy over the training pieces, measured with the
  /// weights at the end of the epoch (epoch 0 = initialization), no oversampling.
  double train_loss = 0.0;
  double val_macro_f1 = 0.0;
  /// Rows added by oversampling during the epoch.
  std::size_t synthetic_rows = 0;
};

struct TrainResult {
  Checkpoint checkpoint;
  std::vector<EpochMetrics> log;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> val_indices;
  /// Largest |s - x - lambda (x_nn - x)| over every synthetic row the head saw.
  double max_smote_residual = 0.0;
};

/// Mini-batch gradient descent, one piece per batch. Per batch: encoder and
/// onset pooling, oversampling of the pooled embeddings, classifier head,
/// mean cross-entropy, one SGD step. Throws Error(Numeric) naming the epoch
/// when the loss stops being finite.
TrainResult train(const std::vector<TrainExample>& corpus, const TrainConfig& cfg, const ModelConfig& model_cfg,
                  const std::function<void(const EpochMetrics&)>& on_epoch = {});

std::string epoch_metrics_json(const EpochMetrics& m);

/// Mean cross-entropy of the model on one example.
double example_loss(const TrainExample& example, const Checkpoint& ckpt);

/// Per-class F1 averaged over the classes that occur in `truth` or `predicted`.
double macro_f1(std::span<const int> truth, std::span<const int> predicted);

}  // namespace scoregraph
