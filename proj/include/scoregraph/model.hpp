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
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scoregraph/graph.hpp"
#include "scoregraph/rng.hpp"
#include "scoregraph/score.hpp"
#include "scoregraph/tensor.hpp"

namespace scoregraph {

enum class Activation { Relu, Identity };
enum class NormKind { L2, None };
enum class OnsetPoolKind { ResidualMean, None };

struct ModelConfig {
  int n_layers = 2;
  int hidden_dim = 64;
  int n_classes = kNumClasses;
  Activation activation = Activation::Relu;
  std::string aggregation = "mean";
  NormKind norm = NormKind::L2;
  OnsetPoolKind onset_pool = OnsetPoolKind::ResidualMean;

  void validate() const;
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

inline constexpr double kNormEpsilon = 1e-12;
inline constexpr int kCheckpointFormatVersion = 1;

/// Model configuration plus named weights.
///
/// Tensor names:
///   encoder.{l}.{relation}.weight  (2*d_in, hidden)  rows [0, d_in) act on
///                                  the node itself, rows [d_in, 2*d_in) on
///                                  the relation's neighbor mean
///   encoder.{l}.bias               (1, hidden)
///   head.0.weight / head.0.bias    (d_emb, hidden) / (1, hidden)
///   head.1.weight / head.1.bias    (hidden, n_classes) / (1, n_classes)
struct Checkpoint {
  int format_version = kCheckpointFormatVersion;
  ModelConfig config;
  std::string feature_spec = "base-v1";
  std::size_t input_dim = 0;
  std::map<std::string, Tensor> tensors;

  const Tensor& tensor(const std::string& name) const;
  Tensor& tensor(const std::string& name);

  std::size_t embedding_dim() const;
  /// Expected shape of every tensor for this config.
  std::map<std::string, std::pair<std::size_t, std::size_t>> expected_shapes() const;
  void validate() const;

  /// Glorot-uniform weights, zero biases.
  static Checkpoint initialize(const ModelConfig& config, std::size_t input_dim, Rng& rng,
                               std::string feature_spec = "base-v1");
  static Checkpoint zeros(const ModelConfig& config, std::size_t input_dim,
                          std::string feature_spec = "base-v1");
};

std::string encoder_weight_name(int layer, RelationType r);
std::string encoder_bias_name(int layer);

/// JSON with 17-significant-digit decimals; save(load(save(c))) == save(c).
std::string save_checkpoint(const Checkpoint& ckpt);
/// Rejects version, shape, and non-finite problems with Error(Validation).
Checkpoint load_checkpoint(std::string_view json);
Checkpoint load_checkpoint_file(const std::string& path);
void save_checkpoint_file(const Checkpoint& ckpt, const std::string& path);

/// Residual onset pooling on a plain matrix: h_v + mean{h_u : onset(u) = onset(v)}.
Tensor onset_pool(const Tensor& embeddings, std::span<const Tick> onsets);

struct CadencePrediction {
  std::vector<std::string> note_ids;
  std::vector<CadenceClass> classes;
  std::vector<std::array<double, kNumClasses>> probs;

  std::map<std::string, CadenceClass> as_map() const;
};

/// Row-wise softmax.
std::vector<std::array<double, kNumClasses>> softmax_rows(const Tensor& logits);
/// argmax with ties resolved toward the lower class index.
int argmax(std::span<const double> values);

CadencePrediction predict(const ScoreGraph& graph, const Checkpoint& ckpt);
CadencePrediction prediction_from_logits(const ScoreGraph& graph, const Tensor& logits);

std::string prediction_to_json(const CadencePrediction& prediction);

}  // namespace scoregraph
