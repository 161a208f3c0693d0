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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "scoregraph/graph.hpp"
#include "scoregraph/tensor.hpp"

namespace scoregraph {

struct Checkpoint;

/// How gradients cross a ReLU on the way back.
///   Standard: g * 1[x > 0]            (exact gradient)
///   Deconv:   g * 1[g > 0]            (forward mask ignored)
///   Guided:   g * 1[g > 0] * 1[x > 0]
enum class BackpropMode { Standard, Deconv, Guided };

const char* to_string(BackpropMode mode);

/// One scalar per edge and relation, multiplied into that edge's message.
using EdgeMask = std::array<std::vector<double>, kNumRelations>;

EdgeMask uniform_mask(const ScoreGraph& graph, double value = 1.0);

/// Recorded computation over matrix-valued nodes. Records are appended in
/// evaluation order, so the list is topologically sorted by construction.
/// Parameter leaves refer to tensors owned elsewhere (a Checkpoint); the tape
/// must not outlive them.
class Tape {
 public:
  enum class Op {
    Input,
    Param,
    Aggregate,
    SliceRows,
    MatMul,
    AddBias,
    Sum,
    Relu,
    L2Normalize,
    OnsetPool,
    RowMix,
  };

  struct Record {
    Op op = Op::Input;
    std::vector<int> inputs;
    Tensor value;
    const Tensor* external = nullptr;
    int aux = -1;
    std::size_t lo = 0;
    std::size_t hi = 0;
    double eps = 0.0;
    std::string name;
  };

  /// Row mixing: each output row is a weighted sum of input rows.
  using MixRow = std::vector<std::pair<int, double>>;

  Tape() = default;
  Tape(EdgeSet edges, std::vector<Tick> onsets);

  int input(std::string name, Tensor value);
  int param(std::string name, const Tensor& value);
  /// Masked mean over in-neighbors under one relation; the denominator is the
  /// in-degree regardless of mask values and empty neighborhoods give zero.
  int aggregate(int h, int mask, RelationType relation);
  int slice_rows(int x, std::size_t lo, std::size_t hi);
  int matmul(int a, int b);
  int add_bias(int x, int bias);
  int sum(std::vector<int> terms);
  int relu(int x);
  int l2_normalize(int x, double eps);
  /// h_v + mean of h_u over all u sharing v's onset.
  int onset_pool(int x);
  int row_mix(int x, std::vector<MixRow> rows);

  const Tensor& value(int id) const;
  const Record& record(int id) const { return records_[static_cast<std::size_t>(id)]; }
  std::size_t size() const { return records_.size(); }

  /// Reverse sweep seeded with d(output)/d(value(output_id)) = seed. Returns
  /// one gradient per record; parameter gradients are skipped (left empty)
  /// unless requested.
  std::vector<Tensor> backprop(int output_id, const Tensor& seed, BackpropMode mode,
                               bool param_grads) const;

  /// Re-evaluates every non-leaf record from the leaves and returns the value
  /// of `output_id`. Uses the same kernels as recording.
  Tensor replay(int output_id) const;

  int features_id = -1;
  std::array<int, kNumRelations> mask_ids{-1, -1, -1, -1};
  int embeddings_id = -1;
  int output_id = -1;

 private:
  int push(Record r);
  Tensor evaluate(const Record& r, const std::vector<const Tensor*>& in) const;

  std::vector<Record> records_;
  EdgeSet edges_;
  std::array<std::vector<double>, kNumRelations> inv_in_degree_;
  std::vector<int> onset_group_;
  std::vector<double> group_inv_size_;
  std::vector<std::vector<MixRow>> mixes_;
};

struct ForwardResult {
  Tensor logits;  // n_nodes x n_classes
  Tape tape;
};

/// Runs the encoder, onset pooling and classifier head while recording a tape.
/// `mask` defaults to all ones, `feature_override` replaces graph.features.
/// Throws Error(Validation) on shape mismatch and Error(Numeric) when an
/// activation becomes non-finite.
ForwardResult forward_with_tape(const ScoreGraph& graph, const Checkpoint& ckpt,
                                const EdgeMask* mask = nullptr,
                                const Tensor* feature_override = nullptr);

/// Encoder and onset pooling only; the returned tape's output is the
/// embedding record. Used by the trainer to splice oversampling in.
Tape encode_with_tape(const ScoreGraph& graph, const Checkpoint& ckpt, const EdgeMask* mask = nullptr,
                      const Tensor* feature_override = nullptr);

/// Appends the classifier head on top of record `embeddings` and returns the
/// logits record.
int append_head(Tape& tape, int embeddings, const Checkpoint& ckpt);

struct GradientResult {
  Tensor d_features;
  EdgeMask d_edge_mask;
  double value = 0.0;
};

/// Gradient of logit[node, cls] with respect to the features and every edge
/// mask variable.
GradientResult backward(const Tape& tape, std::size_t node, std::size_t cls, BackpropMode mode);

/// Central differences (f(x + eps e_i) - f(x - eps e_i)) / (2 eps).
std::vector<double> finite_diff(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x, double eps);

}  // namespace scoregraph
