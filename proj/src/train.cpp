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

#include "scoregraph/train.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <set>
#include <string_view>

#include "scoregraph/engine.hpp"
#include "scoregraph/error.hpp"
#include "scoregraph/smote.hpp"

namespace scoregraph {

namespace {

struct BatchLoss {
  double loss = 0.0;
  Tensor seed;
};

BatchLoss cross_entropy(const Tensor& logits, std::span<const int> labels) {
  const auto probs = softmax_rows(logits);
  const auto n = static_cast<double>(logits.rows());
  BatchLoss out{0.0, Tensor(logits.rows(), logits.cols())};
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    const auto y = static_cast<std::size_t>(labels[i]);
    out.loss -= std::log(std::max(probs[i][y], 1e-300));
    for (std::size_t c = 0; c < logits.cols(); ++c) {
      out.seed(i, c) = (probs[i][c] - (c == y ? 1.0 : 0.0)) / n;
    }
  }
  out.loss /= n;
  return out;
}

}  // namespace

TrainExample make_example(std::string name, ScoreGraph graph, const CadenceAnnotations& annotations) {
  TrainExample ex;
  ex.name = std::move(name);
  ex.labels.reserve(graph.num_nodes());
  for (const auto& id : graph.node_ids) ex.labels.push_back(static_cast<int>(annotations.label_of(id)));
  for (const auto& [id, cls] : annotations.labels) {
    if (!graph.node_index(id)) fail(ErrorKind::Validation, "annotation refers to unknown note '" + id + "'");
  }
  ex.graph = std::move(graph);
  return ex;
}

double example_loss(const TrainExample& example, const Checkpoint& ckpt) {
  const auto result = forward_with_tape(example.graph, ckpt);
  return cross_entropy(result.logits, example.labels).loss;
}

double macro_f1(std::span<const int> truth, std::span<const int> predicted) {
  if (truth.size() != predicted.size()) fail(ErrorKind::Validation, "macro_f1: length mismatch");
  std::set<int> classes(truth.begin(), truth.end());
  classes.insert(predicted.begin(), predicted.end());
  if (classes.empty()) return 0.0;
  double total = 0.0;
  for (int c : classes) {
    double tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
      if (predicted[i] == c && truth[i] == c) ++tp;
      else if (predicted[i] == c) ++fp;
      else if (truth[i] == c) ++fn;
    }
    const double denom = 2 * tp + fp + fn;
    total += denom > 0 ? 2 * tp / denom : 0.0;
  }
  return total / static_cast<double>(classes.size());
}

std::string epoch_metrics_json(const EpochMetrics& m) {
  nlohmann::ordered_json j;
  j["epoch"] = m.epoch;
  j["train_loss"] = m.train_loss;
  j["val_macro_f1"] = m.val_macro_f1;
  j["synthetic_rows"] = m.synthetic_rows;
  return j.dump();
}

TrainResult train(const std::vector<TrainExample>& corpus, const TrainConfig& cfg, const ModelConfig& model_cfg,
                  const std::function<void(const EpochMetrics&)>& on_epoch) {
  if (corpus.empty()) fail(ErrorKind::Validation, "train: empty corpus");
  if (cfg.epochs < 0) fail(ErrorKind::Validation, "train: epochs must be >= 0");
  if (!(cfg.learning_rate >= 0.0)) fail(ErrorKind::Validation, "train: learning rate must be >= 0");
  if (cfg.validation_fraction < 0.0 || cfg.validation_fraction >= 1.0) {
    fail(ErrorKind::Validation, "train: validation_fraction must be in [0, 1)");
  }
  model_cfg.validate();
  const std::size_t input_dim = corpus.front().graph.num_features();
  const std::string spec = corpus.front().graph.feature_spec;
  for (const auto& ex : corpus) {
    if (ex.graph.num_features() != input_dim || ex.graph.feature_spec != spec) {
      fail(ErrorKind::Validation, "train: example '" + ex.name + "' has a different feature layout");
    }
    if (ex.labels.size() != ex.graph.num_nodes()) {
      fail(ErrorKind::Validation, "train: example '" + ex.name + "' label count mismatch");
    }
  }

  Rng rng(cfg.seed);
  Rng split_rng = rng.fork();
  Rng init_rng = rng.fork();
  Rng order_rng = rng.fork();
  Rng smote_rng = rng.fork();

  TrainResult result;
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  split_rng.shuffle(order);
  std::size_t n_val = 0;
  if (corpus.size() >= 2 && cfg.validation_fraction > 0.0) {
    n_val = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.validation_fraction * static_cast<double>(corpus.size()))));
    n_val = std::min(n_val, corpus.size() - 1);
  }
  result.val_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  result.train_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(result.val_indices.begin(), result.val_indices.end());
  std::sort(result.train_indices.begin(), result.train_indices.end());

  result.checkpoint = Checkpoint::initialize(model_cfg, input_dim, init_rng, spec);
  Checkpoint& ckpt = result.checkpoint;

  auto measure = [&](int epoch, std::size_t synthetic_rows) {
    EpochMetrics m;
    m.epoch = epoch;
    m.synthetic_rows = synthetic_rows;
    double loss = 0.0;
    for (std::size_t i : result.train_indices) loss += example_loss(corpus[i], ckpt);
    m.train_loss = loss / static_cast<double>(result.train_indices.size());
    if (!std::isfinite(m.train_loss)) {
      fail(ErrorKind::Numeric, "training diverged: non-finite loss at epoch " + std::to_string(epoch));
    }
    if (!result.val_indices.empty()) {
      std::vector<int> truth, pred;
      for (std::size_t i : result.val_indices) {
        const auto p = predict(corpus[i].graph, ckpt);
        truth.insert(truth.end(), corpus[i].labels.begin(), corpus[i].labels.end());
        for (auto c : p.classes) pred.push_back(static_cast<int>(c));
      }
      m.val_macro_f1 = macro_f1(truth, pred);
    }
    result.log.push_back(m);
    if (on_epoch) on_epoch(m);
  };

  measure(0, 0);
  std::vector<std::size_t> epoch_order = result.train_indices;
  auto run_epoch = [&](int epoch) {
    order_rng.shuffle(epoch_order);
    std::size_t synthetic_rows = 0;
    for (std::size_t idx : epoch_order) {
      const TrainExample& ex = corpus[idx];
      Tape tape = encode_with_tape(ex.graph, ckpt);
      int head_input = tape.embeddings_id;
      std::vector<int> batch_labels = ex.labels;
      if (cfg.smote) {
        const Tensor& emb = tape.value(tape.embeddings_id);
        SmoteResult sm = smote_oversample(emb, ex.labels, cfg.k_nn, smote_rng);
        if (!sm.provenance.empty()) {
          std::vector<Tape::MixRow> rows;
          rows.reserve(sm.labels.size());
          for (std::size_t r = 0; r < emb.rows(); ++r) rows.push_back({{static_cast<int>(r), 1.0}});
          for (const auto& pv : sm.provenance) rows.push_back({{pv.base, 1.0 - pv.lambda}, {pv.neighbor, pv.lambda}});
          head_input = tape.row_mix(tape.embeddings_id, std::move(rows));
          const Tensor& mixed = tape.value(head_input);
          for (std::size_t k = 0; k < sm.provenance.size(); ++k) {
            const auto& pv = sm.provenance[k];
            auto s = mixed.row(emb.rows() + k);
            auto x = emb.row(static_cast<std::size_t>(pv.base));
            auto y = emb.row(static_cast<std::size_t>(pv.neighbor));
            double sq = 0.0;
            for (std::size_t j = 0; j < s.size(); ++j) {
              const double r = s[j] - x[j] - pv.lambda * (y[j] - x[j]);
              sq += r * r;
            }
            result.max_smote_residual = std::max(result.max_smote_residual, std::sqrt(sq));
          }
          synthetic_rows += sm.provenance.size();
          batch_labels = std::move(sm.labels);
        }
      }
      const int logits = append_head(tape, head_input, ckpt);
      BatchLoss bl = cross_entropy(tape.value(logits), batch_labels);
      if (!std::isfinite(bl.loss)) {
        fail(ErrorKind::Numeric, "training diverged: non-finite loss at epoch " + std::to_string(epoch));
      }
      const auto grads = tape.backprop(logits, bl.seed, BackpropMode::Standard, true);
      for (std::size_t id = 0; id < tape.size(); ++id) {
        const auto& rec = tape.record(static_cast<int>(id));
        if (rec.op != Tape::Op::Param || grads[id].empty()) continue;
        Tensor& w = ckpt.tensor(rec.name);
        const auto& g = grads[id].data();
        for (std::size_t k = 0; k < g.size(); ++k) w.data()[k] -= cfg.learning_rate * g[k];
      }
    }
    measure(epoch, synthetic_rows);
  };
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    try {
      run_epoch(epoch);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Numeric || std::string_view(e.what()).find("epoch") != std::string_view::npos) throw;
      fail(ErrorKind::Numeric, "training diverged at epoch " + std::to_string(epoch) + ": " + e.what());
    }
  }
  return result;
}

}  // namespace scoregraph
