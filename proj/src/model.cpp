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

#include "scoregraph/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "scoregraph/engine.hpp"
#include "scoregraph/error.hpp"

namespace scoregraph {

namespace {

const char* activation_name(Activation a) { return a == Activation::Relu ? "relu" : "identity"; }
const char* norm_name(NormKind n) { return n == NormKind::L2 ? "l2" : "none"; }
const char* pool_name(OnsetPoolKind p) { return p == OnsetPoolKind::ResidualMean ? "residual_mean" : "none"; }

Activation parse_activation(const std::string& s) {
  if (s == "relu") return Activation::Relu;
  if (s == "identity") return Activation::Identity;
  fail(ErrorKind::Validation, "unknown activation '" + s + "'");
}

NormKind parse_norm(const std::string& s) {
  if (s == "l2") return NormKind::L2;
  if (s == "none") return NormKind::None;
  fail(ErrorKind::Validation, "unknown norm '" + s + "'");
}

OnsetPoolKind parse_pool(const std::string& s) {
  if (s == "residual_mean") return OnsetPoolKind::ResidualMean;
  if (s == "none") return OnsetPoolKind::None;
  fail(ErrorKind::Validation, "unknown onset_pool '" + s + "'");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void ModelConfig::validate() const {
  if (n_layers < 0) fail(ErrorKind::Validation, "n_layers must be >= 0");
  if (hidden_dim < 1) fail(ErrorKind::Validation, "hidden_dim must be >= 1");
  if (n_classes != kNumClasses) fail(ErrorKind::Validation, "n_classes must be 4");
  if (aggregation != "mean") fail(ErrorKind::Validation, "unsupported aggregation '" + aggregation + "'");
}

std::string encoder_weight_name(int layer, RelationType r) {
  return "encoder." + std::to_string(layer) + "." + to_string(r) + ".weight";
}

std::string encoder_bias_name(int layer) { return "encoder." + std::to_string(layer) + ".bias"; }

const Tensor& Checkpoint::tensor(const std::string& name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) fail(ErrorKind::Validation, "checkpoint has no tensor '" + name + "'");
  return it->second;
}

Tensor& Checkpoint::tensor(const std::string& name) {
  auto it = tensors.find(name);
  if (it == tensors.end()) fail(ErrorKind::Validation, "checkpoint has no tensor '" + name + "'");
  return it->second;
}

std::size_t Checkpoint::embedding_dim() const {
  return config.n_layers == 0 ? input_dim : static_cast<std::size_t>(config.hidden_dim);
}

std::map<std::string, std::pair<std::size_t, std::size_t>> Checkpoint::expected_shapes() const {
  std::map<std::string, std::pair<std::size_t, std::size_t>> shapes;
  const auto hidden = static_cast<std::size_t>(config.hidden_dim);
  std::size_t d_in = input_dim;
  for (int l = 0; l < config.n_layers; ++l) {
    for (RelationType r : kRelations) shapes[encoder_weight_name(l, r)] = {2 * d_in, hidden};
    shapes[encoder_bias_name(l)] = {1, hidden};
    d_in = hidden;
  }
  shapes["head.0.weight"] = {embedding_dim(), hidden};
  shapes["head.0.bias"] = {1, hidden};
  shapes["head.1.weight"] = {hidden, static_cast<std::size_t>(config.n_classes)};
  shapes["head.1.bias"] = {1, static_cast<std::size_t>(config.n_classes)};
  return shapes;
}

void Checkpoint::validate() const {
  if (format_version != kCheckpointFormatVersion) {
    fail(ErrorKind::Validation, "unsupported checkpoint format_version " + std::to_string(format_version));
  }
  config.validate();
  if (input_dim == 0) fail(ErrorKind::Validation, "checkpoint input_dim must be positive");
  const auto shapes = expected_shapes();
  for (const auto& [name, shape] : shapes) {
    auto it = tensors.find(name);
    if (it == tensors.end()) fail(ErrorKind::Validation, "checkpoint is missing tensor '" + name + "'");
    if (it->second.rows() != shape.first || it->second.cols() != shape.second) {
      fail(ErrorKind::Validation, "tensor '" + name + "' has shape " + it->second.shape_string() +
                                      ", expected (" + std::to_string(shape.first) + ", " +
                                      std::to_string(shape.second) + ")");
    }
    if (!it->second.all_finite()) fail(ErrorKind::Validation, "tensor '" + name + "' has non-finite values");
  }
  for (const auto& [name, t] : tensors) {
    if (!shapes.count(name)) fail(ErrorKind::Validation, "unexpected tensor '" + name + "'");
  }
}

Checkpoint Checkpoint::zeros(const ModelConfig& config, std::size_t input_dim, std::string feature_spec) {
  Checkpoint c;
  c.config = config;
  c.input_dim = input_dim;
  c.feature_spec = std::move(feature_spec);
  config.validate();
  for (const auto& [name, shape] : c.expected_shapes()) c.tensors[name] = Tensor(shape.first, shape.second);
  return c;
}

Checkpoint Checkpoint::initialize(const ModelConfig& config, std::size_t input_dim, Rng& rng,
                                  std::string feature_spec) {
  Checkpoint c = zeros(config, input_dim, std::move(feature_spec));
  for (auto& [name, t] : c.tensors) {
    if (name.ends_with(".bias")) continue;
    const double limit = std::sqrt(6.0 / static_cast<double>(t.rows() + t.cols()));
    for (double& v : t.data()) v = rng.uniform(-limit, limit);
  }
  return c;
}

std::string save_checkpoint(const Checkpoint& ckpt) {
  ckpt.validate();
  std::ostringstream out;
  nlohmann::ordered_json cfg;
  cfg["n_layers"] = ckpt.config.n_layers;
  cfg["hidden_dim"] = ckpt.config.hidden_dim;
  cfg["n_classes"] = ckpt.config.n_classes;
  cfg["activation"] = activation_name(ckpt.config.activation);
  cfg["aggregation"] = ckpt.config.aggregation;
  cfg["norm"] = norm_name(ckpt.config.norm);
  cfg["onset_pool"] = pool_name(ckpt.config.onset_pool);
  out << "{\n";
  out << "  \"format_version\": " << ckpt.format_version << ",\n";
  out << "  \"model_config\": " << cfg.dump() << ",\n";
  out << "  \"feature_spec\": " << nlohmann::json(ckpt.feature_spec).dump() << ",\n";
  out << "  \"input_dim\": " << ckpt.input_dim << ",\n";
  out << "  \"tensors\": {";
  bool first = true;
  for (const auto& [name, t] : ckpt.tensors) {
    out << (first ? "\n" : ",\n");
    first = false;
    out << "    " << nlohmann::json(name).dump() << ": {\"shape\": [" << t.rows() << ", " << t.cols()
        << "], \"data\": [";
    for (std::size_t i = 0; i < t.size(); ++i) {
      if (i) out << ", ";
      out << format_double(t.data()[i]);
    }
    out << "]}";
  }
  out << "\n  }\n}\n";
  return out.str();
}

Checkpoint load_checkpoint(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("checkpoint JSON: ") + e.what());
  }
  try {
    Checkpoint c;
    c.format_version = j.at("format_version").get<int>();
    if (c.format_version != kCheckpointFormatVersion) {
      fail(ErrorKind::Validation, "unsupported checkpoint format_version " + std::to_string(c.format_version));
    }
    const auto& cfg = j.at("model_config");
    c.config.n_layers = cfg.at("n_layers").get<int>();
    c.config.hidden_dim = cfg.at("hidden_dim").get<int>();
    c.config.n_classes = cfg.at("n_classes").get<int>();
    c.config.activation = parse_activation(cfg.at("activation").get<std::string>());
    c.config.aggregation = cfg.at("aggregation").get<std::string>();
    c.config.norm = parse_norm(cfg.at("norm").get<std::string>());
    c.config.onset_pool = parse_pool(cfg.at("onset_pool").get<std::string>());
    c.feature_spec = j.at("feature_spec").get<std::string>();
    c.input_dim = j.at("input_dim").get<std::size_t>();
    for (const auto& [name, entry] : j.at("tensors").items()) {
      const auto shape = entry.at("shape").get<std::vector<std::size_t>>();
      if (shape.size() != 2) fail(ErrorKind::Validation, "tensor '" + name + "' shape must have two entries");
      auto data = entry.at("data").get<std::vector<double>>();
      if (data.size() != shape[0] * shape[1]) {
        fail(ErrorKind::Validation, "tensor '" + name + "' has " + std::to_string(data.size()) +
                                        " values for shape (" + std::to_string(shape[0]) + ", " +
                                        std::to_string(shape[1]) + ")");
      }
      c.tensors[name] = Tensor(shape[0], shape[1], std::move(data));
    }
    c.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, std::string("checkpoint: ") + e.what());
  }
}

Checkpoint load_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open checkpoint '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return load_checkpoint(ss.str());
}

void save_checkpoint_file(const Checkpoint& ckpt, const std::string& path) {
  const std::string text = save_checkpoint(ckpt);
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write checkpoint '" + path + "'");
  out << text;
  if (!out) fail(ErrorKind::Io, "failed writing checkpoint '" + path + "'");
}

Tensor onset_pool(const Tensor& embeddings, std::span<const Tick> onsets) {
  if (onsets.size() != embeddings.rows()) {
    fail(ErrorKind::Validation, "onset_pool: " + std::to_string(onsets.size()) + " onsets for " +
                                    std::to_string(embeddings.rows()) + " rows");
  }
  std::map<Tick, std::pair<std::vector<double>, int>> groups;
  for (std::size_t v = 0; v < embeddings.rows(); ++v) {
    auto& [sum, count] = groups[onsets[v]];
    if (sum.empty()) sum.assign(embeddings.cols(), 0.0);
    auto row = embeddings.row(v);
    for (std::size_t j = 0; j < row.size(); ++j) sum[j] += row[j];
    ++count;
  }
  Tensor out = embeddings;
  for (std::size_t v = 0; v < out.rows(); ++v) {
    const auto& [sum, count] = groups.at(onsets[v]);
    const double k = 1.0 / count;
    auto row = out.row(v);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += k * sum[j];
  }
  return out;
}

std::map<std::string, CadenceClass> CadencePrediction::as_map() const {
  std::map<std::string, CadenceClass> m;
  for (std::size_t i = 0; i < note_ids.size(); ++i) m[note_ids[i]] = classes[i];
  return m;
}

std::vector<std::array<double, kNumClasses>> softmax_rows(const Tensor& logits) {
  if (logits.cols() != kNumClasses) fail(ErrorKind::Validation, "logits must have 4 columns");
  std::vector<std::array<double, kNumClasses>> out(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    auto row = logits.row(i);
    const double m = *std::max_element(row.begin(), row.end());
    double total = 0.0;
    for (int c = 0; c < kNumClasses; ++c) {
      out[i][c] = std::exp(row[c] - m);
      total += out[i][c];
    }
    for (double& p : out[i]) p /= total;
  }
  return out;
}

int argmax(std::span<const double> values) {
  int best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  }
  return best;
}

CadencePrediction prediction_from_logits(const ScoreGraph& graph, const Tensor& logits) {
  if (logits.rows() != graph.num_nodes()) fail(ErrorKind::Validation, "logit rows do not match graph nodes");
  CadencePrediction p;
  p.note_ids = graph.node_ids;
  p.probs = softmax_rows(logits);
  p.classes.reserve(logits.rows());
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    p.classes.push_back(static_cast<CadenceClass>(argmax(logits.row(i))));
  }
  return p;
}

CadencePrediction predict(const ScoreGraph& graph, const Checkpoint& ckpt) {
  if (graph.feature_spec != ckpt.feature_spec) {
    fail(ErrorKind::Validation, "graph feature spec '" + graph.feature_spec + "' does not match checkpoint spec '" +
                                    ckpt.feature_spec + "'");
  }
  auto result = forward_with_tape(graph, ckpt);
  return prediction_from_logits(graph, result.logits);
}

std::string prediction_to_json(const CadencePrediction& prediction) {
  nlohmann::ordered_json notes = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < prediction.note_ids.size(); ++i) {
    nlohmann::ordered_json entry;
    entry["note_id"] = prediction.note_ids[i];
    entry["class"] = to_string(prediction.classes[i]);
    entry["probs"] = prediction.probs[i];
    notes.push_back(std::move(entry));
  }
  nlohmann::ordered_json j;
  j["classes"] = kClassNames;
  j["predictions"] = std::move(notes);
  return j.dump() + "\n";
}

}  // namespace scoregraph
