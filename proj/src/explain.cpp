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

#include "scoregraph/explain.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <numeric>

#include "scoregraph/error.hpp"

namespace scoregraph {

namespace {

struct MethodInfo {
  ExplainMethod method;
  const char* name;
  const char* label;
};

constexpr std::array<MethodInfo, 4> kMethods = {{
    {ExplainMethod::Saliency, "saliency", "SAL"},
    {ExplainMethod::IntegratedGradients, "ig", "IG"},
    {ExplainMethod::Deconv, "deconv", "DC"},
    {ExplainMethod::GuidedBackprop, "gbp", "GBP"},
}};

BackpropMode mode_for(ExplainMethod m) {
  switch (m) {
    case ExplainMethod::Deconv: return BackpropMode::Deconv;
    case ExplainMethod::GuidedBackprop: return BackpropMode::Guided;
    default: return BackpropMode::Standard;
  }
}

void require_finite(const Tensor& t, const char* what) {
  if (!t.all_finite()) fail(ErrorKind::Numeric, std::string("non-finite ") + what);
}

void require_finite(const EdgeMask& m, const char* what) {
  for (const auto& v : m) {
    for (double x : v) {
      if (!std::isfinite(x)) fail(ErrorKind::Numeric, std::string("non-finite ") + what);
    }
  }
}

}  // namespace

const char* to_string(ExplainMethod method) {
  for (const auto& m : kMethods) {
    if (m.method == method) return m.name;
  }
  return "saliency";
}

const char* method_label(ExplainMethod method) {
  for (const auto& m : kMethods) {
    if (m.method == method) return m.label;
  }
  return "SAL";
}

std::optional<ExplainMethod> parse_method(std::string_view name) {
  for (const auto& m : kMethods) {
    if (name == m.name) return m.method;
  }
  return std::nullopt;
}

void ExplainConfig::validate() const {
  if (top_k < 1) fail(ErrorKind::Validation, "top_k must be >= 1");
  if (ig_steps < 1) fail(ErrorKind::Validation, "ig_steps must be >= 1");
  if (target_class && (*target_class < 0 || *target_class >= kNumClasses)) {
    fail(ErrorKind::Validation, "target_class must be in [0, 4)");
  }
}

double IntegratedGradients::total() const {
  double s = std::accumulate(features.data().begin(), features.data().end(), 0.0);
  for (const auto& m : edge_mask) s = std::accumulate(m.begin(), m.end(), s);
  return s;
}

IntegratedGradients integrated_gradients(const ScoreGraph& graph, const Checkpoint& ckpt, std::size_t node, int cls,
                                         int steps, const Tensor* baseline_features, const EdgeMask* baseline_mask) {
  if (steps < 1) fail(ErrorKind::Validation, "ig_steps must be >= 1");
  const Tensor zero_features(graph.features.rows(), graph.features.cols());
  const EdgeMask zero_mask = uniform_mask(graph, 0.0);
  const EdgeMask ones = uniform_mask(graph, 1.0);
  const Tensor& x0 = baseline_features ? *baseline_features : zero_features;
  const EdgeMask& m0 = baseline_mask ? *baseline_mask : zero_mask;
  if (!x0.same_shape(graph.features)) fail(ErrorKind::Validation, "IG baseline feature shape mismatch");

  Tensor grad_sum(graph.features.rows(), graph.features.cols());
  EdgeMask mask_grad_sum = zero_mask;
  Tensor x(graph.features.rows(), graph.features.cols());
  EdgeMask m = zero_mask;
  for (int k = 0; k < steps; ++k) {
    const double alpha = (k + 0.5) / steps;
    for (std::size_t i = 0; i < x.size(); ++i) {
      x.data()[i] = x0.data()[i] + alpha * (graph.features.data()[i] - x0.data()[i]);
    }
    for (int r = 0; r < kNumRelations; ++r) {
      for (std::size_t e = 0; e < m[r].size(); ++e) m[r][e] = m0[r][e] + alpha * (ones[r][e] - m0[r][e]);
    }
    auto fwd = forward_with_tape(graph, ckpt, &m, &x);
    const auto g = backward(fwd.tape, node, static_cast<std::size_t>(cls), BackpropMode::Standard);
    grad_sum += g.d_features;
    for (int r = 0; r < kNumRelations; ++r) {
      for (std::size_t e = 0; e < m[r].size(); ++e) mask_grad_sum[r][e] += g.d_edge_mask[r][e];
    }
  }

  IntegratedGradients ig;
  ig.features = Tensor(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) {
    ig.features.data()[i] = (graph.features.data()[i] - x0.data()[i]) * grad_sum.data()[i] / steps;
  }
  ig.edge_mask = zero_mask;
  for (int r = 0; r < kNumRelations; ++r) {
    for (std::size_t e = 0; e < m[r].size(); ++e) {
      ig.edge_mask[r][e] = (ones[r][e] - m0[r][e]) * mask_grad_sum[r][e] / steps;
    }
  }
  const auto at_input = forward_with_tape(graph, ckpt, &ones, &graph.features);
  const auto at_base = forward_with_tape(graph, ckpt, &m0, &x0);
  ig.f_input = at_input.logits(node, static_cast<std::size_t>(cls));
  ig.f_baseline = at_base.logits(node, static_cast<std::size_t>(cls));
  return ig;
}

std::array<std::vector<std::size_t>, kNumRelations> topk_select(const EdgeMask& importance, const EdgeSet& edges,
                                                                int k) {
  if (k < 1) fail(ErrorKind::Validation, "top_k must be >= 1");
  std::array<std::vector<std::size_t>, kNumRelations> out;
  for (int r = 0; r < kNumRelations; ++r) {
    const auto& imp = importance[r];
    const auto& es = edges[r];
    if (imp.size() != es.size()) fail(ErrorKind::Validation, "importance length does not match edge count");
    std::vector<std::size_t> idx(es.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const std::size_t take = std::min(idx.size(), static_cast<std::size_t>(k));
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(take), idx.end(),
                      [&](std::size_t a, std::size_t b) {
                        if (imp[a] != imp[b]) return imp[a] > imp[b];
                        return es[a] < es[b];
                      });
    idx.resize(take);
    out[r] = std::move(idx);
  }
  return out;
}

Explanation explain(const ScoreGraph& graph, const Checkpoint& ckpt, std::string_view target_note,
                    const ExplainConfig& cfg) {
  cfg.validate();
  const auto node = graph.node_index(target_note);
  if (!node) fail(ErrorKind::NotFound, "unknown note '" + std::string(target_note) + "'");

  Explanation ex;
  ex.target_note_id = std::string(target_note);
  ex.target_index = *node;
  ex.method = cfg.method;
  ex.top_k = cfg.top_k;
  ex.node_ids = graph.node_ids;
  ex.feature_names = graph.feature_names;

  auto fwd = forward_with_tape(graph, ckpt);
  const auto probs = softmax_rows(fwd.logits);
  ex.model_output = probs[*node];
  ex.target_class = cfg.target_class ? *cfg.target_class : argmax(fwd.logits.row(*node));

  Tensor feature_signal;
  EdgeMask edge_signal;
  if (cfg.method == ExplainMethod::IntegratedGradients) {
    auto ig = integrated_gradients(graph, ckpt, *node, ex.target_class, cfg.ig_steps);
    feature_signal = std::move(ig.features);
    edge_signal = std::move(ig.edge_mask);
  } else {
    auto g = backward(fwd.tape, *node, static_cast<std::size_t>(ex.target_class), mode_for(cfg.method));
    feature_signal = std::move(g.d_features);
    edge_signal = std::move(g.d_edge_mask);
  }
  require_finite(feature_signal, "feature attribution");
  require_finite(edge_signal, "edge attribution");

  ex.feature_mask = std::move(feature_signal);
  for (double& v : ex.feature_mask.data()) v = std::abs(v);
  ex.edge_importance = std::move(edge_signal);
  for (auto& v : ex.edge_importance) {
    for (double& x : v) x = std::abs(x);
  }

  ex.selected_indices = topk_select(ex.edge_importance, graph.edges, cfg.top_k);
  const auto& picks = ex.selected_indices;
  std::vector<char> in_expl(graph.num_nodes(), 0);
  in_expl[*node] = 1;
  for (int r = 0; r < kNumRelations; ++r) {
    for (std::size_t i : picks[r]) {
      const Edge& e = graph.edges[r][i];
      ex.selected_edges[r].push_back(e);
      in_expl[static_cast<std::size_t>(e.src)] = 1;
      in_expl[static_cast<std::size_t>(e.dst)] = 1;
    }
  }
  for (std::size_t v = 0; v < in_expl.size(); ++v) {
    if (in_expl[v]) ex.explanation_nodes.push_back(v);
  }
  return ex;
}

FeatureImportance feature_importance(const Explanation& expl, int k) {
  FeatureImportance fi;
  const Tensor& mask = expl.feature_mask;
  if (mask.rows() == 0) return fi;
  auto row = mask.row(expl.target_index);
  std::vector<std::size_t> idx(row.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return row[a] > row[b]; });
  const std::size_t take = std::min(idx.size(), static_cast<std::size_t>(std::max(k, 0)));
  for (std::size_t i = 0; i < take; ++i) {
    const std::string name = idx[i] < expl.feature_names.size() ? expl.feature_names[idx[i]] : std::to_string(idx[i]);
    fi.target.emplace_back(name, row[idx[i]]);
  }
  for (std::size_t v = 0; v < mask.rows(); ++v) {
    auto r = mask.row(v);
    fi.node_totals.emplace_back(expl.node_ids.at(v), std::accumulate(r.begin(), r.end(), 0.0));
  }
  return fi;
}

std::string explanation_to_json(const Explanation& expl) {
  nlohmann::ordered_json j;
  j["target_note_id"] = expl.target_note_id;
  j["method"] = to_string(expl.method);
  j["target_class"] = kClassNames[static_cast<std::size_t>(expl.target_class)];
  j["k"] = expl.top_k;
  j["probs"] = expl.model_output;
  nlohmann::ordered_json edges = nlohmann::ordered_json::object();
  for (int r = 0; r < kNumRelations; ++r) {
    auto list = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < expl.selected_edges[r].size(); ++i) {
      const Edge& e = expl.selected_edges[r][i];
      nlohmann::ordered_json item;
      item["src_id"] = expl.node_ids.at(static_cast<std::size_t>(e.src));
      item["dst_id"] = expl.node_ids.at(static_cast<std::size_t>(e.dst));
      item["score"] = expl.edge_importance[r][expl.selected_indices[r][i]];
      list.push_back(std::move(item));
    }
    edges[to_string(kRelations[r])] = std::move(list);
  }
  j["edges"] = std::move(edges);
  const auto fi = feature_importance(expl, expl.top_k);
  nlohmann::ordered_json target = nlohmann::ordered_json::array();
  for (const auto& [name, score] : fi.target) target.push_back({{"name", name}, {"score", score}});
  nlohmann::ordered_json totals = nlohmann::ordered_json::object();
  for (const auto& [id, score] : fi.node_totals) totals[id] = score;
  j["features"] = {{"target", std::move(target)}, {"node_totals", std::move(totals)}};
  std::vector<std::string> nodes;
  for (std::size_t v : expl.explanation_nodes) nodes.push_back(expl.node_ids.at(v));
  j["explanation_nodes"] = std::move(nodes);
  return j.dump() + "\n";
}

}  // namespace scoregraph
