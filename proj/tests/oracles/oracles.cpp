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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace oracle {

using namespace scoregraph;

EdgeSets as_sets(const EdgeSet& edges) {
  EdgeSets out;
  for (int r = 0; r < kNumRelations; ++r) out[r] = std::set<Edge>(edges[r].begin(), edges[r].end());
  return out;
}

EdgeSets oracle_edges(const Score& score, bool merge_rest_spans) {
  EdgeSets out;
  const auto& notes = score.notes;
  const int n = static_cast<int>(notes.size());
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      const auto& a = notes[x];
      const auto& b = notes[y];
      if (a.onset_tick == b.onset_tick) out[0].insert({x, y});
      if (a.offset_tick() == b.onset_tick) out[1].insert({x, y});
      if (a.onset_tick < b.onset_tick && b.onset_tick < a.offset_tick()) out[2].insert({x, y});
    }
  }

  Tick end = 0;
  for (const auto& nt : notes) end = std::max(end, nt.offset_tick());
  for (const auto& r : score.rests) end = std::max(end, r.offset_tick());
  auto sounding = [&](Tick t) {
    return std::any_of(notes.begin(), notes.end(), [&](const NoteEvent& e) { return e.onset_tick <= t && t < e.offset_tick(); });
  };
  std::vector<std::pair<Tick, Tick>> spans;
  if (merge_rest_spans) {
    std::vector<char> silent(static_cast<std::size_t>(end), 0);
    for (Tick t = 0; t < end; ++t) {
      const bool resting = std::any_of(score.rests.begin(), score.rests.end(),
                                       [&](const RestEvent& r) { return r.onset_tick <= t && t < r.offset_tick(); });
      silent[static_cast<std::size_t>(t)] = resting && !sounding(t);
    }
    for (Tick t = 0; t < end;) {
      if (!silent[static_cast<std::size_t>(t)]) {
        ++t;
        continue;
      }
      Tick u = t;
      while (u < end && silent[static_cast<std::size_t>(u)]) ++u;
      spans.emplace_back(t, u);
      t = u;
    }
  } else {
    for (const auto& r : score.rests) {
      bool quiet = true;
      for (Tick t = r.onset_tick; t < r.offset_tick(); ++t) quiet = quiet && !sounding(t);
      if (quiet) spans.emplace_back(r.onset_tick, r.offset_tick());
    }
  }
  for (const auto& [a, b] : spans) {
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < n; ++y) {
        if (x != y && notes[x].offset_tick() == a && notes[y].onset_tick == b) out[3].insert({x, y});
      }
    }
  }
  return out;
}

Tensor straight_forward(const ScoreGraph& graph, const Checkpoint& ckpt, const EdgeMask* mask) {
  const std::size_t n = graph.num_nodes();
  std::vector<std::vector<double>> h(n);
  for (std::size_t v = 0; v < n; ++v) h[v].assign(graph.features.row(v).begin(), graph.features.row(v).end());
  const auto& cfg = ckpt.config;
  for (int l = 0; l < cfg.n_layers; ++l) {
    const std::size_t d = h[0].size();
    const Tensor& bias = ckpt.tensor(encoder_bias_name(l));
    const std::size_t out_dim = bias.cols();
    std::vector<std::vector<double>> next(n, std::vector<double>(out_dim, 0.0));
    for (std::size_t v = 0; v < n; ++v) {
      for (std::size_t j = 0; j < out_dim; ++j) next[v][j] = bias(0, j);
      for (int r = 0; r < kNumRelations; ++r) {
        const Tensor& w = ckpt.tensor(encoder_weight_name(l, kRelations[r]));
        std::vector<double> agg(d, 0.0);
        int degree = 0;
        for (std::size_t e = 0; e < graph.edges[r].size(); ++e) {
          const Edge& edge = graph.edges[r][e];
          if (static_cast<std::size_t>(edge.dst) != v) continue;
          ++degree;
          const double m = mask ? (*mask)[r][e] : 1.0;
          for (std::size_t k = 0; k < d; ++k) agg[k] += m * h[static_cast<std::size_t>(edge.src)][k];
        }
        if (degree > 0) {
          for (double& a : agg) a /= degree;
        }
        std::vector<double> concat = h[v];
        concat.insert(concat.end(), agg.begin(), agg.end());
        for (std::size_t j = 0; j < out_dim; ++j) {
          double s = 0.0;
          for (std::size_t k = 0; k < concat.size(); ++k) s += concat[k] * w(k, j);
          next[v][j] += s;
        }
      }
      if (cfg.activation == Activation::Relu) {
        for (double& x : next[v]) x = std::max(x, 0.0);
      }
      if (cfg.norm == NormKind::L2) {
        double sq = 0.0;
        for (double x : next[v]) sq += x * x;
        const double norm = std::max(std::sqrt(sq), kNormEpsilon);
        for (double& x : next[v]) x /= norm;
      }
    }
    h = std::move(next);
  }
  if (cfg.onset_pool == OnsetPoolKind::ResidualMean) {
    auto pooled = h;
    for (std::size_t v = 0; v < n; ++v) {
      std::vector<double> mean(h[v].size(), 0.0);
      int count = 0;
      for (std::size_t u = 0; u < n; ++u) {
        if (graph.onsets[u] != graph.onsets[v]) continue;
        ++count;
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += h[u][k];
      }
      for (std::size_t k = 0; k < mean.size(); ++k) pooled[v][k] = h[v][k] + mean[k] / count;
    }
    h = std::move(pooled);
  }
  const Tensor& w0 = ckpt.tensor("head.0.weight");
  const Tensor& b0 = ckpt.tensor("head.0.bias");
  const Tensor& w1 = ckpt.tensor("head.1.weight");
  const Tensor& b1 = ckpt.tensor("head.1.bias");
  Tensor logits(n, w1.cols());
  for (std::size_t v = 0; v < n; ++v) {
    std::vector<double> hidden(w0.cols());
    for (std::size_t j = 0; j < w0.cols(); ++j) {
      double s = b0(0, j);
      for (std::size_t k = 0; k < w0.rows(); ++k) s += h[v][k] * w0(k, j);
      hidden[j] = cfg.activation == Activation::Relu ? std::max(s, 0.0) : s;
    }
    for (std::size_t c = 0; c < w1.cols(); ++c) {
      double s = b1(0, c);
      for (std::size_t j = 0; j < w1.rows(); ++j) s += hidden[j] * w1(j, c);
      logits(v, c) = s;
    }
  }
  return logits;
}

std::array<std::vector<std::size_t>, kNumRelations> sort_topk(const EdgeMask& importance, const EdgeSet& edges, int k) {
  std::array<std::vector<std::size_t>, kNumRelations> out;
  for (int r = 0; r < kNumRelations; ++r) {
    std::vector<std::tuple<double, int, int, std::size_t>> rows;
    for (std::size_t i = 0; i < edges[r].size(); ++i) {
      rows.emplace_back(-importance[r][i], edges[r][i].src, edges[r][i].dst, i);
    }
    std::sort(rows.begin(), rows.end());
    for (std::size_t i = 0; i < rows.size() && i < static_cast<std::size_t>(k); ++i) out[r].push_back(std::get<3>(rows[i]));
  }
  return out;
}

ManualFidelity manual_fidelity(const ScoreGraph& graph, const Checkpoint& ckpt,
                               const std::vector<Explanation>& explanations) {
  ManualFidelity mf;
  const auto full = predict(graph, ckpt);
  for (const auto& ex : explanations) {
    std::size_t target = 0;
    while (graph.node_ids[target] != ex.target_note_id) ++target;

    ScoreGraph removed = graph;
    ScoreGraph kept = graph;
    for (int r = 0; r < kNumRelations; ++r) {
      removed.edges[r].clear();
      kept.edges[r].clear();
      for (const Edge& e : graph.edges[r]) {
        const bool selected = std::find(ex.selected_edges[r].begin(), ex.selected_edges[r].end(), e) !=
                              ex.selected_edges[r].end();
        (selected ? kept : removed).edges[r].push_back(e);
      }
    }
    for (std::size_t v = 0; v < graph.num_nodes(); ++v) {
      bool in_expl = v == target;
      for (int r = 0; r < kNumRelations; ++r) {
        for (const Edge& e : ex.selected_edges[r]) {
          if (static_cast<std::size_t>(e.src) == v || static_cast<std::size_t>(e.dst) == v) in_expl = true;
        }
      }
      if (!in_expl) {
        for (std::size_t j = 0; j < kept.features.cols(); ++j) kept.features(v, j) = 0.0;
      }
    }
    const auto original = full.classes[target];
    const double plus = predict(removed, ckpt).classes[target] != original ? 1.0 : 0.0;
    const double minus = predict(kept, ckpt).classes[target] != original ? 1.0 : 0.0;
    mf.fid_plus.push_back(plus);
    mf.fid_minus.push_back(minus);
    mf.mean_plus += plus;
    mf.mean_minus += minus;
  }
  if (!explanations.empty()) {
    mf.mean_plus /= static_cast<double>(explanations.size());
    mf.mean_minus /= static_cast<double>(explanations.size());
  }
  return mf;
}

}  // namespace oracle
