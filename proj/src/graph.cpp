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

#include "scoregraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <nlohmann/json.hpp>
#include <set>

#include "scoregraph/error.hpp"
#include "scoregraph/features.hpp"

namespace scoregraph {

namespace {
constexpr std::array<const char*, kNumRelations> kRelationNames = {"onset", "consecutive", "during",
                                                                   "rest"};

struct Interval {
  Tick begin;
  Tick end;
};

/// Maximal intervals covered by some rest and by no sounding note.
std::vector<Interval> silent_spans(const Score& score, bool merge) {
  std::vector<Interval> spans;
  if (!merge) {
    for (const auto& r : score.rests) {
      const bool silent = std::none_of(score.notes.begin(), score.notes.end(), [&](const NoteEvent& n) {
        return n.onset_tick < r.offset_tick() && n.offset_tick() > r.onset_tick;
      });
      if (silent) spans.push_back({r.onset_tick, r.offset_tick()});
    }
    return spans;
  }
  // Sweep over boundary points with +1/-1 counters for rests and notes.
  std::map<Tick, std::pair<int, int>> deltas;  // tick -> (rest delta, note delta)
  for (const auto& r : score.rests) {
    deltas[r.onset_tick].first += 1;
    deltas[r.offset_tick()].first -= 1;
  }
  for (const auto& n : score.notes) {
    deltas[n.onset_tick].second += 1;
    deltas[n.offset_tick()].second -= 1;
  }
  int rests = 0;
  int notes = 0;
  std::optional<Tick> open;
  for (const auto& [tick, d] : deltas) {
    rests += d.first;
    notes += d.second;
    const bool silent = rests > 0 && notes == 0;
    if (silent && !open) open = tick;
    if (!silent && open) {
      spans.push_back({*open, tick});
      open.reset();
    }
  }
  return spans;
}

}  // namespace

const char* to_string(RelationType r) { return kRelationNames[static_cast<int>(r)]; }

std::optional<RelationType> parse_relation(std::string_view name) {
  for (int i = 0; i < kNumRelations; ++i) {
    if (name == kRelationNames[i]) return static_cast<RelationType>(i);
  }
  return std::nullopt;
}

std::optional<std::size_t> ScoreGraph::node_index(std::string_view id) const {
  for (std::size_t i = 0; i < node_ids.size(); ++i) {
    if (node_ids[i] == id) return i;
  }
  return std::nullopt;
}

std::size_t ScoreGraph::num_edges() const {
  std::size_t total = 0;
  for (const auto& e : edges) total += e.size();
  return total;
}

void ScoreGraph::validate() const {
  const auto n = static_cast<int>(node_ids.size());
  if (features.rows() != node_ids.size() || onsets.size() != node_ids.size()) {
    fail(ErrorKind::Validation, "graph row counts disagree with node count");
  }
  if (feature_names.size() != features.cols()) {
    fail(ErrorKind::Validation, "feature_names length disagrees with feature columns");
  }
  if (!features.all_finite()) fail(ErrorKind::Validation, "non-finite feature value");
  for (int r = 0; r < kNumRelations; ++r) {
    std::set<Edge> seen;
    for (const auto& e : edges[r]) {
      if (e.src < 0 || e.dst < 0 || e.src >= n || e.dst >= n) {
        fail(ErrorKind::Validation, std::string("edge index out of range in ") + kRelationNames[r]);
      }
      if (e.src == e.dst) fail(ErrorKind::Validation, std::string("self-loop in ") + kRelationNames[r]);
      if (!seen.insert(e).second) {
        fail(ErrorKind::Validation, std::string("duplicate edge in ") + kRelationNames[r]);
      }
    }
    if (r == static_cast<int>(RelationType::Onset)) {
      for (const auto& e : edges[r]) {
        if (!seen.count({e.dst, e.src})) fail(ErrorKind::Validation, "onset relation not symmetric");
      }
    }
  }
}

EdgeSet compute_edges(const Score& score, const GraphOptions& options) {
  EdgeSet edges;
  const auto& notes = score.notes;
  const int n = static_cast<int>(notes.size());

  std::multimap<Tick, int> by_onset;
  for (int i = 0; i < n; ++i) by_onset.emplace(notes[i].onset_tick, i);

  auto& onset = edges[static_cast<int>(RelationType::Onset)];
  auto& consecutive = edges[static_cast<int>(RelationType::Consecutive)];
  auto& during = edges[static_cast<int>(RelationType::During)];
  auto& rest = edges[static_cast<int>(RelationType::Rest)];

  for (int x = 0; x < n; ++x) {
    const Tick on = notes[x].onset_tick;
    const Tick off = notes[x].offset_tick();
    auto [lo, hi] = by_onset.equal_range(on);
    for (auto it = lo; it != hi; ++it) {
      if (it->second != x) onset.push_back({x, it->second});
    }
    auto [clo, chi] = by_onset.equal_range(off);
    for (auto it = clo; it != chi; ++it) consecutive.push_back({x, it->second});
    for (auto it = by_onset.upper_bound(on); it != by_onset.end() && it->first < off; ++it) {
      during.push_back({x, it->second});
    }
  }

  std::multimap<Tick, int> by_offset;
  for (int i = 0; i < n; ++i) by_offset.emplace(notes[i].offset_tick(), i);
  for (const auto& span : silent_spans(score, options.merge_rest_spans)) {
    auto [xlo, xhi] = by_offset.equal_range(span.begin);
    auto [ylo, yhi] = by_onset.equal_range(span.end);
    for (auto xi = xlo; xi != xhi; ++xi) {
      for (auto yi = ylo; yi != yhi; ++yi) rest.push_back({xi->second, yi->second});
    }
  }

  for (auto& list : edges) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return edges;
}

ScoreGraph build_graph(const Score& score, const FeatureSpec& spec, const GraphOptions& options) {
  if (score.notes.empty()) fail(ErrorKind::Validation, "cannot build a graph from a score without notes");
  ScoreGraph g;
  g.node_ids.reserve(score.notes.size());
  for (const auto& note : score.notes) {
    g.node_ids.push_back(note.id);
    g.onsets.push_back(note.onset_tick);
  }
  g.edges = compute_edges(score, options);
  auto fm = extract_features(score, spec);
  g.features = std::move(fm.values);
  g.feature_names = std::move(fm.names);
  g.feature_spec = spec.name;
  return g;
}

ScoreGraph with_edges(const ScoreGraph& graph, EdgeSet edges) {
  ScoreGraph g = graph;
  g.edges = std::move(edges);
  return g;
}

std::string graph_to_json(const ScoreGraph& graph) {
  nlohmann::ordered_json j;
  j["feature_spec"] = graph.feature_spec;
  j["node_ids"] = graph.node_ids;
  j["onsets"] = graph.onsets;
  nlohmann::ordered_json edges = nlohmann::ordered_json::object();
  for (int r = 0; r < kNumRelations; ++r) {
    auto list = nlohmann::ordered_json::array();
    for (const auto& e : graph.edges[r]) list.push_back({e.src, e.dst});
    edges[kRelationNames[r]] = std::move(list);
  }
  j["edges"] = std::move(edges);
  j["feature_names"] = graph.feature_names;
  j["features"] = graph.features.data();
  return j.dump() + "\n";
}

ScoreGraph graph_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    ScoreGraph g;
    g.feature_spec = j.at("feature_spec").get<std::string>();
    g.node_ids = j.at("node_ids").get<std::vector<std::string>>();
    g.onsets = j.at("onsets").get<std::vector<Tick>>();
    for (int r = 0; r < kNumRelations; ++r) {
      for (const auto& pair : j.at("edges").at(kRelationNames[r])) {
        g.edges[r].push_back({pair.at(0).get<int>(), pair.at(1).get<int>()});
      }
    }
    g.feature_names = j.at("feature_names").get<std::vector<std::string>>();
    g.features = Tensor(g.node_ids.size(), g.feature_names.size(),
                        j.at("features").get<std::vector<double>>());
    g.validate();
    return g;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("graph JSON: ") + e.what());
  }
}

}  // namespace scoregraph
