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

#include <string>
#include <vector>

#include "scoregraph/graph.hpp"
#include "scoregraph/model.hpp"
#include "scoregraph/rng.hpp"
#include "scoregraph/score.hpp"
#include "scoregraph/synth.hpp"

namespace testing {

inline std::string source_path(const std::string& rel) { return std::string(SCOREGRAPH_SOURCE_DIR) + "/" + rel; }

inline const std::vector<std::string>& bundled_pieces() {
  static const std::vector<std::string> paths = {
      source_path("data/pieces/mozart_k280_2.musicxml"),
      source_path("data/pieces/bach_wtc1_fugue5.musicxml"),
      source_path("data/pieces/chopin_op48_1.musicxml"),
  };
  return paths;
}

inline const std::string& toy_checkpoint_path() {
  static const std::string path = source_path("data/checkpoints/toy.json");
  return path;
}

inline scoregraph::NoteEvent note(std::string id, scoregraph::Tick onset, scoregraph::Tick dur, char step = 'C',
                                  int octave = 4, int alter = 0, int voice = 1, int staff = 1) {
  scoregraph::NoteEvent n;
  n.id = std::move(id);
  n.onset_tick = onset;
  n.duration_tick = dur;
  n.pitch = {step, alter, octave};
  n.voice = voice;
  n.staff = staff;
  n.part_id = "P1";
  return n;
}

inline scoregraph::RestEvent rest(scoregraph::Tick onset, scoregraph::Tick dur, int voice = 1) {
  scoregraph::RestEvent r;
  r.onset_tick = onset;
  r.duration_tick = dur;
  r.voice = voice;
  r.part_id = "P1";
  return r;
}

/// A one-part score with the given events, normalized.
inline scoregraph::Score make_score(std::vector<scoregraph::NoteEvent> notes,
                                    std::vector<scoregraph::RestEvent> rests = {}, scoregraph::Tick tpq = 4) {
  scoregraph::Score s;
  s.parts.push_back({"P1", "Piano", 1});
  s.notes = std::move(notes);
  s.rests = std::move(rests);
  s.ticks_per_quarter = tpq;
  s.normalize();
  return s;
}

/// Random small graph with features drawn uniformly from [0, 1).
inline scoregraph::ScoreGraph random_graph(scoregraph::Rng& rng, int max_notes = 8) {
  scoregraph::RandomScoreOptions opts;
  opts.max_notes = max_notes;
  auto score = scoregraph::random_score(rng, opts);
  auto graph = scoregraph::build_graph(score);
  for (double& x : graph.features.data()) x = rng.uniform();
  return graph;
}

/// Glorot weights plus small random biases, so no bias is exactly zero.
inline scoregraph::Checkpoint random_checkpoint(const scoregraph::ModelConfig& cfg, std::size_t input_dim,
                                                scoregraph::Rng& rng) {
  auto ckpt = scoregraph::Checkpoint::initialize(cfg, input_dim, rng);
  for (auto& [name, t] : ckpt.tensors) {
    if (name.find("bias") == std::string::npos) continue;
    for (double& x : t.data()) x = rng.uniform(-0.1, 0.1);
  }
  return ckpt;
}

inline scoregraph::ModelConfig small_config(int hidden = 8) {
  scoregraph::ModelConfig cfg;
  cfg.hidden_dim = hidden;
  return cfg;
}

}  // namespace testing
