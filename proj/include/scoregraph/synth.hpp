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
#include <string>
#include <vector>

#include "scoregraph/rng.hpp"
#include "scoregraph/score.hpp"

namespace scoregraph {

/// A phrase ending written by the generator. `arrival_tick` is the onset of
/// the final chord and `penultimate_tick` the onset of the chord before it.
struct PlantedPhrase {
  CadenceClass cadence = CadenceClass::NoCad;
  Tick penultimate_tick = 0;
  Tick arrival_tick = 0;
  std::string variant;
};

struct SynthPiece {
  std::string name;
  Score score;
  CadenceAnnotations annotations;
  std::vector<PlantedPhrase> phrases;
};

struct SynthMixture {
  /// Probability of each phrase ending, indexed by CadenceClass.
  std::array<double, kNumClasses> weights{0.2, 0.3, 0.25, 0.25};
  int min_onsets = 8;
  int max_onsets = 16;
  int min_phrases = 2;
  int max_phrases = 3;
  double passing_tone_rate = 0.15;
};

struct SynthCorpus {
  std::vector<SynthPiece> pieces;
  /// Planted phrase endings per class (no-cad counts phrases without a cadence).
  std::array<int, kNumClasses> phrase_counts{};
  /// Labeled notes per class; no-cad counts every unlabeled note.
  std::array<int, kNumClasses> note_counts{};
};

/// Four-voice chorale-style phrases in random major keys (4/4, four ticks per
/// quarter). Every phrase ends with a half-note arrival chord on a downbeat
/// followed by rests. The four arrival notes carry the planted label:
///   PAC  V7 -> I, both in root position, soprano on the tonic
///   IAC  V7 -> I with soprano on the third or fifth, or V6 -> I
///   HC   a chord other than V7 -> root-position V
///   none the phrase stops on vi, I6 or ii
/// Deterministic for a given seed.
SynthCorpus synth_corpus(std::uint64_t seed, int n_pieces, const SynthMixture& mixture = {});

struct RandomScoreOptions {
  int max_notes = 40;
  int max_parts = 2;
  int max_voices_per_part = 2;
  double rest_rate = 0.25;
  double chord_rate = 0.2;
  /// Allow events to cross barlines.
  bool allow_barline_crossing = true;
};

/// Unstructured random score: independent voices of notes, chords and rests
/// with assorted durations and meters. Used by property tests.
Score random_score(Rng& rng, const RandomScoreOptions& options = {});

}  // namespace scoregraph
