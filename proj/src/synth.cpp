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

#include "scoregraph/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>

#include "scoregraph/error.hpp"

namespace scoregraph {

namespace {

constexpr Tick kTpq = 4;
constexpr Tick kQuarter = kTpq;
constexpr Tick kMeasure = 4 * kTpq;
constexpr const char* kLetters = "CDEFGAB";

struct Key {
  int fifths;
  int tonic_letter;  // index into kLetters
};

constexpr std::array<Key, 9> kKeys = {{
    {0, 0}, {1, 4}, {2, 1}, {3, 5}, {4, 2}, {-1, 3}, {-2, 6}, {-3, 2}, {-4, 5},
}};

int letter_alter(int fifths, int letter) {
  constexpr std::array<int, 7> sharps = {3, 0, 4, 1, 5, 2, 6};
  constexpr std::array<int, 7> flats = {6, 2, 5, 1, 4, 0, 3};
  if (fifths > 0) {
    for (int i = 0; i < fifths; ++i) {
      if (sharps[static_cast<std::size_t>(i)] == letter) return 1;
    }
  } else if (fifths < 0) {
    for (int i = 0; i < -fifths; ++i) {
      if (flats[static_cast<std::size_t>(i)] == letter) return -1;
    }
  }
  return 0;
}

/// Pitch of absolute scale step `a` = 7 * key_octave + degree.
Pitch key_pitch(const Key& key, int a) {
  const int k = a / 7;
  const int s = a % 7;
  const int l = key.tonic_letter + s;
  Pitch p;
  p.step = kLetters[l % 7];
  p.alter = letter_alter(key.fifths, l % 7);
  p.octave = k + l / 7;
  return p;
}

struct Chord {
  int root = 0;
  bool seventh = false;
  int inversion = 0;

  std::vector<int> tones() const {
    std::vector<int> t = {root, (root + 2) % 7, (root + 4) % 7};
    if (seventh) t.push_back((root + 6) % 7);
    return t;
  }
  int bass_degree() const { return tones()[static_cast<std::size_t>(inversion)]; }
  bool operator==(const Chord&) const = default;
};

const Chord kI{0, false, 0};
const Chord kI6{0, false, 1};
const Chord kII{1, false, 0};
const Chord kIII{2, false, 0};
const Chord kIV{3, false, 0};
const Chord kV{4, false, 0};
const Chord kV7{4, true, 0};
const Chord kV6{4, false, 1};
const Chord kVI{5, false, 0};

std::vector<Chord> successors(const Chord& c) {
  if (c == kI) return {kIV, kII, kVI, kV, kI6, kIII};
  if (c == kI6) return {kIV, kII, kV};
  if (c == kII) return {kV, kV7, kI6};
  if (c == kIII) return {kVI, kIV};
  if (c == kIV) return {kI, kV, kII, kV7};
  if (c == kV || c == kV7 || c == kV6) return {kI, kVI};
  return {kII, kIV, kV};  // vi
}

template <typename T>
const T& pick(Rng& rng, const std::vector<T>& options) {
  return options[rng.below(options.size())];
}

struct Voicing {
  std::array<int, 4> steps{};  // bass, tenor, alto, soprano as absolute scale steps
};

struct Range {
  int lo;
  int hi;
};
constexpr std::array<Range, 4> kRanges = {{{40, 60}, {48, 67}, {55, 74}, {60, 79}}};

std::vector<int> candidates(const Key& key, const std::vector<int>& degrees, Range range) {
  std::vector<int> out;
  for (int a = 7; a < 70; ++a) {
    if (std::find(degrees.begin(), degrees.end(), a % 7) == degrees.end()) continue;
    const int m = key_pitch(key, a).midi();
    if (m >= range.lo && m <= range.hi) out.push_back(a);
  }
  return out;
}

struct Requirement {
  std::optional<int> soprano_degree;
  /// Allowed bass intervals in semitones from the previous bass.
  std::vector<int> bass_motion;
};

Voicing voice_chord(const Key& key, const Chord& chord, const Voicing& prev, const Requirement& req, Rng& rng) {
  auto midi = [&](int a) { return key_pitch(key, a).midi(); };
  Voicing v;

  std::vector<int> bass_options = candidates(key, {chord.bass_degree()}, kRanges[0]);
  const int prev_bass = midi(prev.steps[0]);
  if (!req.bass_motion.empty()) {
    std::vector<int> allowed;
    for (int a : bass_options) {
      if (std::find(req.bass_motion.begin(), req.bass_motion.end(), midi(a) - prev_bass) != req.bass_motion.end()) {
        allowed.push_back(a);
      }
    }
    if (!allowed.empty()) bass_options = allowed;
  }
  if (!req.bass_motion.empty() && bass_options.size() > 1) {
    v.steps[0] = pick(rng, bass_options);
  } else {
    v.steps[0] = *std::min_element(bass_options.begin(), bass_options.end(), [&](int a, int b) {
      return std::abs(midi(a) - prev_bass) < std::abs(midi(b) - prev_bass);
    });
  }
  const int bass_midi = midi(v.steps[0]);

  const auto tones = chord.tones();
  std::vector<int> sop_degrees = tones;
  if (req.soprano_degree) sop_degrees = {*req.soprano_degree};
  const auto tenors = candidates(key, tones, kRanges[1]);
  const auto altos = candidates(key, tones, kRanges[2]);
  const auto sopranos = candidates(key, sop_degrees, kRanges[3]);

  std::vector<int> required = {tones[0], tones[1]};
  if (chord.seventh) required.push_back(tones[3]);

  for (int relax = 0; relax < 2; ++relax) {
    long best_cost = -1;
    std::array<int, 3> best{};
    for (int s : sopranos) {
      for (int a : altos) {
        for (int t : tenors) {
          const int ms = midi(s), ma = midi(a), mt = midi(t);
          if (!(ms > ma && ma > mt && mt > bass_midi)) continue;
          if (relax == 0 && (ms - ma > 12 || ma - mt > 12)) continue;
          bool covered = true;
          for (int d : required) {
            if (v.steps[0] % 7 != d && s % 7 != d && a % 7 != d && t % 7 != d) covered = false;
          }
          if (!covered) continue;
          const long cost = std::abs(mt - midi(prev.steps[1])) + std::abs(ma - midi(prev.steps[2])) +
                            std::abs(ms - midi(prev.steps[3]));
          if (best_cost < 0 || cost < best_cost) {
            best_cost = cost;
            best = {t, a, s};
          }
        }
      }
    }
    if (best_cost >= 0) {
      v.steps[1] = best[0];
      v.steps[2] = best[1];
      v.steps[3] = best[2];
      return v;
    }
  }
  fail(ErrorKind::Validation, "synth: no voicing found");
}

struct PhrasePlan {
  CadenceClass cadence;
  std::string variant;
  std::vector<Chord> chords;
  Requirement arrival_req;
};

PhrasePlan plan_phrase(int length, CadenceClass cadence, Rng& rng) {
  PhrasePlan plan{cadence, "", {}, {}};
  Chord penultimate;
  Chord arrival;
  switch (cadence) {
    case CadenceClass::PAC:
      plan.variant = "V7-I";
      penultimate = kV7;
      arrival = kI;
      plan.arrival_req.soprano_degree = 0;
      plan.arrival_req.bass_motion = {-7, 5};
      break;
    case CadenceClass::IAC:
      if (rng.chance(0.6)) {
        plan.variant = "V7-I";
        penultimate = kV7;
        plan.arrival_req.soprano_degree = rng.chance(0.5) ? 2 : 4;
      } else {
        plan.variant = "V6-I";
        penultimate = kV6;
      }
      arrival = kI;
      break;
    case CadenceClass::HC:
      penultimate = pick(rng, std::vector<Chord>{kI, kIV, kII, kVI, kI6});
      arrival = kV;
      plan.variant = "x-V";
      break;
    case CadenceClass::NoCad: {
      const int which = static_cast<int>(rng.below(3));
      if (which == 0) {
        arrival = kVI;
        penultimate = pick(rng, std::vector<Chord>{kV7, kV, kIV});
        plan.variant = "x-vi";
      } else if (which == 1) {
        arrival = kI6;
        penultimate = pick(rng, std::vector<Chord>{kIV, kII, kV});
        plan.variant = "x-I6";
      } else {
        arrival = kII;
        penultimate = pick(rng, std::vector<Chord>{kI, kVI, kIV});
        plan.variant = "x-ii";
      }
      break;
    }
  }
  plan.chords.push_back(kI);
  while (static_cast<int>(plan.chords.size()) < length - 2) {
    plan.chords.push_back(pick(rng, successors(plan.chords.back())));
  }
  plan.chords.push_back(penultimate);
  plan.chords.push_back(arrival);
  return plan;
}

CadenceClass draw_class(const SynthMixture& mixture, Rng& rng) {
  double total = 0.0;
  for (double w : mixture.weights) total += w;
  double u = rng.uniform() * total;
  for (int c = 0; c < kNumClasses; ++c) {
    u -= mixture.weights[static_cast<std::size_t>(c)];
    if (u < 0.0) return static_cast<CadenceClass>(c);
  }
  return CadenceClass::NoCad;
}

struct PendingNote {
  NoteEvent note;
  CadenceClass label;
};

constexpr std::array<int, 4> kVoiceNumber = {4, 3, 2, 1};  // bass, tenor, alto, soprano
constexpr std::array<int, 4> kStaffNumber = {2, 2, 1, 1};

SynthPiece make_piece(const std::string& name, const SynthMixture& mixture, Rng& rng) {
  SynthPiece piece;
  piece.name = name;
  Score& score = piece.score;
  score.title = name;
  score.ticks_per_quarter = kTpq;
  score.parts.push_back({"P1", "Chorale", 2});
  const Key key = kKeys[rng.below(kKeys.size())];
  score.time_signatures.push_back({0, 4, 4});
  score.key_signatures.push_back({0, key.fifths});

  std::vector<PendingNote> pending;
  auto add_note = [&](int voice_index, int step, Tick onset, Tick duration, CadenceClass label) {
    NoteEvent n;
    n.id = "t" + std::to_string(pending.size());
    n.onset_tick = onset;
    n.duration_tick = duration;
    n.pitch = key_pitch(key, step);
    n.voice = kVoiceNumber[static_cast<std::size_t>(voice_index)];
    n.staff = kStaffNumber[static_cast<std::size_t>(voice_index)];
    n.part_id = "P1";
    pending.push_back({n, label});
  };
  auto add_rests = [&](Tick begin, Tick end) {
    if (end <= begin) return;
    for (int v = 0; v < 4; ++v) {
      RestEvent r;
      r.onset_tick = begin;
      r.duration_tick = end - begin;
      r.voice = kVoiceNumber[static_cast<std::size_t>(v)];
      r.staff = kStaffNumber[static_cast<std::size_t>(v)];
      r.part_id = "P1";
      score.rests.push_back(r);
    }
  };

  const int n_phrases = rng.range(mixture.min_phrases, mixture.max_phrases);
  Tick measure_start = 0;
  Voicing prev;
  prev.steps = {21, 25, 30, 35};
  for (int p = 0; p < n_phrases; ++p) {
    const int length = rng.range(mixture.min_onsets, mixture.max_onsets);
    const CadenceClass cadence = draw_class(mixture, rng);
    PhrasePlan plan = plan_phrase(length, cadence, rng);

    const Tick span = kQuarter * (length - 1);
    const Tick pickup = (kMeasure - span % kMeasure) % kMeasure;
    add_rests(measure_start, measure_start + pickup);
    const Tick start = measure_start + pickup;

    std::vector<Voicing> voicings;
    for (int i = 0; i < length; ++i) {
      Requirement req;
      if (i == length - 1) req = plan.arrival_req;
      if (i == 0) req.soprano_degree = pick(rng, std::vector<int>{0, 2, 4});
      voicings.push_back(voice_chord(key, plan.chords[static_cast<std::size_t>(i)],
                                     i == 0 ? prev : voicings.back(), req, rng));
    }

    for (int i = 0; i < length; ++i) {
      const Tick onset = start + kQuarter * i;
      const bool arrival = i == length - 1;
      const Voicing& v = voicings[static_cast<std::size_t>(i)];
      if (arrival) {
        for (int voice = 0; voice < 4; ++voice) add_note(voice, v.steps[static_cast<std::size_t>(voice)], onset, 2 * kQuarter, cadence);
        continue;
      }
      int passing_voice = -1;
      if (i + 1 <= length - 2 && rng.chance(mixture.passing_tone_rate)) {
        const int candidate = rng.range(1, 3);
        const int here = v.steps[static_cast<std::size_t>(candidate)];
        const int next = voicings[static_cast<std::size_t>(i + 1)].steps[static_cast<std::size_t>(candidate)];
        if (std::abs(next - here) == 2) passing_voice = candidate;
      }
      for (int voice = 0; voice < 4; ++voice) {
        const int step = v.steps[static_cast<std::size_t>(voice)];
        if (voice == passing_voice) {
          const int next = voicings[static_cast<std::size_t>(i + 1)].steps[static_cast<std::size_t>(voice)];
          add_note(voice, step, onset, kQuarter / 2, CadenceClass::NoCad);
          add_note(voice, (step + next) / 2, onset + kQuarter / 2, kQuarter / 2, CadenceClass::NoCad);
        } else {
          add_note(voice, step, onset, kQuarter, CadenceClass::NoCad);
        }
      }
    }
    const Tick arrival_tick = start + span;
    add_rests(arrival_tick + 2 * kQuarter, arrival_tick + kMeasure);
    piece.phrases.push_back({cadence, arrival_tick - kQuarter, arrival_tick, plan.variant});
    measure_start = arrival_tick + kMeasure;
    prev = voicings.back();
  }

  std::map<std::string, CadenceClass> temp_labels;
  for (auto& pn : pending) {
    temp_labels[pn.note.id] = pn.label;
    score.notes.push_back(std::move(pn.note));
  }
  score.normalize();
  for (std::size_t i = 0; i < score.notes.size(); ++i) {
    auto& n = score.notes[i];
    const CadenceClass label = temp_labels.at(n.id);
    n.id = "n" + std::to_string(i);
    if (label != CadenceClass::NoCad) piece.annotations.labels[n.id] = label;
  }
  return piece;
}

Pitch spell_midi(int midi, bool flats) {
  static constexpr std::array<std::pair<char, int>, 12> sharp_names = {
      {{'C', 0}, {'C', 1}, {'D', 0}, {'D', 1}, {'E', 0}, {'F', 0}, {'F', 1}, {'G', 0}, {'G', 1}, {'A', 0}, {'A', 1}, {'B', 0}}};
  static constexpr std::array<std::pair<char, int>, 12> flat_names = {
      {{'C', 0}, {'D', -1}, {'D', 0}, {'E', -1}, {'E', 0}, {'F', 0}, {'G', -1}, {'G', 0}, {'A', -1}, {'A', 0}, {'B', -1}, {'B', 0}}};
  const auto& names = flats ? flat_names : sharp_names;
  const auto [step, alter] = names[static_cast<std::size_t>(midi % 12)];
  return Pitch{step, alter, midi / 12 - 1};
}

}  // namespace

SynthCorpus synth_corpus(std::uint64_t seed, int n_pieces, const SynthMixture& mixture) {
  if (n_pieces < 1) fail(ErrorKind::Validation, "synth_corpus needs n_pieces >= 1");
  if (mixture.min_onsets < 3 || mixture.max_onsets < mixture.min_onsets) {
    fail(ErrorKind::Validation, "synth_corpus: invalid phrase length range");
  }
  if (mixture.min_phrases < 1 || mixture.max_phrases < mixture.min_phrases) {
    fail(ErrorKind::Validation, "synth_corpus: invalid phrase count range");
  }
  Rng rng(seed);
  SynthCorpus corpus;
  for (int i = 0; i < n_pieces; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "synth-%llu-%03d", static_cast<unsigned long long>(seed), i);
    Rng piece_rng = rng.fork();
    corpus.pieces.push_back(make_piece(name, mixture, piece_rng));
    const auto& piece = corpus.pieces.back();
    for (const auto& ph : piece.phrases) corpus.phrase_counts[static_cast<std::size_t>(ph.cadence)]++;
    const auto counts = piece.annotations.counts(piece.score);
    for (int c = 0; c < kNumClasses; ++c) corpus.note_counts[static_cast<std::size_t>(c)] += counts[static_cast<std::size_t>(c)];
  }
  return corpus;
}

Score random_score(Rng& rng, const RandomScoreOptions& options) {
  static constexpr std::array<std::pair<int, int>, 4> meters = {{{4, 4}, {3, 4}, {2, 4}, {6, 8}}};
  static constexpr std::array<Tick, 7> durations = {1, 2, 3, 4, 6, 8, 12};

  Score score;
  score.title = "random";
  score.ticks_per_quarter = kTpq;
  const auto [num, den] = meters[rng.below(meters.size())];
  score.time_signatures.push_back({0, num, den});
  score.key_signatures.push_back({0, rng.range(-3, 3)});
  const Tick measure = num * 4 * kTpq / den;

  const int n_parts = rng.range(1, std::max(1, options.max_parts));
  std::vector<std::pair<int, int>> lanes;  // (part index, voice)
  for (int p = 0; p < n_parts; ++p) {
    const int voices = rng.range(1, std::max(1, options.max_voices_per_part));
    score.parts.push_back({"P" + std::to_string(p + 1), "Part " + std::to_string(p + 1), voices});
    for (int v = 1; v <= voices; ++v) lanes.emplace_back(p, v);
  }
  const int max_notes = std::max(1, options.max_notes);
  const int target = rng.range(1, max_notes);
  const bool flats = rng.chance(0.5);

  int total = 0;
  std::vector<Tick> cursor(lanes.size(), 0);
  std::vector<NoteEvent> notes;
  for (int guard = 0; total < target && guard < 10 * max_notes; ++guard) {
    const std::size_t lane = rng.below(lanes.size());
    const auto [part, voice] = lanes[lane];
    Tick duration = durations[rng.below(durations.size())];
    const Tick t = cursor[lane];
    if (!options.allow_barline_crossing) duration = std::min(duration, measure - t % measure);
    cursor[lane] = t + duration;
    if (rng.chance(options.rest_rate)) {
      score.rests.push_back({t, duration, voice, voice, score.parts[static_cast<std::size_t>(part)].id});
      continue;
    }
    const int chord_size = rng.chance(options.chord_rate) ? rng.range(2, 3) : 1;
    std::vector<int> pitches;
    while (static_cast<int>(pitches.size()) < chord_size && total + static_cast<int>(pitches.size()) < target) {
      const int m = rng.range(36, 84);
      if (std::find(pitches.begin(), pitches.end(), m) == pitches.end()) pitches.push_back(m);
    }
    for (int m : pitches) {
      NoteEvent n;
      n.id = "t" + std::to_string(notes.size());
      n.onset_tick = t;
      n.duration_tick = duration;
      n.pitch = spell_midi(m, flats);
      n.voice = voice;
      n.staff = voice;
      n.part_id = score.parts[static_cast<std::size_t>(part)].id;
      notes.push_back(n);
      ++total;
    }
  }
  if (notes.empty()) {
    NoteEvent n;
    n.id = "t0";
    n.onset_tick = cursor[0];
    n.duration_tick = kQuarter;
    n.pitch = spell_midi(60, flats);
    n.part_id = score.parts[0].id;
    notes.push_back(n);
  }
  score.notes = std::move(notes);
  score.normalize();
  for (std::size_t i = 0; i < score.notes.size(); ++i) score.notes[i].id = "n" + std::to_string(i);
  return score;
}

}  // namespace scoregraph
