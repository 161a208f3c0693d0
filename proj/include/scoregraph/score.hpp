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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scoregraph {

using Tick = std::int64_t;

/// Spelled pitch. Letter step plus chromatic alteration and octave.
struct Pitch {
  char step = 'C';  // 'A'..'G'
  int alter = 0;    // [-2, 2]
  int octave = 4;   // [0, 9]

  int midi() const;
  bool valid() const;

  static int step_semitone(char step);

  friend bool operator==(const Pitch&, const Pitch&) = default;
};

struct NoteEvent {
  std::string id;
  Tick onset_tick = 0;
  Tick duration_tick = 1;
  Pitch pitch;
  int voice = 1;
  int staff = 1;
  std::string part_id;
  bool tie_prev = false;
  bool tie_next = false;

  Tick offset_tick() const { return onset_tick + duration_tick; }
};

struct RestEvent {
  Tick onset_tick = 0;
  Tick duration_tick = 1;
  int voice = 1;
  int staff = 1;
  std::string part_id;

  Tick offset_tick() const { return onset_tick + duration_tick; }
};

struct PartInfo {
  std::string id;
  std::string name;
  int staves = 1;
};

struct TimeSignature {
  Tick onset_tick = 0;
  int numerator = 4;
  int denominator = 4;

  friend bool operator==(const TimeSignature&, const TimeSignature&) = default;
};

struct KeySignature {
  Tick onset_tick = 0;
  int fifths = 0;

  friend bool operator==(const KeySignature&, const KeySignature&) = default;
};

struct Score {
  std::string title;
  std::vector<PartInfo> parts;
  std::vector<NoteEvent> notes;
  std::vector<RestEvent> rests;
  Tick ticks_per_quarter = 1;
  std::vector<TimeSignature> time_signatures;
  std::vector<KeySignature> key_signatures;
  /// Non-fatal issues found while reading (skipped grace notes, etc.).
  std::vector<std::string> warnings;

  /// Sorts notes and rests, inserts the default meter and checks invariants.
  /// Throws Error(Validation) on duplicate ids or malformed events.
  void normalize();

  const TimeSignature& time_signature_at(Tick tick) const;
  int key_fifths_at(Tick tick) const;
  /// Position of `tick` relative to the start of its measure, with the
  /// measure's start tick and length.
  struct MeasurePosition {
    int measure_index = 0;
    Tick measure_start = 0;
    Tick measure_length = 0;
  };
  MeasurePosition measure_at(Tick tick) const;
  /// Start ticks of all measures covering [0, end_tick).
  std::vector<MeasurePosition> measures(Tick end_tick) const;

  Tick end_tick() const;
  std::optional<std::size_t> find_note(std::string_view id) const;
};

enum class CadenceClass : int { NoCad = 0, PAC = 1, IAC = 2, HC = 3 };

inline constexpr int kNumClasses = 4;
inline constexpr std::array<const char*, kNumClasses> kClassNames = {"no-cad", "PAC", "IAC", "HC"};

const char* to_string(CadenceClass c);
/// Accepts "no-cad", "PAC", "IAC", "HC".
std::optional<CadenceClass> parse_cadence_class(std::string_view name);

struct CadenceAnnotations {
  /// Only cadence classes are stored; missing ids are no-cad.
  std::map<std::string, CadenceClass> labels;

  CadenceClass label_of(const std::string& id) const;
  std::array<int, kNumClasses> counts(const Score& score) const;
};

/// Note tuple used by round-trip checks.
struct NoteKey {
  std::string id;
  Tick onset_tick;
  Tick duration_tick;
  int midi;
  int voice;
  int staff;
  friend auto operator<=>(const NoteKey&, const NoteKey&) = default;
};

std::vector<NoteKey> note_keys(const Score& score);

}  // namespace scoregraph
