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

#include "scoregraph/score.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "scoregraph/error.hpp"

namespace scoregraph {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse_error";
    case ErrorKind::UnsupportedFormat: return "unsupported_format";
    case ErrorKind::Validation: return "validation_error";
    case ErrorKind::Numeric: return "numeric_error";
    case ErrorKind::NotFound: return "not_found";
    case ErrorKind::Io: return "io_error";
  }
  return "error";
}

int Pitch::step_semitone(char step) {
  switch (step) {
    case 'C': return 0;
    case 'D': return 2;
    case 'E': return 4;
    case 'F': return 5;
    case 'G': return 7;
    case 'A': return 9;
    case 'B': return 11;
    default: return -1;
  }
}

int Pitch::midi() const { return 12 * (octave + 1) + step_semitone(step) + alter; }

bool Pitch::valid() const {
  if (step_semitone(step) < 0) return false;
  if (alter < -2 || alter > 2) return false;
  if (octave < 0 || octave > 9) return false;
  const int m = midi();
  return m >= 0 && m <= 127;
}

void Score::normalize() {
  if (ticks_per_quarter <= 0) {
    fail(ErrorKind::Validation, "ticks_per_quarter must be positive");
  }
  std::set<std::string> seen;
  for (const auto& n : notes) {
    if (n.id.empty()) fail(ErrorKind::Validation, "note with empty id");
    if (!seen.insert(n.id).second) fail(ErrorKind::Validation, "duplicate note id '" + n.id + "'");
    if (n.onset_tick < 0) fail(ErrorKind::Validation, "note '" + n.id + "' has negative onset");
    if (n.duration_tick <= 0) {
      fail(ErrorKind::Validation, "note '" + n.id + "' has non-positive duration");
    }
    if (!n.pitch.valid()) fail(ErrorKind::Validation, "note '" + n.id + "' has invalid pitch");
    if (n.voice < 1 || n.staff < 1) {
      fail(ErrorKind::Validation, "note '" + n.id + "' has invalid voice/staff");
    }
  }
  for (const auto& r : rests) {
    if (r.duration_tick <= 0 || r.onset_tick < 0) {
      fail(ErrorKind::Validation, "rest with invalid timing in part '" + r.part_id + "'");
    }
  }
  std::stable_sort(notes.begin(), notes.end(), [](const NoteEvent& a, const NoteEvent& b) {
    return std::forward_as_tuple(a.onset_tick, a.part_id, a.voice, a.pitch.midi(), a.id) <
           std::forward_as_tuple(b.onset_tick, b.part_id, b.voice, b.pitch.midi(), b.id);
  });
  std::stable_sort(rests.begin(), rests.end(), [](const RestEvent& a, const RestEvent& b) {
    return std::tie(a.onset_tick, a.part_id, a.voice, a.staff) <
           std::tie(b.onset_tick, b.part_id, b.voice, b.staff);
  });

  std::stable_sort(time_signatures.begin(), time_signatures.end(),
                   [](const auto& a, const auto& b) { return a.onset_tick < b.onset_tick; });
  // one signature per tick, first wins
  time_signatures.erase(std::unique(time_signatures.begin(), time_signatures.end(),
                                    [](const auto& a, const auto& b) {
                                      return a.onset_tick == b.onset_tick;
                                    }),
                        time_signatures.end());
  if (time_signatures.empty() || time_signatures.front().onset_tick != 0) {
    time_signatures.insert(time_signatures.begin(), TimeSignature{0, 4, 4});
  }
  for (const auto& ts : time_signatures) {
    if (ts.numerator <= 0 || ts.denominator <= 0) {
      fail(ErrorKind::Validation, "invalid time signature");
    }
    if ((4 * ts.numerator * ticks_per_quarter) % ts.denominator != 0) {
      fail(ErrorKind::Validation, "time signature " + std::to_string(ts.numerator) + "/" +
                                      std::to_string(ts.denominator) +
                                      " has no integral measure length at the tick resolution");
    }
  }
  std::stable_sort(key_signatures.begin(), key_signatures.end(),
                   [](const auto& a, const auto& b) { return a.onset_tick < b.onset_tick; });
  key_signatures.erase(std::unique(key_signatures.begin(), key_signatures.end(),
                                   [](const auto& a, const auto& b) {
                                     return a.onset_tick == b.onset_tick;
                                   }),
                       key_signatures.end());
  if (key_signatures.empty() || key_signatures.front().onset_tick != 0) {
    key_signatures.insert(key_signatures.begin(), KeySignature{0, 0});
  }
}

const TimeSignature& Score::time_signature_at(Tick tick) const {
  static const TimeSignature kDefault{0, 4, 4};
  const TimeSignature* current = &kDefault;
  for (const auto& ts : time_signatures) {
    if (ts.onset_tick <= tick) current = &ts;
  }
  return *current;
}

int Score::key_fifths_at(Tick tick) const {
  int fifths = 0;
  for (const auto& ks : key_signatures) {
    if (ks.onset_tick <= tick) fifths = ks.fifths;
  }
  return fifths;
}

std::vector<Score::MeasurePosition> Score::measures(Tick end_tick) const {
  std::vector<MeasurePosition> out;
  Tick start = 0;
  int index = 0;
  do {
    const auto& ts = time_signature_at(start);
    Tick length = 4 * ts.numerator * ticks_per_quarter / ts.denominator;
    if (length <= 0) length = ticks_per_quarter;
    out.push_back({index++, start, length});
    start += length;
  } while (start < end_tick);
  return out;
}

Score::MeasurePosition Score::measure_at(Tick tick) const {
  Tick start = 0;
  int index = 0;
  for (;;) {
    const auto& ts = time_signature_at(start);
    Tick length = 4 * ts.numerator * ticks_per_quarter / ts.denominator;
    if (length <= 0) length = ticks_per_quarter;
    if (tick < start + length) return {index, start, length};
    start += length;
    ++index;
  }
}

Tick Score::end_tick() const {
  Tick end = 0;
  for (const auto& n : notes) end = std::max(end, n.offset_tick());
  for (const auto& r : rests) end = std::max(end, r.offset_tick());
  return end;
}

std::optional<std::size_t> Score::find_note(std::string_view id) const {
  for (std::size_t i = 0; i < notes.size(); ++i) {
    if (notes[i].id == id) return i;
  }
  return std::nullopt;
}

const char* to_string(CadenceClass c) { return kClassNames[static_cast<int>(c)]; }

std::optional<CadenceClass> parse_cadence_class(std::string_view name) {
  for (int i = 0; i < kNumClasses; ++i) {
    if (name == kClassNames[i]) return static_cast<CadenceClass>(i);
  }
  return std::nullopt;
}

CadenceClass CadenceAnnotations::label_of(const std::string& id) const {
  auto it = labels.find(id);
  return it == labels.end() ? CadenceClass::NoCad : it->second;
}

std::array<int, kNumClasses> CadenceAnnotations::counts(const Score& score) const {
  std::array<int, kNumClasses> c{};
  for (const auto& n : score.notes) ++c[static_cast<int>(label_of(n.id))];
  return c;
}

std::vector<NoteKey> note_keys(const Score& score) {
  std::vector<NoteKey> keys;
  keys.reserve(score.notes.size());
  for (const auto& n : score.notes) {
    keys.push_back({n.id, n.onset_tick, n.duration_tick, n.pitch.midi(), n.voice, n.staff});
  }
  std::sort(keys.begin(), keys.end());
  return keys;
}

}  // namespace scoregraph
