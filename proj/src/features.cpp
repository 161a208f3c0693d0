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

#include "scoregraph/features.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "scoregraph/error.hpp"

namespace scoregraph {

namespace {

// base-v1 column layout
constexpr std::size_t kPitchClass = 0;   // 12
constexpr std::size_t kOctave = 12;      // 7, octaves 1..7
constexpr std::size_t kLogDuration = 19;
constexpr std::size_t kDownbeat = 20;
constexpr std::size_t kMetrical = 21;
constexpr std::size_t kLowest = 22;
constexpr std::size_t kHighest = 23;
constexpr std::size_t kInterval = 24;    // 12
constexpr std::size_t kMajorTriad = 36;
constexpr std::size_t kDominant7 = 37;
constexpr std::size_t kResolvesUp = 38;
constexpr std::size_t kPrecededByDom7 = 39;
constexpr std::size_t kBaseV1Width = 40;

void require_known(const FeatureSpec& spec) {
  if (spec.name != "base-v1") fail(ErrorKind::Validation, "unknown feature spec '" + spec.name + "'");
}

using PitchClassSet = std::set<int>;

bool is_major_triad(const PitchClassSet& pcs) {
  if (pcs.size() != 3) return false;
  for (int r : pcs) {
    if (pcs.count((r + 4) % 12) && pcs.count((r + 7) % 12)) return true;
  }
  return false;
}

bool is_dominant_seventh(const PitchClassSet& pcs) {
  if (pcs.size() != 4 && pcs.size() != 3) return false;
  for (int r : pcs) {
    const bool third = pcs.count((r + 4) % 12) > 0;
    const bool seventh = pcs.count((r + 10) % 12) > 0;
    const bool fifth = pcs.count((r + 7) % 12) > 0;
    if (third && seventh && (pcs.size() == 3 || fifth)) return true;
  }
  return false;
}

struct OnsetContext {
  PitchClassSet pcs;
  int lowest = 128;
  int highest = -1;
};

}  // namespace

std::vector<std::string> feature_names(const FeatureSpec& spec) {
  require_known(spec);
  std::vector<std::string> names;
  names.reserve(kBaseV1Width);
  for (int i = 0; i < 12; ++i) names.push_back("pitch_class_" + std::to_string(i));
  for (int o = 1; o <= 7; ++o) names.push_back("octave_" + std::to_string(o));
  names.insert(names.end(), {"log_duration", "is_downbeat", "metrical_strength",
                             "is_lowest_at_onset", "is_highest_at_onset"});
  for (int i = 0; i < 12; ++i) names.push_back("interval_to_lowest_" + std::to_string(i));
  names.insert(names.end(), {"sonority_major_triad", "sonority_dominant_seventh",
                             "resolves_up_semitone", "preceded_by_dominant_seventh"});
  return names;
}

std::vector<std::pair<std::size_t, std::size_t>> one_hot_groups(const FeatureSpec& spec) {
  require_known(spec);
  return {{kPitchClass, kPitchClass + 12}, {kOctave, kOctave + 7}, {kInterval, kInterval + 12}};
}

FeatureMatrix extract_features(const Score& score, const FeatureSpec& spec) {
  require_known(spec);
  const auto& notes = score.notes;
  FeatureMatrix fm{Tensor(notes.size(), kBaseV1Width), feature_names(spec)};

  std::map<Tick, OnsetContext> contexts;
  for (const auto& n : notes) contexts.emplace(n.onset_tick, OnsetContext{});
  for (auto& [t, ctx] : contexts) {
    for (const auto& n : notes) {
      if (n.onset_tick <= t && t < n.offset_tick()) {
        const int m = n.pitch.midi();
        ctx.pcs.insert(m % 12);
        ctx.lowest = std::min(ctx.lowest, m);
        ctx.highest = std::max(ctx.highest, m);
      }
    }
  }
  std::multimap<Tick, int> midi_by_onset;
  for (const auto& n : notes) midi_by_onset.emplace(n.onset_tick, n.pitch.midi());

  for (std::size_t i = 0; i < notes.size(); ++i) {
    const auto& n = notes[i];
    auto row = fm.values.row(i);
    const int midi = n.pitch.midi();
    const auto& ctx = contexts.at(n.onset_tick);

    row[kPitchClass + static_cast<std::size_t>(midi % 12)] = 1.0;
    row[kOctave + static_cast<std::size_t>(std::clamp(n.pitch.octave, 1, 7) - 1)] = 1.0;

    const auto& ts = score.time_signature_at(n.onset_tick);
    const auto pos = score.measure_at(n.onset_tick);
    Tick beat = 4 * score.ticks_per_quarter / ts.denominator;
    if (ts.numerator > 3 && ts.numerator % 3 == 0) beat *= 3;
    if (beat <= 0) beat = 1;
    const double beats = static_cast<double>(n.duration_tick) / static_cast<double>(beat);
    row[kLogDuration] = (std::clamp(std::log2(beats), -3.0, 3.0) + 3.0) / 6.0;

    const Tick offset = n.onset_tick - pos.measure_start;
    row[kDownbeat] = offset == 0 ? 1.0 : 0.0;
    double strength = 0.0;
    if (offset == 0) {
      strength = 1.0;
    } else if (offset % beat == 0) {
      const Tick beats_per_measure = pos.measure_length / beat;
      strength = (beats_per_measure % 2 == 0 && offset / beat == beats_per_measure / 2) ? 0.5 : 0.25;
    }
    row[kMetrical] = strength;

    row[kLowest] = midi == ctx.lowest ? 1.0 : 0.0;
    row[kHighest] = midi == ctx.highest ? 1.0 : 0.0;
    row[kInterval + static_cast<std::size_t>((midi - ctx.lowest) % 12)] = 1.0;
    row[kMajorTriad] = is_major_triad(ctx.pcs) ? 1.0 : 0.0;
    row[kDominant7] = is_dominant_seventh(ctx.pcs) ? 1.0 : 0.0;

    auto [lo, hi] = midi_by_onset.equal_range(n.offset_tick());
    row[kResolvesUp] = std::any_of(lo, hi, [&](const auto& kv) { return kv.second == midi + 1; }) ? 1.0 : 0.0;

    auto prev = contexts.find(n.onset_tick);
    if (prev != contexts.begin()) {
      --prev;
      row[kPrecededByDom7] = is_dominant_seventh(prev->second.pcs) ? 1.0 : 0.0;
    }
  }
  return fm;
}

}  // namespace scoregraph
