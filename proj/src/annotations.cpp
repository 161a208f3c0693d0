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

#include "scoregraph/annotations.hpp"

#include <map>
#include <nlohmann/json.hpp>

#include "scoregraph/error.hpp"

namespace scoregraph {

using nlohmann::json;

CadenceAnnotations load_annotations(std::string_view text, const Score& score) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorKind::Parse, std::string("annotation JSON: ") + e.what());
  }
  if (!doc.is_array()) fail(ErrorKind::Validation, "annotations must be a JSON array");

  std::map<std::string, std::size_t> by_id;
  std::multimap<Tick, std::size_t> by_onset;
  for (std::size_t i = 0; i < score.notes.size(); ++i) {
    by_id[score.notes[i].id] = i;
    by_onset.emplace(score.notes[i].onset_tick, i);
  }

  CadenceAnnotations out;
  std::vector<std::string> offenders;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const auto& entry = doc[k];
    const std::string where = "entry " + std::to_string(k);
    if (!entry.is_object() || !entry.contains("class") || !entry["class"].is_string()) {
      offenders.push_back(where + ": missing class");
      continue;
    }
    const auto cls = parse_cadence_class(entry["class"].get<std::string>());
    if (!cls || *cls == CadenceClass::NoCad) {
      offenders.push_back(where + ": unknown class '" + entry["class"].get<std::string>() + "'");
      continue;
    }
    if (entry.contains("note_id")) {
      const auto id = entry["note_id"].is_string() ? entry["note_id"].get<std::string>() : std::string{};
      if (!by_id.count(id)) {
        offenders.push_back(where + ": unknown note id '" + id + "'");
        continue;
      }
      out.labels[id] = *cls;
    } else if (entry.contains("onset_tick") && entry["onset_tick"].is_number_integer()) {
      const Tick onset = entry["onset_tick"].get<Tick>();
      auto [lo, hi] = by_onset.equal_range(onset);
      if (lo == hi) {
        offenders.push_back(where + ": no notes at onset " + std::to_string(onset));
        continue;
      }
      for (auto it = lo; it != hi; ++it) out.labels[score.notes[it->second].id] = *cls;
    } else {
      offenders.push_back(where + ": needs note_id or integer onset_tick");
    }
  }
  if (!offenders.empty()) {
    std::string msg = "invalid annotations:";
    for (const auto& o : offenders) msg += " [" + o + "]";
    fail(ErrorKind::Validation, msg);
  }
  return out;
}

std::string annotations_to_json(const CadenceAnnotations& annotations, const Score& score) {
  json arr = json::array();
  for (const auto& n : score.notes) {
    const auto c = annotations.label_of(n.id);
    if (c == CadenceClass::NoCad) continue;
    arr.push_back({{"note_id", n.id}, {"class", to_string(c)}});
  }
  return arr.dump(1) + "\n";
}

}  // namespace scoregraph
