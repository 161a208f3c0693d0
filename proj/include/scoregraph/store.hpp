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

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "scoregraph/graph.hpp"
#include "scoregraph/model.hpp"
#include "scoregraph/score.hpp"

namespace scoregraph {

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

enum class ScoreFormat { MusicXml, Mei };

/// Picks the reader from the document root: <mei> goes to the MEI reader,
/// everything else to the MusicXML reader (which rejects other roots).
ScoreFormat detect_format(std::string_view document);
Score parse_score(std::string_view document);

/// An uploaded score with everything derived from it. Records are immutable
/// once built, so the graph and prediction caches can never disagree.
struct ScoreRecord {
  std::string score_id;
  std::string bytes;
  ScoreFormat format = ScoreFormat::MusicXml;
  Score score;
  ScoreGraph graph;
  CadencePrediction predictions;
};

ScoreRecord build_record(std::string bytes, const Checkpoint& ckpt);

/// MEI export of the record with its predicted cadences as <harm> labels.
std::string record_mei(const ScoreRecord& rec);

/// Input-edge view of a graph keyed by note ids.
std::string graph_edges_json(const ScoreGraph& graph);

/// Content-addressed score store. When a data directory is given, originals
/// live in <data_dir>/scores/<score_id>.xml and are reloaded on construction.
/// Safe for concurrent use: one writer or many readers at a time.
class ScoreStore {
 public:
  ScoreStore(std::shared_ptr<const Checkpoint> ckpt, std::optional<std::filesystem::path> data_dir);

  /// Returns the score id; adding identical bytes twice is a no-op.
  std::string add(std::string bytes);
  std::shared_ptr<const ScoreRecord> get(const std::string& score_id) const;
  std::vector<std::string> ids() const;

 private:
  std::shared_ptr<const Checkpoint> ckpt_;
  std::optional<std::filesystem::path> data_dir_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::shared_ptr<const ScoreRecord>> records_;
};

}  // namespace scoregraph
