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

#include "scoregraph/store.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>

#include "scoregraph/error.hpp"
#include "scoregraph/mei.hpp"
#include "scoregraph/musicxml.hpp"

namespace scoregraph {

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    fail(ErrorKind::Io, "SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

ScoreFormat detect_format(std::string_view document) {
  std::size_t pos = 0;
  while ((pos = document.find('<', pos)) != std::string_view::npos) {
    const auto next = pos + 1 < document.size() ? document[pos + 1] : '\0';
    if (next == '?' || next == '!') {
      ++pos;
      continue;
    }
    const auto name = document.substr(pos + 1, 4);
    if (name == "mei>" || name == "mei " || name == "mei\n" || name == "mei\t") return ScoreFormat::Mei;
    return ScoreFormat::MusicXml;
  }
  return ScoreFormat::MusicXml;
}

Score parse_score(std::string_view document) {
  return detect_format(document) == ScoreFormat::Mei ? parse_mei(document) : parse_musicxml(document);
}

ScoreRecord build_record(std::string bytes, const Checkpoint& ckpt) {
  ScoreRecord rec;
  rec.score_id = sha256_hex(bytes);
  rec.format = detect_format(bytes);
  rec.score = parse_score(bytes);
  rec.graph = build_graph(rec.score, FeatureSpec{ckpt.feature_spec});
  rec.predictions = predict(rec.graph, ckpt);
  rec.bytes = std::move(bytes);
  return rec;
}

std::string record_mei(const ScoreRecord& rec) {
  MeiLabels labels;
  labels.cadences = rec.predictions.as_map();
  return export_mei(rec.score, labels).xml;
}

std::string graph_edges_json(const ScoreGraph& graph) {
  nlohmann::ordered_json j;
  j["node_ids"] = graph.node_ids;
  nlohmann::ordered_json edges = nlohmann::ordered_json::object();
  nlohmann::ordered_json counts = nlohmann::ordered_json::object();
  for (int r = 0; r < kNumRelations; ++r) {
    auto list = nlohmann::ordered_json::array();
    for (const Edge& e : graph.edges[r]) {
      list.push_back({{"src_id", graph.node_ids[static_cast<std::size_t>(e.src)]},
                      {"dst_id", graph.node_ids[static_cast<std::size_t>(e.dst)]}});
    }
    edges[to_string(kRelations[r])] = std::move(list);
    counts[to_string(kRelations[r])] = graph.edges[r].size();
  }
  j["edges"] = std::move(edges);
  j["edge_counts"] = std::move(counts);
  return j.dump() + "\n";
}

ScoreStore::ScoreStore(std::shared_ptr<const Checkpoint> ckpt, std::optional<std::filesystem::path> data_dir)
    : ckpt_(std::move(ckpt)), data_dir_(std::move(data_dir)) {
  if (!ckpt_) fail(ErrorKind::Validation, "score store needs a checkpoint");
  if (!data_dir_) return;
  const auto dir = *data_dir_ / "scores";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create data directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".xml") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& path : files) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    auto rec = std::make_shared<ScoreRecord>(build_record(ss.str(), *ckpt_));
    records_[rec->score_id] = std::move(rec);
  }
}

std::string ScoreStore::add(std::string bytes) {
  const std::string id = sha256_hex(bytes);
  {
    std::shared_lock lock(mutex_);
    if (records_.count(id)) return id;
  }
  auto rec = std::make_shared<ScoreRecord>(build_record(std::move(bytes), *ckpt_));
  std::unique_lock lock(mutex_);
  if (records_.count(id)) return id;
  if (data_dir_) {
    const auto path = *data_dir_ / "scores" / (id + ".xml");
    std::ofstream out(path, std::ios::binary);
    out << rec->bytes;
    if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  }
  records_[id] = std::move(rec);
  return id;
}

std::shared_ptr<const ScoreRecord> ScoreStore::get(const std::string& score_id) const {
  std::shared_lock lock(mutex_);
  auto it = records_.find(score_id);
  return it == records_.end() ? nullptr : it->second;
}

std::vector<std::string> ScoreStore::ids() const {
  std::shared_lock lock(mutex_);
  std::vector<std::string> out;
  for (const auto& [id, rec] : records_) out.push_back(id);
  return out;
}

}  // namespace scoregraph
