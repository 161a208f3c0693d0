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

#include "scoregraph/corpus.hpp"

#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "scoregraph/annotations.hpp"
#include "scoregraph/error.hpp"
#include "scoregraph/musicxml.hpp"
#include "scoregraph/store.hpp"

namespace scoregraph {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) fail(ErrorKind::Io, "failed writing '" + path.string() + "'");
}

void write_synth_corpus(const SynthCorpus& corpus, std::uint64_t seed, const fs::path& dir) {
  fs::create_directories(dir);
  nlohmann::ordered_json manifest;
  manifest["seed"] = seed;
  manifest["count"] = corpus.pieces.size();
  nlohmann::ordered_json phrases = nlohmann::ordered_json::object();
  nlohmann::ordered_json notes = nlohmann::ordered_json::object();
  for (int c = 0; c < kNumClasses; ++c) {
    phrases[kClassNames[static_cast<std::size_t>(c)]] = corpus.phrase_counts[static_cast<std::size_t>(c)];
    notes[kClassNames[static_cast<std::size_t>(c)]] = corpus.note_counts[static_cast<std::size_t>(c)];
  }
  manifest["phrase_counts"] = std::move(phrases);
  manifest["note_counts"] = std::move(notes);
  auto list = nlohmann::ordered_json::array();
  for (const auto& piece : corpus.pieces) {
    write_file(dir / (piece.name + ".musicxml"), write_musicxml(piece.score));
    write_file(dir / (piece.name + ".annotations.json"), annotations_to_json(piece.annotations, piece.score));
    nlohmann::ordered_json entry;
    entry["name"] = piece.name;
    entry["score"] = piece.name + ".musicxml";
    entry["annotations"] = piece.name + ".annotations.json";
    auto planted = nlohmann::ordered_json::array();
    for (const auto& ph : piece.phrases) {
      planted.push_back({{"class", to_string(ph.cadence)},
                         {"variant", ph.variant},
                         {"penultimate_tick", ph.penultimate_tick},
                         {"arrival_tick", ph.arrival_tick}});
    }
    entry["phrases"] = std::move(planted);
    list.push_back(std::move(entry));
  }
  manifest["pieces"] = std::move(list);
  write_file(dir / "manifest.json", manifest.dump(1) + "\n");
}

std::vector<LoadedPiece> read_corpus_dir(const fs::path& dir) {
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file(dir / "manifest.json"));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, "manifest.json: " + std::string(e.what()));
  }
  std::vector<LoadedPiece> pieces;
  try {
    for (const auto& entry : manifest.at("pieces")) {
      LoadedPiece p;
      p.name = entry.at("name").get<std::string>();
      p.score = parse_score(read_file(dir / entry.at("score").get<std::string>()));
      p.annotations = load_annotations(read_file(dir / entry.at("annotations").get<std::string>()), p.score);
      pieces.push_back(std::move(p));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Validation, "manifest.json: " + std::string(e.what()));
  }
  return pieces;
}

LoadedPiece load_piece_file(const fs::path& path) {
  LoadedPiece p;
  p.name = path.stem().string();
  p.score = parse_score(read_file(path));
  const fs::path ann = path.parent_path() / (path.stem().string() + ".annotations.json");
  if (fs::exists(ann)) p.annotations = load_annotations(read_file(ann), p.score);
  return p;
}

std::vector<TrainExample> to_examples(const std::vector<LoadedPiece>& pieces) {
  std::vector<TrainExample> out;
  out.reserve(pieces.size());
  for (const auto& p : pieces) out.push_back(make_example(p.name, build_graph(p.score), p.annotations));
  return out;
}

std::vector<LoadedPiece> loaded_pieces(const SynthCorpus& corpus) {
  std::vector<LoadedPiece> out;
  out.reserve(corpus.pieces.size());
  for (const auto& p : corpus.pieces) out.push_back({p.name, p.score, p.annotations});
  return out;
}

std::vector<TrainExample> to_examples(const SynthCorpus& corpus) { return to_examples(loaded_pieces(corpus)); }

std::vector<EvaluationPiece> to_evaluation_pieces(const std::vector<LoadedPiece>& pieces) {
  std::vector<EvaluationPiece> out;
  out.reserve(pieces.size());
  for (const auto& p : pieces) out.push_back({p.name, build_graph(p.score), p.annotations});
  return out;
}

}  // namespace scoregraph
