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
#include <string>
#include <vector>

#include "scoregraph/metrics.hpp"
#include "scoregraph/synth.hpp"
#include "scoregraph/train.hpp"

namespace scoregraph {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

/// Writes <name>.musicxml and <name>.annotations.json per piece plus a
/// manifest.json with the generator's bookkeeping.
void write_synth_corpus(const SynthCorpus& corpus, std::uint64_t seed, const std::filesystem::path& dir);

struct LoadedPiece {
  std::string name;
  Score score;
  CadenceAnnotations annotations;
};

/// Reads a directory written by write_synth_corpus.
std::vector<LoadedPiece> read_corpus_dir(const std::filesystem::path& dir);

/// Parses a score file and, when <stem>.annotations.json sits next to it,
/// its annotations.
LoadedPiece load_piece_file(const std::filesystem::path& path);

std::vector<TrainExample> to_examples(const std::vector<LoadedPiece>& pieces);
std::vector<TrainExample> to_examples(const SynthCorpus& corpus);
std::vector<EvaluationPiece> to_evaluation_pieces(const std::vector<LoadedPiece>& pieces);
std::vector<LoadedPiece> loaded_pieces(const SynthCorpus& corpus);

}  // namespace scoregraph
