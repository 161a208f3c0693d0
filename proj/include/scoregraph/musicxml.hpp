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

#include <string>
#include <string_view>

#include "scoregraph/score.hpp"

namespace scoregraph {

/// Reads an uncompressed score-partwise MusicXML document. All durations are
/// rescaled onto one global tick grid (the LCM of every divisions value).
/// Grace notes, cue notes, unpitched notes and ornaments are skipped with an
/// entry in Score::warnings.
Score parse_musicxml(std::string_view document);

/// Writes a score-partwise document with one measure grid per part, using
/// <backup> to lay out voices and staves. Notes crossing a barline are
/// split into tied pieces; continuation pieces get the id suffix "-contN".
std::string write_musicxml(const Score& score);

}  // namespace scoregraph
