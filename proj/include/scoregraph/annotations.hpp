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

/// Parses a JSON array of {"note_id", "class"} or {"onset_tick", "class"}
/// entries. The onset form labels every note starting at that tick. All
/// offending entries are listed in one Error(Validation).
CadenceAnnotations load_annotations(std::string_view json, const Score& score);

/// Id-based JSON, one entry per labeled note in score order.
std::string annotations_to_json(const CadenceAnnotations& annotations, const Score& score);

}  // namespace scoregraph
