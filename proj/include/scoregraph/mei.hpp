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

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "scoregraph/score.hpp"

namespace scoregraph {

/// Optional text layered on top of the notes as <harm> elements.
struct MeiLabels {
  /// Predicted class per note id; no-cad entries are ignored.
  std::map<std::string, CadenceClass> cadences;
  /// Roman-numeral text per onset tick.
  std::map<Tick, std::string> roman;
};

struct MeiDocument {
  std::string xml;
  std::vector<std::string> warnings;
};

/// Serializes the score as an MEI 4 document. Every note carries its id as
/// xml:id (sanitized to an XML name when needed, which is reported in
/// warnings). Exact durations travel in @dur.ppq; @dur/@dots are the closest
/// written value for engraving. Output is a pure function of the input.
MeiDocument export_mei(const Score& score, const MeiLabels& labels = {});

/// Reads the subset written by export_mei. Notes without xml:id receive
/// "p{part}-{index}" ids; unknown elements are reported in Score::warnings.
Score parse_mei(std::string_view document);

/// Maps an arbitrary string onto a valid XML NCName.
std::string sanitize_xml_id(std::string_view id);

}  // namespace scoregraph
