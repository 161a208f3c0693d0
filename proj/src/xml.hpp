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

// Minimal DOM on top of expat, shared by the MusicXML and MEI readers.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace scoregraph::xml {

struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;
  long line = 0;

  const std::string* attr(std::string_view key) const;
  std::string attr_or(std::string_view key, std::string fallback) const;
  const Element* child(std::string_view child_name) const;
  std::string child_text(std::string_view child_name) const;
  bool has_child(std::string_view child_name) const { return child(child_name) != nullptr; }
};

/// Throws Error(Parse) carrying line, column and byte offset on malformed input.
Element parse(std::string_view document);

std::string escape(std::string_view raw);

/// Trimmed copy.
std::string trim(std::string_view s);

}  // namespace scoregraph::xml
