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

#include <optional>

#include "scoregraph/score.hpp"

namespace scoregraph::detail {

/// Written note value: base 1 = whole, 2 = half, 4 = quarter, ... plus dots.
struct NoteValue {
  int base = 4;
  int dots = 0;
};

/// Exact written value for a tick duration, if one exists with at most
/// three dots.
std::optional<NoteValue> exact_note_value(Tick duration, Tick ticks_per_quarter);

/// Closest undotted value not longer than the duration (never fails).
NoteValue approximate_note_value(Tick duration, Tick ticks_per_quarter);

const char* musicxml_type_name(int base);

}  // namespace scoregraph::detail
