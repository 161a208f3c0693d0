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

#include "durations.hpp"

namespace scoregraph::detail {

std::optional<NoteValue> exact_note_value(Tick duration, Tick tpq) {
  // base b lasts 4*tpq/b ticks; dots add halves.
  for (int base = 1; base <= 128; base *= 2) {
    const Tick whole = 4 * tpq;
    if (whole % base != 0) break;
    Tick value = whole / base;
    Tick total = value;
    for (int dots = 0; dots <= 3; ++dots) {
      if (total == duration) return NoteValue{base, dots};
      if (value % 2 != 0) break;
      value /= 2;
      total += value;
    }
  }
  return std::nullopt;
}

NoteValue approximate_note_value(Tick duration, Tick tpq) {
  if (auto exact = exact_note_value(duration, tpq)) return *exact;
  int base = 1;
  while (base < 128 && 4 * tpq / base > duration) base *= 2;
  return NoteValue{base, 0};
}

const char* musicxml_type_name(int base) {
  switch (base) {
    case 1: return "whole";
    case 2: return "half";
    case 4: return "quarter";
    case 8: return "eighth";
    case 16: return "16th";
    case 32: return "32nd";
    case 64: return "64th";
    default: return "128th";
  }
}

}  // namespace scoregraph::detail
