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

#include "scoregraph/musicxml.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "durations.hpp"
#include "scoregraph/error.hpp"
#include "xml.hpp"

namespace scoregraph {

namespace {

long parse_long(const std::string& text, const char* what, long line) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::Validation, std::string("invalid ") + what + " '" + text + "' at line " +
                                    std::to_string(line));
  }
}

/// "3+2" style compound numerators are summed.
int parse_beats(const std::string& text, long line) {
  int total = 0;
  std::stringstream ss(text);
  std::string piece;
  while (std::getline(ss, piece, '+')) {
    total += static_cast<int>(parse_long(xml::trim(piece), "time beats", line));
  }
  return total;
}

/// Durations in MusicXML may be written as decimals; only integral values
/// map onto the tick grid.
Tick scaled_duration(const xml::Element& el, Tick scale, long line) {
  const std::string text = el.child_text("duration");
  if (text.empty()) fail(ErrorKind::Validation, "missing duration at line " + std::to_string(line));
  double value = 0;
  try {
    value = std::stod(text);
  } catch (const std::exception&) {
    fail(ErrorKind::Validation, "invalid duration '" + text + "' at line " + std::to_string(line));
  }
  const double rounded = std::round(value);
  if (std::abs(value - rounded) > 1e-9 || rounded < 0) {
    fail(ErrorKind::Validation,
         "non-integral duration '" + text + "' at line " + std::to_string(line));
  }
  return static_cast<Tick>(rounded) * scale;
}

void collect_divisions(const xml::Element& el, std::vector<long>& out,
                       std::vector<std::pair<int, int>>& meters) {
  if (el.name == "divisions") {
    const long d = parse_long(xml::trim(el.text), "divisions", el.line);
    if (d <= 0) {
      fail(ErrorKind::Validation,
           "divisions must be positive (got " + std::to_string(d) + ") at line " +
               std::to_string(el.line));
    }
    out.push_back(d);
    return;
  }
  if (el.name == "time" && el.has_child("beats") && el.has_child("beat-type")) {
    meters.emplace_back(parse_beats(el.child_text("beats"), el.line),
                        static_cast<int>(parse_long(el.child_text("beat-type"), "beat-type", el.line)));
  }
  for (const auto& c : el.children) collect_divisions(c, out, meters);
}

}  // namespace

namespace {

Score parse_musicxml_impl(std::string_view document) {
  const xml::Element root = xml::parse(document);
  if (root.name == "score-timewise") {
    fail(ErrorKind::UnsupportedFormat, "score-timewise MusicXML is not supported");
  }
  if (root.name != "score-partwise") {
    fail(ErrorKind::UnsupportedFormat, "expected score-partwise root, found <" + root.name + ">");
  }

  Score score;
  if (const auto* work = root.child("work")) score.title = work->child_text("work-title");
  if (score.title.empty()) score.title = root.child_text("movement-title");

  std::vector<long> divisions;
  std::vector<std::pair<int, int>> meters;
  collect_divisions(root, divisions, meters);
  long tpq = 1;
  for (long d : divisions) tpq = std::lcm(tpq, d);
  for (auto [num, den] : meters) {
    if (num <= 0 || den <= 0) continue;
    const long need = den / std::gcd(4L * num, static_cast<long>(den));
    tpq = std::lcm(tpq, need);
  }
  score.ticks_per_quarter = tpq;

  std::map<std::string, std::string> part_names;
  if (const auto* list = root.child("part-list")) {
    for (const auto& sp : list->children) {
      if (sp.name == "score-part") part_names[sp.attr_or("id", "")] = sp.child_text("part-name");
    }
  }

  int part_ordinal = 0;
  for (const auto& part : root.children) {
    if (part.name != "part") continue;
    ++part_ordinal;
    PartInfo info;
    info.id = part.attr_or("id", "P" + std::to_string(part_ordinal));
    info.name = part_names.count(info.id) ? part_names[info.id] : info.id;

    long div = 0;
    Tick cursor = 0;
    Tick last_onset = 0;
    int note_index = 0;
    bool warned_divisions = false;

    for (const auto& measure : part.children) {
      if (measure.name != "measure") continue;
      const Tick measure_start = cursor;
      Tick furthest = cursor;
      for (const auto& el : measure.children) {
        if (el.name == "attributes") {
          for (const auto& a : el.children) {
            if (a.name == "divisions") {
              div = parse_long(xml::trim(a.text), "divisions", a.line);
            } else if (a.name == "key") {
              const std::string f = a.child_text("fifths");
              if (!f.empty()) {
                score.key_signatures.push_back(
                    {cursor, static_cast<int>(parse_long(f, "key fifths", a.line))});
              }
            } else if (a.name == "time") {
              if (a.has_child("beats") && a.has_child("beat-type")) {
                score.time_signatures.push_back(
                    {cursor, parse_beats(a.child_text("beats"), a.line),
                     static_cast<int>(parse_long(a.child_text("beat-type"), "beat-type", a.line))});
              } else {
                score.warnings.push_back("time signature without beats at line " +
                                         std::to_string(a.line) + " ignored");
              }
            } else if (a.name == "staves") {
              info.staves = std::max(info.staves,
                                     static_cast<int>(parse_long(xml::trim(a.text), "staves", a.line)));
            }
          }
          continue;
        }
        if (el.name != "note" && el.name != "backup" && el.name != "forward") continue;
        if (div <= 0) {
          div = 1;
          if (!warned_divisions) {
            score.warnings.push_back("part " + info.id + ": no divisions before first note, assuming 1");
            warned_divisions = true;
          }
        }
        const Tick scale = tpq / div;

        if (el.name == "backup") {
          cursor -= scaled_duration(el, scale, el.line);
          if (cursor < measure_start) {
            fail(ErrorKind::Validation,
                 "backup before measure start at line " + std::to_string(el.line));
          }
          continue;
        }
        if (el.name == "forward") {
          cursor += scaled_duration(el, scale, el.line);
          furthest = std::max(furthest, cursor);
          continue;
        }

        // <note>
        if (el.has_child("grace")) {
          score.warnings.push_back("grace note at line " + std::to_string(el.line) + " skipped");
          continue;
        }
        const bool is_chord = el.has_child("chord");
        const Tick duration = scaled_duration(el, scale, el.line);
        const Tick onset = is_chord ? last_onset : cursor;
        if (!is_chord) {
          last_onset = cursor;
          cursor += duration;
          furthest = std::max(furthest, cursor);
        }

        int voice = 1;
        if (const auto v = el.child_text("voice"); !v.empty()) {
          try {
            voice = std::max(1, std::stoi(v));
          } catch (const std::exception&) {
            score.warnings.push_back("non-numeric voice '" + v + "' at line " +
                                     std::to_string(el.line) + " mapped to 1");
          }
        }
        int staff = 1;
        if (const auto s = el.child_text("staff"); !s.empty()) {
          staff = std::max(1, static_cast<int>(parse_long(s, "staff", el.line)));
          info.staves = std::max(info.staves, staff);
        }

        if (el.has_child("cue") || el.has_child("unpitched")) {
          score.warnings.push_back(std::string(el.has_child("cue") ? "cue" : "unpitched") +
                                   " note at line " + std::to_string(el.line) + " skipped");
          continue;
        }
        if (duration <= 0) {
          score.warnings.push_back("zero-duration note at line " + std::to_string(el.line) +
                                   " skipped");
          continue;
        }
        if (el.has_child("rest")) {
          if (!is_chord) score.rests.push_back({onset, duration, voice, staff, info.id});
          continue;
        }
        const auto* pitch_el = el.child("pitch");
        if (!pitch_el) {
          score.warnings.push_back("note without pitch at line " + std::to_string(el.line) +
                                   " skipped");
          continue;
        }

        NoteEvent note;
        const std::string step = pitch_el->child_text("step");
        note.pitch.step = step.size() == 1 ? step[0] : '?';
        if (const auto alter = pitch_el->child_text("alter"); !alter.empty()) {
          const double a = std::stod(alter);
          if (std::abs(a - std::round(a)) > 1e-9) {
            fail(ErrorKind::Validation,
                 "microtonal alter '" + alter + "' at line " + std::to_string(el.line));
          }
          note.pitch.alter = static_cast<int>(std::round(a));
        }
        note.pitch.octave = static_cast<int>(parse_long(pitch_el->child_text("octave"), "octave", el.line));
        if (!note.pitch.valid()) {
          fail(ErrorKind::Validation, "invalid pitch at line " + std::to_string(el.line));
        }
        note.onset_tick = onset;
        note.duration_tick = duration;
        note.voice = voice;
        note.staff = staff;
        note.part_id = info.id;
        for (const auto& c : el.children) {
          if (c.name != "tie") continue;
          const auto type = c.attr_or("type", "");
          if (type == "start") note.tie_next = true;
          if (type == "stop") note.tie_prev = true;
        }
        if (const auto* notations = el.child("notations")) {
          if (notations->has_child("ornaments")) {
            score.warnings.push_back("ornament at line " + std::to_string(el.line) + " skipped");
          }
        }
        note.id = el.attr_or("id", "p" + std::to_string(part_ordinal) + "-" + std::to_string(note_index));
        ++note_index;
        score.notes.push_back(std::move(note));
      }
      cursor = furthest;
    }
    score.parts.push_back(std::move(info));
  }
  score.ticks_per_quarter = tpq;
  score.normalize();
  return score;
}

}  // namespace

Score parse_musicxml(std::string_view document) {
  try {
    return parse_musicxml_impl(document);
  } catch (const std::invalid_argument& e) {
    fail(ErrorKind::Validation, std::string("invalid numeric value: ") + e.what());
  } catch (const std::out_of_range& e) {
    fail(ErrorKind::Validation, std::string("numeric value out of range: ") + e.what());
  }
}

namespace {

struct LaneKey {
  int staff;
  int voice;
  friend auto operator<=>(const LaneKey&, const LaneKey&) = default;
};

struct LaneEvent {
  Tick onset;
  Tick duration;
  bool rest;
  Pitch pitch;
  std::string id;
  bool tie_prev;
  bool tie_next;
};

/// Splits an event at every barline it crosses; continuation pieces are tied.
void push_split(std::vector<LaneEvent>& lane, LaneEvent ev,
                const std::vector<Score::MeasurePosition>& measures) {
  int piece = 0;
  const bool tie_next = ev.tie_next;
  for (const auto& m : measures) {
    const Tick mend = m.measure_start + m.measure_length;
    if (ev.onset < m.measure_start || ev.onset >= mend) continue;
    if (ev.onset + ev.duration <= mend) break;
    LaneEvent head = ev;
    head.duration = mend - ev.onset;
    head.tie_next = !ev.rest;
    lane.push_back(head);
    ev.onset = mend;
    ev.duration -= head.duration;
    ev.tie_prev = !ev.rest;
    if (!ev.rest) ev.id = head.id.substr(0, head.id.find("-cont")) + "-cont" + std::to_string(++piece);
  }
  ev.tie_next = tie_next;
  lane.push_back(std::move(ev));
}

void write_pitch(std::ostringstream& out, const Pitch& p) {
  out << "        <pitch><step>" << p.step << "</step>";
  if (p.alter != 0) out << "<alter>" << p.alter << "</alter>";
  out << "<octave>" << p.octave << "</octave></pitch>\n";
}

}  // namespace

std::string write_musicxml(const Score& score) {
  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<score-partwise version=\"4.0\">\n";
  if (!score.title.empty()) {
    out << "  <work><work-title>" << xml::escape(score.title) << "</work-title></work>\n";
  }
  out << "  <part-list>\n";
  for (const auto& p : score.parts) {
    out << "    <score-part id=\"" << xml::escape(p.id) << "\"><part-name>" << xml::escape(p.name)
        << "</part-name></score-part>\n";
  }
  out << "  </part-list>\n";

  const Tick tpq = score.ticks_per_quarter;
  const auto measures = score.measures(std::max<Tick>(score.end_tick(), 1));

  for (const auto& part : score.parts) {
    std::map<LaneKey, std::vector<LaneEvent>> lanes;
    int staves = part.staves;
    for (const auto& n : score.notes) {
      if (n.part_id != part.id) continue;
      push_split(lanes[{n.staff, n.voice}],
                 {n.onset_tick, n.duration_tick, false, n.pitch, n.id, n.tie_prev, n.tie_next},
                 measures);
      staves = std::max(staves, n.staff);
    }
    for (const auto& r : score.rests) {
      if (r.part_id != part.id) continue;
      push_split(lanes[{r.staff, r.voice}],
                 {r.onset_tick, r.duration_tick, true, Pitch{}, std::string{}, false, false},
                 measures);
      staves = std::max(staves, r.staff);
    }
    for (auto& [key, events] : lanes) {
      std::stable_sort(events.begin(), events.end(),
                       [](const LaneEvent& a, const LaneEvent& b) { return a.onset < b.onset; });
    }

    out << "  <part id=\"" << xml::escape(part.id) << "\">\n";
    for (const auto& m : measures) {
      const Tick mend = m.measure_start + m.measure_length;
      out << "    <measure number=\"" << (m.measure_index + 1) << "\">\n";
      const bool first = m.measure_index == 0;
      bool ts_change = false;
      for (const auto& ts : score.time_signatures) {
        if (ts.onset_tick == m.measure_start && ts.onset_tick > 0) ts_change = true;
      }
      bool key_change = false;
      for (const auto& ks : score.key_signatures) {
        if (ks.onset_tick == m.measure_start && ks.onset_tick > 0) key_change = true;
      }
      if (first || ts_change || key_change) {
        const auto& ts = score.time_signature_at(m.measure_start);
        out << "      <attributes>\n";
        if (first) out << "        <divisions>" << tpq << "</divisions>\n";
        out << "        <key><fifths>" << score.key_fifths_at(m.measure_start) << "</fifths></key>\n";
        out << "        <time><beats>" << ts.numerator << "</beats><beat-type>" << ts.denominator
            << "</beat-type></time>\n";
        if (first) {
          if (staves > 1) out << "        <staves>" << staves << "</staves>\n";
          for (int s = 1; s <= staves; ++s) {
            const bool bass = staves > 1 && s == staves;
            out << "        <clef number=\"" << s << "\"><sign>" << (bass ? "F" : "G")
                << "</sign><line>" << (bass ? 4 : 2) << "</line></clef>\n";
          }
        }
        out << "      </attributes>\n";
      }

      Tick cursor = m.measure_start;
      for (const auto& [key, events] : lanes) {
        bool any = false;
        Tick last_onset = -1;
        for (const auto& ev : events) {
          if (ev.onset < m.measure_start || ev.onset >= mend) continue;
          const bool chord = !ev.rest && any && ev.onset == last_onset && cursor > ev.onset;
          if (!chord) {
            if (ev.onset > cursor) {
              out << "      <forward><duration>" << (ev.onset - cursor) << "</duration></forward>\n";
            } else if (ev.onset < cursor) {
              out << "      <backup><duration>" << (cursor - ev.onset) << "</duration></backup>\n";
            }
            cursor = ev.onset;
          }
          out << "      <note";
          if (!ev.rest) out << " id=\"" << xml::escape(ev.id) << "\"";
          out << ">\n";
          if (chord) out << "        <chord/>\n";
          if (!ev.rest) {
            write_pitch(out, ev.pitch);
          } else {
            out << "        <rest/>\n";
          }
          out << "        <duration>" << ev.duration << "</duration>\n";
          if (ev.tie_prev) out << "        <tie type=\"stop\"/>\n";
          if (ev.tie_next) out << "        <tie type=\"start\"/>\n";
          out << "        <voice>" << key.voice << "</voice>\n";
          if (auto nv = detail::exact_note_value(ev.duration, tpq)) {
            out << "        <type>" << detail::musicxml_type_name(nv->base) << "</type>\n";
            for (int d = 0; d < nv->dots; ++d) out << "        <dot/>\n";
          }
          out << "        <staff>" << key.staff << "</staff>\n";
          out << "      </note>\n";
          if (!chord) {
            cursor += ev.duration;
            last_onset = ev.onset;
          }
          any = true;
        }
        if (cursor > m.measure_start) {
          out << "      <backup><duration>" << (cursor - m.measure_start)
              << "</duration></backup>\n";
          cursor = m.measure_start;
        }
      }
      // Fill the measure so the next one starts on the grid.
      out << "      <forward><duration>" << m.measure_length << "</duration></forward>\n";
      out << "    </measure>\n";
    }
    out << "  </part>\n";
  }
  out << "</score-partwise>\n";
  return out.str();
}

}  // namespace scoregraph
