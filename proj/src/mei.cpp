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

#include "scoregraph/mei.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <sstream>

#include "durations.hpp"
#include "scoregraph/error.hpp"
#include "xml.hpp"

namespace scoregraph {

namespace {

bool is_name_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool is_name_char(unsigned char c) {
  return is_name_start(c) || std::isdigit(c) || c == '-' || c == '.';
}

std::string key_sig_value(int fifths) {
  if (fifths == 0) return "0";
  return std::to_string(std::abs(fifths)) + (fifths > 0 ? "s" : "f");
}

int parse_key_sig(const std::string& v) {
  if (v.empty() || v == "0") return 0;
  const char kind = v.back();
  const int n = std::stoi(v.substr(0, v.size() - 1));
  return kind == 'f' ? -n : n;
}

const char* accid_value(int alter) {
  switch (alter) {
    case -2: return "ff";
    case -1: return "f";
    case 1: return "s";
    case 2: return "ss";
    default: return "n";
  }
}

int accid_alter(const std::string& v) {
  if (v == "ff") return -2;
  if (v == "f") return -1;
  if (v == "s") return 1;
  if (v == "ss" || v == "x") return 2;
  return 0;
}

/// Alteration implied by the key signature for a letter step.
int key_alter(int fifths, char step) {
  static const char kSharps[] = "FCGDAEB";
  static const char kFlats[] = "BEADGCF";
  for (int i = 0; i < std::min(7, std::abs(fifths)); ++i) {
    if ((fifths > 0 ? kSharps[i] : kFlats[i]) == step) return fifths > 0 ? 1 : -1;
  }
  return 0;
}

std::string format_beats(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Event {
  Tick onset;
  Tick duration;
  const NoteEvent* note = nullptr;  // nullptr => rest
};

struct Group {
  Tick onset;
  Tick duration;
  std::vector<const NoteEvent*> notes;  // empty => rest
};

}  // namespace

std::string sanitize_xml_id(std::string_view id) {
  std::string out;
  for (unsigned char c : id) out += is_name_char(c) ? static_cast<char>(c) : '_';
  if (out.empty() || !is_name_start(static_cast<unsigned char>(out[0]))) out.insert(out.begin(), '_');
  return out;
}

MeiDocument export_mei(const Score& score, const MeiLabels& labels) {
  MeiDocument doc;
  const Tick tpq = score.ticks_per_quarter;

  // Final ids, sanitized and de-duplicated.
  std::map<const NoteEvent*, std::string> ids;
  std::set<std::string> used;
  for (const auto& n : score.notes) {
    std::string id = sanitize_xml_id(n.id);
    if (id != n.id) doc.warnings.push_back("note id '" + n.id + "' sanitized to '" + id + "'");
    if (used.count(id)) {
      int k = 1;
      while (used.count(id + "_" + std::to_string(k))) ++k;
      id += "_" + std::to_string(k);
      doc.warnings.push_back("note id '" + n.id + "' renamed to '" + id + "' to stay unique");
    }
    used.insert(id);
    ids[&n] = id;
  }

  // Global staff numbering: parts in order, local staves in order.
  struct StaffSlot {
    const PartInfo* part;
    int local;
  };
  std::vector<StaffSlot> slots;
  std::map<std::pair<std::string, int>, int> staff_number;
  for (const auto& p : score.parts) {
    int staves = p.staves;
    for (const auto& n : score.notes) {
      if (n.part_id == p.id) staves = std::max(staves, n.staff);
    }
    for (const auto& r : score.rests) {
      if (r.part_id == p.id) staves = std::max(staves, r.staff);
    }
    for (int s = 1; s <= staves; ++s) {
      slots.push_back({&p, s});
      staff_number[{p.id, s}] = static_cast<int>(slots.size());
    }
  }

  const auto measures = score.measures(std::max<Tick>(score.end_tick(), 1));

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<mei xmlns=\"http://www.music-encoding.org/ns/mei\" meiversion=\"4.0.1\">\n";
  out << "  <meiHead>\n    <fileDesc>\n      <titleStmt>\n        <title>"
      << xml::escape(score.title) << "</title>\n      </titleStmt>\n      <pubStmt/>\n"
      << "    </fileDesc>\n  </meiHead>\n";
  out << "  <music>\n    <body>\n      <mdiv>\n        <score>\n";
  const auto& ts0 = score.time_signature_at(0);
  out << "          <scoreDef meter.count=\"" << ts0.numerator << "\" meter.unit=\""
      << ts0.denominator << "\" key.sig=\"" << key_sig_value(score.key_fifths_at(0)) << "\">\n";
  out << "            <staffGrp>\n";
  for (const auto& p : score.parts) {
    std::string pid = sanitize_xml_id(p.id);
    if (pid != p.id) doc.warnings.push_back("part id '" + p.id + "' sanitized to '" + pid + "'");
    out << "              <staffGrp xml:id=\"" << xml::escape(pid) << "\" label=\""
        << xml::escape(p.name) << "\">\n";
    for (std::size_t i = 0; i < slots.size(); ++i) {
      if (slots[i].part != &p) continue;
      const int count = static_cast<int>(std::count_if(
          slots.begin(), slots.end(), [&](const StaffSlot& s) { return s.part == &p; }));
      const bool bass = count > 1 && slots[i].local == count;
      out << "                <staffDef n=\"" << (i + 1) << "\" lines=\"5\" clef.shape=\""
          << (bass ? "F" : "G") << "\" clef.line=\"" << (bass ? 4 : 2) << "\" ppq=\"" << tpq
          << "\"/>\n";
    }
    out << "              </staffGrp>\n";
  }
  out << "            </staffGrp>\n          </scoreDef>\n          <section>\n";

  // Harm anchors: first note (in score order) per onset.
  std::map<Tick, const NoteEvent*> first_at_onset;
  for (const auto& n : score.notes) first_at_onset.emplace(n.onset_tick, &n);
  std::map<Tick, std::array<int, kNumClasses>> cadence_votes;
  for (const auto& n : score.notes) {
    auto it = labels.cadences.find(n.id);
    if (it == labels.cadences.end() || it->second == CadenceClass::NoCad) continue;
    cadence_votes[n.onset_tick][static_cast<int>(it->second)]++;
  }

  for (const auto& m : measures) {
    const Tick mend = m.measure_start + m.measure_length;
    if (m.measure_index > 0) {
      bool ts_change = false;
      bool key_change = false;
      for (const auto& ts : score.time_signatures) ts_change |= ts.onset_tick == m.measure_start;
      for (const auto& ks : score.key_signatures) key_change |= ks.onset_tick == m.measure_start;
      if (ts_change || key_change) {
        out << "            <scoreDef";
        if (ts_change) {
          const auto& ts = score.time_signature_at(m.measure_start);
          out << " meter.count=\"" << ts.numerator << "\" meter.unit=\"" << ts.denominator << "\"";
        }
        if (key_change) out << " key.sig=\"" << key_sig_value(score.key_fifths_at(m.measure_start)) << "\"";
        out << "/>\n";
      }
    }
    out << "            <measure n=\"" << (m.measure_index + 1) << "\">\n";
    for (std::size_t si = 0; si < slots.size(); ++si) {
      const auto& slot = slots[si];
      std::map<int, std::vector<Event>> by_voice;
      for (const auto& n : score.notes) {
        if (n.part_id == slot.part->id && n.staff == slot.local && n.onset_tick >= m.measure_start &&
            n.onset_tick < mend) {
          by_voice[n.voice].push_back({n.onset_tick, n.duration_tick, &n});
        }
      }
      for (const auto& r : score.rests) {
        if (r.part_id == slot.part->id && r.staff == slot.local && r.onset_tick >= m.measure_start &&
            r.onset_tick < mend) {
          by_voice[r.voice].push_back({r.onset_tick, r.duration_tick, nullptr});
        }
      }
      out << "              <staff n=\"" << (si + 1) << "\">\n";
      if (by_voice.empty()) {
        out << "                <layer n=\"1\"/>\n";
      }
      for (auto& [voice, events] : by_voice) {
        std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
          return std::tie(a.onset, a.duration) < std::tie(b.onset, b.duration);
        });
        std::vector<Group> groups;
        for (const auto& ev : events) {
          if (ev.note && !groups.empty() && !groups.back().notes.empty() &&
              groups.back().onset == ev.onset && groups.back().duration == ev.duration) {
            groups.back().notes.push_back(ev.note);
            continue;
          }
          Group g{ev.onset, ev.duration, {}};
          if (ev.note) g.notes.push_back(ev.note);
          groups.push_back(std::move(g));
        }
        // Overlapping groups in one voice go to extra layers with the same @n.
        std::vector<std::vector<const Group*>> layers;
        std::vector<Tick> cursors;
        for (const auto& g : groups) {
          std::size_t li = 0;
          while (li < layers.size() && cursors[li] > g.onset) ++li;
          if (li == layers.size()) {
            layers.emplace_back();
            cursors.push_back(m.measure_start);
          }
          layers[li].push_back(&g);
          cursors[li] = g.onset + g.duration;
        }
        for (const auto& layer : layers) {
          out << "                <layer n=\"" << voice << "\">\n";
          Tick cursor = m.measure_start;
          for (const Group* g : layer) {
            if (g->onset > cursor) {
              const auto nv = detail::approximate_note_value(g->onset - cursor, tpq);
              out << "                  <space dur=\"" << nv.base << "\" dur.ppq=\""
                  << (g->onset - cursor) << "\"/>\n";
            }
            const auto nv = detail::approximate_note_value(g->duration, tpq);
            std::ostringstream dur;
            dur << " dur=\"" << nv.base << "\"";
            if (nv.dots > 0) dur << " dots=\"" << nv.dots << "\"";
            dur << " dur.ppq=\"" << g->duration << "\"";
            auto write_note = [&](const NoteEvent& n, const std::string& indent, bool with_dur) {
              out << indent << "<note xml:id=\"" << xml::escape(ids[&n]) << "\"";
              if (with_dur) out << dur.str();
              out << " pname=\"" << static_cast<char>(std::tolower(n.pitch.step)) << "\" oct=\""
                  << n.pitch.octave << "\"";
              const int implied = key_alter(score.key_fifths_at(n.onset_tick), n.pitch.step);
              if (n.pitch.alter != implied) out << " accid=\"" << accid_value(n.pitch.alter) << "\"";
              if (n.pitch.alter != 0) out << " accid.ges=\"" << accid_value(n.pitch.alter) << "\"";
              if (n.tie_prev && n.tie_next) {
                out << " tie=\"m\"";
              } else if (n.tie_next) {
                out << " tie=\"i\"";
              } else if (n.tie_prev) {
                out << " tie=\"t\"";
              }
              out << "/>\n";
            };
            if (g->notes.empty()) {
              out << "                  <rest" << dur.str() << "/>\n";
            } else if (g->notes.size() == 1) {
              write_note(*g->notes.front(), "                  ", true);
            } else {
              out << "                  <chord" << dur.str() << ">\n";
              for (const auto* n : g->notes) write_note(*n, "                    ", false);
              out << "                  </chord>\n";
            }
            cursor = std::max(cursor, g->onset + g->duration);
          }
          out << "                </layer>\n";
        }
      }
      out << "              </staff>\n";
    }

    const Tick beat = 4 * tpq / score.time_signature_at(m.measure_start).denominator;
    auto write_harm = [&](Tick onset, const std::string& text, const char* type) {
      const double tstamp = 1.0 + static_cast<double>(onset - m.measure_start) / static_cast<double>(beat);
      auto anchor = first_at_onset.find(onset);
      int staff = 1;
      out << "              <harm";
      if (type) out << " type=\"" << type << "\"";
      if (anchor != first_at_onset.end()) {
        staff = staff_number[{anchor->second->part_id, anchor->second->staff}];
        out << " staff=\"" << staff << "\" tstamp=\"" << format_beats(tstamp) << "\" startid=\"#"
            << xml::escape(ids[anchor->second]) << "\"";
      } else {
        out << " staff=\"" << staff << "\" tstamp=\"" << format_beats(tstamp) << "\"";
      }
      out << ">" << xml::escape(text) << "</harm>\n";
    };
    for (const auto& [onset, votes] : cadence_votes) {
      if (onset < m.measure_start || onset >= mend) continue;
      int best = 1;
      for (int c = 2; c < kNumClasses; ++c) {
        if (votes[c] > votes[best]) best = c;
      }
      write_harm(onset, kClassNames[best], "cadence");
    }
    for (const auto& [onset, text] : labels.roman) {
      if (onset < m.measure_start || onset >= mend) continue;
      write_harm(onset, text, "roman");
    }
    out << "            </measure>\n";
  }
  out << "          </section>\n        </score>\n      </mdiv>\n    </body>\n  </music>\n</mei>\n";
  doc.xml = out.str();
  return doc;
}

namespace {

struct MeiReader {
  Score score;
  Tick tpq = 0;
  int meter_count = 4;
  int meter_unit = 4;
  struct StaffRef {
    std::string part_id;
    int part_ordinal;
    int local;
  };
  std::map<int, StaffRef> staves;
  std::map<int, int> part_note_counter;  // by ordinal
  std::map<std::string, int> skipped;
  Tick measure_start = 0;

  void skip(const std::string& name) { skipped[name]++; }

  Tick duration_of(const xml::Element& el, Tick fallback) {
    if (const auto* ppq = el.attr("dur.ppq")) return std::stoll(*ppq);
    if (const auto* dur = el.attr("dur")) {
      int base = 0;
      try {
        base = std::stoi(*dur);
      } catch (const std::exception&) {
        if (*dur == "breve") base = 0;
      }
      Tick value = base > 0 ? 4 * tpq / base : 8 * tpq;
      Tick total = value;
      const int dots = std::stoi(el.attr_or("dots", "0"));
      for (int d = 0; d < dots; ++d) {
        value /= 2;
        total += value;
      }
      return total;
    }
    return fallback;
  }

  void read_scoredef(const xml::Element& el, Tick at) {
    if (const auto* c = el.attr("meter.count")) {
      meter_count = std::stoi(*c);
      meter_unit = std::stoi(el.attr_or("meter.unit", "4"));
      score.time_signatures.push_back({at, meter_count, meter_unit});
    }
    if (const auto* k = el.attr("key.sig")) score.key_signatures.push_back({at, parse_key_sig(*k)});
    for (const auto& c : el.children) {
      if (c.name == "staffGrp") read_staffgrp(c, -1);
    }
  }

  void read_staffgrp(const xml::Element& grp, int owner) {
    int part = owner;
    if (part < 0 && grp.attr("xml:id")) {
      score.parts.push_back({*grp.attr("xml:id"), grp.attr_or("label", *grp.attr("xml:id")), 0});
      part = static_cast<int>(score.parts.size()) - 1;
    }
    for (const auto& c : grp.children) {
      if (c.name == "staffGrp") {
        read_staffgrp(c, part);
      } else if (c.name == "staffDef") {
        int target = part;
        if (target < 0) {
          const std::string pid = "P" + std::to_string(score.parts.size() + 1);
          score.parts.push_back({pid, c.attr_or("label", pid), 0});
          target = static_cast<int>(score.parts.size()) - 1;
        }
        auto& info = score.parts[static_cast<std::size_t>(target)];
        info.staves += 1;
        staves[std::stoi(c.attr_or("n", std::to_string(staves.size() + 1)))] = {info.id, target + 1,
                                                                                 info.staves};
        if (const auto* ppq = c.attr("ppq")) {
          const Tick p = std::stoll(*ppq);
          if (tpq == 0) tpq = p;
          if (p != tpq) fail(ErrorKind::Validation, "staffDef ppq values disagree");
        }
      }
    }
  }

  void add_note(const xml::Element& el, Tick onset, Tick duration, int voice, const StaffRef& staff) {
    NoteEvent n;
    const int index = part_note_counter[staff.part_ordinal]++;
    n.id = el.attr_or("xml:id", "p" + std::to_string(staff.part_ordinal) + "-" + std::to_string(index));
    const std::string pname = el.attr_or("pname", "c");
    n.pitch.step = static_cast<char>(std::toupper(static_cast<unsigned char>(pname.empty() ? 'c' : pname[0])));
    n.pitch.octave = std::stoi(el.attr_or("oct", "4"));
    if (const auto* g = el.attr("accid.ges")) {
      n.pitch.alter = accid_alter(*g);
    } else if (const auto* a = el.attr("accid")) {
      n.pitch.alter = accid_alter(*a);
    } else {
      n.pitch.alter = key_alter(score.key_signatures.empty() ? 0 : score.key_signatures.back().fifths,
                                n.pitch.step);
    }
    const std::string tie = el.attr_or("tie", "");
    n.tie_next = tie == "i" || tie == "m";
    n.tie_prev = tie == "t" || tie == "m";
    n.onset_tick = onset;
    n.duration_tick = duration;
    n.voice = voice;
    n.staff = staff.local;
    n.part_id = staff.part_id;
    score.notes.push_back(std::move(n));
  }

  void read_layer_items(const xml::Element& parent, Tick& cursor, int voice, const StaffRef& staff,
                        Tick measure_length) {
    for (const auto& el : parent.children) {
      if (el.name == "note") {
        const Tick d = duration_of(el, tpq);
        add_note(el, cursor, d, voice, staff);
        cursor += d;
      } else if (el.name == "chord") {
        const Tick d = duration_of(el, tpq);
        for (const auto& c : el.children) {
          if (c.name == "note") {
            add_note(c, cursor, duration_of(c, d), voice, staff);
          } else {
            skip(c.name);
          }
        }
        cursor += d;
      } else if (el.name == "rest") {
        const Tick d = duration_of(el, tpq);
        score.rests.push_back({cursor, d, voice, staff.local, staff.part_id});
        cursor += d;
      } else if (el.name == "mRest") {
        score.rests.push_back({cursor, measure_length, voice, staff.local, staff.part_id});
        cursor += measure_length;
      } else if (el.name == "space") {
        cursor += duration_of(el, tpq);
      } else if (el.name == "mSpace") {
        cursor += measure_length;
      } else if (el.name == "beam" || el.name == "tuplet") {
        read_layer_items(el, cursor, voice, staff, measure_length);
      } else {
        skip(el.name);
      }
    }
  }

  void read_section(const xml::Element& section) {
    for (const auto& el : section.children) {
      if (el.name == "measure") {
        const Tick length = 4 * meter_count * tpq / meter_unit;
        for (const auto& st : el.children) {
          if (st.name != "staff") {
            if (st.name != "harm") skip(st.name);
            continue;
          }
          const int n = std::stoi(st.attr_or("n", "1"));
          auto it = staves.find(n);
          if (it == staves.end()) fail(ErrorKind::Validation, "staff n=" + std::to_string(n) + " has no staffDef");
          for (const auto& layer : st.children) {
            if (layer.name != "layer") {
              skip(layer.name);
              continue;
            }
            Tick cursor = measure_start;
            read_layer_items(layer, cursor, std::stoi(layer.attr_or("n", "1")), it->second, length);
          }
        }
        measure_start += length;
      } else if (el.name == "scoreDef") {
        read_scoredef(el, measure_start);
      } else if (el.name == "section" || el.name == "ending") {
        read_section(el);
      } else if (el.name == "pb" || el.name == "sb") {
        // layout only
      } else {
        skip(el.name);
      }
    }
  }
};

const xml::Element* find_descendant(const xml::Element& el, std::string_view name) {
  if (el.name == name) return &el;
  for (const auto& c : el.children) {
    if (const auto* f = find_descendant(c, name)) return f;
  }
  return nullptr;
}

}  // namespace

namespace {

Score parse_mei_impl(std::string_view document) {
  const xml::Element root = xml::parse(document);
  if (root.name != "mei") fail(ErrorKind::UnsupportedFormat, "expected <mei> root, found <" + root.name + ">");
  MeiReader reader;
  if (const auto* title = find_descendant(root, "title")) reader.score.title = xml::trim(title->text);
  const auto* score_el = find_descendant(root, "score");
  if (!score_el) fail(ErrorKind::Validation, "MEI document has no <score>");
  for (const auto& el : score_el->children) {
    if (el.name == "scoreDef") {
      reader.read_scoredef(el, 0);
      if (reader.tpq == 0) {
        reader.tpq = 96;
        reader.score.warnings.push_back("no ppq in staffDef; assuming 96 ticks per quarter");
      }
    } else if (el.name == "section") {
      if (reader.tpq == 0) fail(ErrorKind::Validation, "section before scoreDef");
      reader.read_section(el);
    } else {
      reader.skip(el.name);
    }
  }
  for (const auto& [name, count] : reader.skipped) {
    reader.score.warnings.push_back("skipped " + std::to_string(count) + " <" + name + "> element(s)");
  }
  reader.score.ticks_per_quarter = reader.tpq == 0 ? 1 : reader.tpq;
  reader.score.normalize();
  return std::move(reader.score);
}

}  // namespace

Score parse_mei(std::string_view document) {
  try {
    return parse_mei_impl(document);
  } catch (const std::invalid_argument& e) {
    fail(ErrorKind::Validation, std::string("invalid numeric value: ") + e.what());
  } catch (const std::out_of_range& e) {
    fail(ErrorKind::Validation, std::string("numeric value out of range: ") + e.what());
  }
}

}  // namespace scoregraph
