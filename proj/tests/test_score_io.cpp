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

#include <algorithm>
#include <filesystem>
#include <functional>
#include <map>
#include <set>

#include "doctest.h"
#include "scoregraph/annotations.hpp"
#include "scoregraph/corpus.hpp"
#include "scoregraph/error.hpp"
#include "scoregraph/mei.hpp"
#include "scoregraph/musicxml.hpp"
#include "scoregraph/synth.hpp"
#include "support.hpp"

using namespace scoregraph;

namespace {

std::string partwise(const std::string& parts_list, const std::string& parts) {
  return "<?xml version=\"1.0\"?>\n<score-partwise version=\"4.0\"><part-list>" + parts_list + "</part-list>" + parts +
         "</score-partwise>";
}

const char* kQuarterC4 =
    "<part id=\"P1\"><measure number=\"1\"><attributes><divisions>2</divisions></attributes>"
    "<note><pitch><step>C</step><octave>4</octave></pitch><duration>2</duration><voice>1</voice></note>"
    "</measure></part>";

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::Io;
}

std::multiset<std::tuple<Tick, Tick, int, int>> note_multiset(const Score& s) {
  std::multiset<std::tuple<Tick, Tick, int, int>> out;
  for (const auto& n : s.notes) out.emplace(n.onset_tick, n.duration_tick, n.pitch.midi(), n.voice);
  return out;
}

/// Rescales a score onto another ticks-per-quarter value.
std::multiset<std::tuple<Tick, Tick, int, int>> rescaled(const Score& s, Tick tpq) {
  std::multiset<std::tuple<Tick, Tick, int, int>> out;
  for (const auto& n : s.notes) {
    out.emplace(n.onset_tick * tpq / s.ticks_per_quarter, n.duration_tick * tpq / s.ticks_per_quarter, n.pitch.midi(),
                n.voice);
  }
  return out;
}

}  // namespace

TEST_CASE("pitch midi numbers") {
  CHECK(Pitch{'C', 0, 4}.midi() == 60);
  CHECK(Pitch{'A', 0, 4}.midi() == 69);
  CHECK(Pitch{'B', 1, 3}.midi() == 60);
  CHECK(Pitch{'C', -1, 4}.midi() == 59);
  CHECK_FALSE(Pitch{'H', 0, 4}.valid());
  CHECK_FALSE(Pitch{'C', 3, 4}.valid());
}

TEST_CASE("one quarter note with divisions 2") {
  const Score s = parse_musicxml(partwise("<score-part id=\"P1\"><part-name>A</part-name></score-part>", kQuarterC4));
  REQUIRE(s.notes.size() == 1);
  CHECK(s.notes[0].onset_tick == 0);
  CHECK(s.notes[0].duration_tick == 2);
  CHECK(s.ticks_per_quarter == 2);
  CHECK(s.notes[0].pitch.midi() == 60);
  REQUIRE(s.time_signatures.size() == 1);
  CHECK(s.time_signatures[0] == TimeSignature{0, 4, 4});
}

TEST_CASE("divisions of different parts are brought onto their LCM") {
  const std::string p2 =
      "<part id=\"P2\"><measure number=\"1\"><attributes><divisions>3</divisions></attributes>"
      "<note><pitch><step>E</step><octave>4</octave></pitch><duration>3</duration></note>"
      "<note><pitch><step>F</step><octave>4</octave></pitch><duration>1</duration></note>"
      "</measure></part>";
  const Score s = parse_musicxml(partwise("<score-part id=\"P1\"/><score-part id=\"P2\"/>", std::string(kQuarterC4) + p2));
  CHECK(s.ticks_per_quarter == 6);
  REQUIRE(s.notes.size() == 3);
  const auto c4 = s.find_note(s.notes[0].id);
  REQUIRE(c4);
  for (const auto& n : s.notes) {
    if (n.part_id == "P1") CHECK(n.duration_tick == 6);
    if (n.pitch.midi() == 65) {
      CHECK(n.onset_tick == 6);
      CHECK(n.duration_tick == 2);
    }
  }
}

TEST_CASE("chords, backup and forward") {
  const std::string part =
      "<part id=\"P1\"><measure number=\"1\"><attributes><divisions>1</divisions><staves>2</staves></attributes>"
      "<note><pitch><step>C</step><octave>4</octave></pitch><duration>2</duration><voice>1</voice><staff>1</staff></note>"
      "<note><chord/><pitch><step>E</step><octave>4</octave></pitch><duration>2</duration><voice>1</voice><staff>1</staff></note>"
      "<note><pitch><step>G</step><octave>4</octave></pitch><duration>2</duration><voice>1</voice><staff>1</staff></note>"
      "<backup><duration>4</duration></backup>"
      "<forward><duration>1</duration></forward>"
      "<note><pitch><step>C</step><octave>3</octave></pitch><duration>3</duration><voice>2</voice><staff>2</staff></note>"
      "</measure></part>";
  const Score s = parse_musicxml(partwise("<score-part id=\"P1\"/>", part));
  REQUIRE(s.notes.size() == 4);
  std::map<int, std::pair<Tick, Tick>> by_midi;
  for (const auto& n : s.notes) by_midi[n.pitch.midi()] = {n.onset_tick, n.duration_tick};
  CHECK(by_midi[60] == std::pair<Tick, Tick>{0, 2});
  CHECK(by_midi[64] == std::pair<Tick, Tick>{0, 2});
  CHECK(by_midi[67] == std::pair<Tick, Tick>{2, 2});
  CHECK(by_midi[48] == std::pair<Tick, Tick>{1, 3});
  for (const auto& n : s.notes) {
    if (n.pitch.midi() == 48) CHECK(n.staff == 2);
  }
}

TEST_CASE("notes are sorted by onset, part, voice and pitch with unique ids") {
  const Score s = parse_musicxml(read_file(testing::bundled_pieces()[1]));
  for (std::size_t i = 1; i < s.notes.size(); ++i) {
    const auto& a = s.notes[i - 1];
    const auto& b = s.notes[i];
    CHECK(std::make_tuple(a.onset_tick, a.part_id, a.voice, a.pitch.midi()) <=
          std::make_tuple(b.onset_tick, b.part_id, b.voice, b.pitch.midi()));
  }
  std::set<std::string> ids;
  for (const auto& n : s.notes) ids.insert(n.id);
  CHECK(ids.size() == s.notes.size());
}

TEST_CASE("grace notes and ornaments are skipped with warnings") {
  const std::string part =
      "<part id=\"P1\"><measure number=\"1\"><attributes><divisions>1</divisions></attributes>"
      "<note><grace/><pitch><step>D</step><octave>4</octave></pitch><voice>1</voice></note>"
      "<note><pitch><step>C</step><octave>4</octave></pitch><duration>1</duration><notations><ornaments><trill-mark/>"
      "</ornaments></notations></note>"
      "</measure></part>";
  const Score s = parse_musicxml(partwise("<score-part id=\"P1\"/>", part));
  CHECK(s.notes.size() == 1);
  CHECK(s.warnings.size() == 2);
  CHECK(s.warnings[0].find("grace") != std::string::npos);
  CHECK(s.warnings[1].find("ornament") != std::string::npos);
}

TEST_CASE("MusicXML errors") {
  SUBCASE("malformed XML reports a position") {
    try {
      parse_musicxml("<score-partwise>\n<part-list></score-partwise>");
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Parse);
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("timewise root") {
    CHECK(kind_of([] { parse_musicxml("<score-timewise version=\"4.0\"/>"); }) == ErrorKind::UnsupportedFormat);
  }
  SUBCASE("non-positive divisions") {
    const std::string part =
        "<part id=\"P1\"><measure number=\"1\"><attributes><divisions>0</divisions></attributes></measure></part>";
    CHECK(kind_of([&] { parse_musicxml(partwise("<score-part id=\"P1\"/>", part)); }) == ErrorKind::Validation);
  }
}

TEST_CASE("duration ticks map back to the original divisions exactly") {
  const std::string p2 =
      "<part id=\"P2\"><measure number=\"1\"><attributes><divisions>3</divisions></attributes>"
      "<note><pitch><step>E</step><octave>4</octave></pitch><duration>1</duration></note>"
      "<note><pitch><step>E</step><octave>4</octave></pitch><duration>5</duration></note>"
      "</measure></part>";
  const Score s =
      parse_musicxml(partwise("<score-part id=\"P1\"/><score-part id=\"P2\"/>", std::string(kQuarterC4) + p2));
  std::vector<Tick> p2_durations;
  for (const auto& n : s.notes) {
    if (n.part_id == "P2") p2_durations.push_back(n.duration_tick * 3 / s.ticks_per_quarter);
    if (n.part_id == "P2") CHECK((n.duration_tick * 3) % s.ticks_per_quarter == 0);
  }
  std::sort(p2_durations.begin(), p2_durations.end());
  CHECK(p2_durations == std::vector<Tick>{1, 5});
}

TEST_CASE("random scores survive a MusicXML write and read") {
  Rng rng(2024);
  RandomScoreOptions opts;
  opts.allow_barline_crossing = false;
  for (int trial = 0; trial < 50; ++trial) {
    const Score truth = random_score(rng, opts);
    const Score back = parse_musicxml(write_musicxml(truth));
    CAPTURE(trial);
    CHECK(back.ticks_per_quarter % truth.ticks_per_quarter == 0);
    CHECK(rescaled(back, truth.ticks_per_quarter) == note_multiset(truth));
  }
}

TEST_CASE("synthetic pieces survive a MusicXML write and read") {
  const auto corpus = synth_corpus(5, 20);
  for (const auto& piece : corpus.pieces) {
    const Score back = parse_musicxml(write_musicxml(piece.score));
    CHECK(rescaled(back, piece.score.ticks_per_quarter) == note_multiset(piece.score));
  }
}

TEST_CASE("notes crossing a barline come back as tied pieces") {
  Score s = testing::make_score({testing::note("a", 12, 8)});
  const Score back = parse_musicxml(write_musicxml(s));
  REQUIRE(back.notes.size() == 2);
  CHECK(back.notes[0].duration_tick + back.notes[1].duration_tick == 8 * back.ticks_per_quarter / 4);
  CHECK(back.notes[0].tie_next);
  CHECK(back.notes[1].tie_prev);
}

TEST_CASE("MEI export of one note") {
  const Score s = testing::make_score({testing::note("n1", 0, 4)});
  const auto doc = export_mei(s);
  CHECK(doc.xml.find("<mei") != std::string::npos);
  CHECK(doc.xml.find("pname=\"c\"") != std::string::npos);
  CHECK(doc.xml.find("oct=\"4\"") != std::string::npos);
  CHECK(doc.xml.find("dur=\"4\"") != std::string::npos);
  CHECK(doc.xml.find("xml:id=\"n1\"") != std::string::npos);
  CHECK(doc.warnings.empty());

  const Score back = parse_mei(doc.xml);
  CHECK(note_keys(back) == note_keys(s));
  CHECK(back.time_signatures == s.time_signatures);
  CHECK(back.key_signatures == s.key_signatures);
}

TEST_CASE("MEI harm labels for cadences and roman numerals") {
  const Score s = testing::make_score({testing::note("n1", 0, 4), testing::note("n2", 4, 4, 'G')});
  MeiLabels labels;
  labels.cadences["n2"] = CadenceClass::PAC;
  labels.cadences["n1"] = CadenceClass::NoCad;
  labels.roman[0] = "I";
  const auto xml = export_mei(s, labels).xml;
  CHECK(xml.find(">PAC</harm>") != std::string::npos);
  CHECK(xml.find(">I</harm>") != std::string::npos);
  CHECK(xml.find("no-cad") == std::string::npos);
  CHECK(xml.find("startid=\"#n2\"") != std::string::npos);
  CHECK(export_mei(s, labels).xml == xml);
}

TEST_CASE("MEI export sanitizes ids and never fails") {
  const Score s = testing::make_score({testing::note("1 bad:id", 0, 4), testing::note("ok", 4, 4)});
  const auto doc = export_mei(s);
  REQUIRE(doc.warnings.size() == 1);
  CHECK(doc.warnings[0].find("sanitized") != std::string::npos);
  const Score back = parse_mei(doc.xml);
  CHECK(back.notes.size() == 2);
  CHECK(back.find_note(sanitize_xml_id("1 bad:id")));
}

TEST_CASE("MEI note without xml:id gets a synthetic id") {
  std::string xml = export_mei(testing::make_score({testing::note("n1", 0, 4)})).xml;
  const auto pos = xml.find(" xml:id=\"n1\"");
  REQUIRE(pos != std::string::npos);
  xml.erase(pos, std::string(" xml:id=\"n1\"").size());
  const Score back = parse_mei(xml);
  REQUIRE(back.notes.size() == 1);
  CHECK(back.notes[0].id == "p1-0");
}

TEST_CASE("MEI round trip on bundled, synthetic and random scores") {
  std::vector<Score> scores;
  for (const auto& path : testing::bundled_pieces()) scores.push_back(parse_musicxml(read_file(path)));
  for (auto& piece : synth_corpus(3, 30).pieces) scores.push_back(std::move(piece.score));
  Rng rng(99);
  for (int i = 0; i < 30; ++i) scores.push_back(random_score(rng));
  for (std::size_t i = 0; i < scores.size(); ++i) {
    CAPTURE(i);
    const auto doc = export_mei(scores[i]);
    const Score back = parse_mei(doc.xml);
    CHECK(note_keys(back) == note_keys(scores[i]));
    std::set<std::string> ids;
    std::size_t count = 0;
    for (std::size_t p = doc.xml.find("xml:id=\""); p != std::string::npos; p = doc.xml.find("xml:id=\"", p + 1)) {
      const auto end = doc.xml.find('"', p + 8);
      ids.insert(doc.xml.substr(p + 8, end - p - 8));
      ++count;
    }
    CHECK(ids.size() == count);
    CHECK(export_mei(back).xml == doc.xml);
  }
}

TEST_CASE("shipped Mozart MEI matches the MusicXML note count") {
  const Score from_xml = parse_musicxml(read_file(testing::bundled_pieces()[0]));
  const Score from_mei = parse_mei(read_file(testing::source_path("data/pieces/mozart_k280_2.mei")));
  CHECK(from_mei.notes.size() == from_xml.notes.size());
  CHECK(note_keys(from_mei) == note_keys(from_xml));
}

TEST_CASE("parsing and exporting are deterministic") {
  const std::string bytes = read_file(testing::bundled_pieces()[2]);
  const Score a = parse_musicxml(bytes);
  const Score b = parse_musicxml(bytes);
  CHECK(note_keys(a) == note_keys(b));
  CHECK(export_mei(a).xml == export_mei(b).xml);
  CHECK(write_musicxml(a) == write_musicxml(b));
}

TEST_CASE("annotations") {
  const Score s = testing::make_score({testing::note("a", 0, 8), testing::note("b", 8, 4, 'C', 3),
                                       testing::note("c", 8, 4, 'E'), testing::note("d", 8, 4, 'G')});
  SUBCASE("empty list") {
    const auto ann = load_annotations("[]", s);
    CHECK(ann.labels.empty());
    CHECK(ann.counts(s) == std::array<int, 4>{4, 0, 0, 0});
  }
  SUBCASE("onset form labels every note at that tick") {
    const auto ann = load_annotations(R"([{"onset_tick": 8, "class": "PAC"}])", s);
    CHECK(ann.labels.size() == 3);
    CHECK(ann.label_of("a") == CadenceClass::NoCad);
    CHECK(ann.label_of("c") == CadenceClass::PAC);
  }
  SUBCASE("id form") {
    const auto ann = load_annotations(R"([{"note_id": "a", "class": "HC"}])", s);
    CHECK(ann.label_of("a") == CadenceClass::HC);
    CHECK(load_annotations(annotations_to_json(ann, s), s).labels == ann.labels);
  }
  SUBCASE("all offenders listed in one error") {
    try {
      load_annotations(R"([{"note_id": "zz", "class": "PAC"}, {"onset_tick": 3, "class": "IAC"},
                           {"note_id": "a", "class": "XYZ"}])",
                       s);
      FAIL("no error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::Validation);
      const std::string msg = e.what();
      CHECK(msg.find("zz") != std::string::npos);
      CHECK(msg.find('3') != std::string::npos);
      CHECK(msg.find("XYZ") != std::string::npos);
    }
  }
  SUBCASE("malformed JSON") { CHECK(kind_of([&] { load_annotations("[", s); }) == ErrorKind::Parse); }
}

TEST_CASE("synthetic annotation files reproduce the planted counts") {
  const auto corpus = synth_corpus(7, 12);
  const auto dir = std::filesystem::temp_directory_path() / "scoregraph-test-annotations";
  std::filesystem::remove_all(dir);
  write_synth_corpus(corpus, 7, dir);
  const auto pieces = read_corpus_dir(dir);
  REQUIRE(pieces.size() == corpus.pieces.size());
  std::array<int, kNumClasses> counts{};
  for (const auto& p : pieces) {
    const auto c = p.annotations.counts(p.score);
    for (int k = 0; k < kNumClasses; ++k) counts[k] += c[k];
  }
  CHECK(counts == corpus.note_counts);
  std::filesystem::remove_all(dir);
}

TEST_CASE("normalize rejects duplicate ids and inserts the default meter") {
  Score s;
  s.parts.push_back({"P1", "", 1});
  s.notes = {testing::note("x", 0, 1), testing::note("x", 1, 1)};
  CHECK(kind_of([&] { s.normalize(); }) == ErrorKind::Validation);
  Score t = testing::make_score({testing::note("x", 0, 1)});
  REQUIRE(t.time_signatures.size() == 1);
  CHECK(t.time_signatures[0].onset_tick == 0);
}
