# Copyright 2026 The scoregraph Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Writes the simplified example pieces under data/pieces.

Each piece is a short piano reduction in one part with two staves. Voices are
listed measure by measure as (pitches, duration) pairs; an empty pitch list is
a rest and several pitches form a chord.
"""

import json
import pathlib
import sys

STEPS = {"C": 0, "D": 2, "E": 4, "F": 5, "G": 7, "A": 9, "B": 11}


def parse_pitch(text):
    step = text[0]
    rest = text[1:]
    alter = 0
    while rest and rest[0] in "#b":
        alter += 1 if rest[0] == "#" else -1
        rest = rest[1:]
    return step, alter, int(rest)


def note_type(duration, divisions):
    quarters = duration / divisions
    table = [
        (4.0, "whole", 0), (3.0, "half", 1), (2.0, "half", 0), (1.5, "quarter", 1),
        (1.0, "quarter", 0), (0.75, "eighth", 1), (0.5, "eighth", 0), (0.25, "16th", 0),
    ]
    for q, name, dots in table:
        if abs(q - quarters) < 1e-9:
            return name, dots
    raise ValueError(f"no written value for {duration}/{divisions}")


def write_piece(path, title, divisions, beats, beat_type, fifths, measures):
    """measures: list of lists of (voice, staff, events)."""
    measure_len = divisions * 4 * beats // beat_type
    out = ['<?xml version="1.0" encoding="UTF-8"?>',
           '<score-partwise version="4.0">',
           f"  <work><work-title>{title}</work-title></work>",
           '  <part-list><score-part id="P1"><part-name>Piano</part-name></score-part></part-list>',
           '  <part id="P1">']
    for m_index, voices in enumerate(measures, start=1):
        out.append(f'    <measure number="{m_index}">')
        if m_index == 1:
            out.append(f"      <attributes><divisions>{divisions}</divisions><key><fifths>{fifths}</fifths></key>"
                       f"<time><beats>{beats}</beats><beat-type>{beat_type}</beat-type></time><staves>2</staves>"
                       "<clef number=\"1\"><sign>G</sign><line>2</line></clef>"
                       "<clef number=\"2\"><sign>F</sign><line>4</line></clef></attributes>")
        for v_index, (voice, staff, events) in enumerate(voices):
            if v_index > 0:
                out.append(f"      <backup><duration>{measure_len}</duration></backup>")
            total = 0
            for pitches, duration in events:
                total += duration
                name, dots = note_type(duration, divisions)
                dot_xml = "<dot/>" * dots
                if not pitches:
                    out.append(f"      <note><rest/><duration>{duration}</duration><voice>{voice}</voice>"
                               f"<type>{name}</type>{dot_xml}<staff>{staff}</staff></note>")
                    continue
                for p_index, pitch in enumerate(pitches):
                    step, alter, octave = parse_pitch(pitch)
                    chord = "<chord/>" if p_index > 0 else ""
                    alter_xml = f"<alter>{alter}</alter>" if alter else ""
                    out.append(f"      <note>{chord}<pitch><step>{step}</step>{alter_xml}<octave>{octave}</octave></pitch>"
                               f"<duration>{duration}</duration><voice>{voice}</voice><type>{name}</type>{dot_xml}"
                               f"<staff>{staff}</staff></note>")
            if total != measure_len:
                raise ValueError(f"{title}: measure {m_index} voice {voice} has {total} of {measure_len}")
        out.append("    </measure>")
    out.append("  </part>")
    out.append("</score-partwise>")
    path.write_text("\n".join(out) + "\n")


def mozart():
    # F minor siciliano, 6/8, eighth = 1.
    i = ["F3", "Ab3", "C4"]
    iv = ["Bb2", "F3", "Db4"]
    v = ["C3", "G3", "E4"]
    v7 = ["C3", "G3", "Bb3"]
    rh = [
        [(["C5"], 3), (["F5"], 2), (["E5"], 1)],
        [(["F5"], 2), (["G5"], 1), (["Ab5"], 3)],
        [(["Db5"], 3), (["Bb4"], 3)],
        [(["C5"], 3), ([], 3)],
        [(["Ab4"], 3), (["C5"], 3)],
        [(["Db5"], 3), (["Bb4"], 3)],
        [(["G4"], 3), (["E4"], 3)],
        [(["F4"], 3), ([], 3)],
    ]
    lh = [
        [(i, 3), (i, 3)],
        [(i, 3), (["F3", "Bb3", "Db4"], 3)],
        [(iv, 3), (iv, 3)],
        [(v, 3), ([], 3)],
        [(i, 3), (i, 3)],
        [(iv, 3), (iv, 3)],
        [(v7, 3), (v7, 3)],
        [(["F2", "C3", "Ab3"], 3), ([], 3)],
    ]
    measures = [[(1, 1, r), (2, 2, l)] for r, l in zip(rh, lh)]
    return "Sonata in F major K. 280, second movement (simplified)", 2, 6, 8, -4, measures, [
        {"onset_tick": 18, "class": "HC"}, {"onset_tick": 42, "class": "PAC"}]


def bach():
    # D major fugue, 4/4, sixteenth = 1.
    sop = [
        [(["D4"], 2), (["E4"], 1), (["F#4"], 1), (["G4"], 2), (["A4"], 2), (["D5"], 4), (["B4"], 2), (["G4"], 2)],
        [(["F#4"], 2), (["A4"], 2), (["G4"], 2), (["E4"], 2), (["F#4"], 4), (["D5"], 4)],
        [(["E5"], 4), (["D5"], 2), (["B4"], 2), (["D5"], 4), (["C#5"], 4)],
        [(["D5"], 8), ([], 8)],
    ]
    alto = [
        [([], 16)],
        [([], 16)],
        [([], 8), (["E4"], 4), (["G4"], 4)],
        [(["F#4"], 8), ([], 8)],
    ]
    bass = [
        [([], 16)],
        [(["A3"], 2), (["B3"], 1), (["C#4"], 1), (["D4"], 2), (["E4"], 2), (["A3"], 4), (["F#3"], 2), (["D3"], 2)],
        [(["G3"], 4), (["E3"], 4), (["A2"], 8)],
        [(["D3"], 8), ([], 8)],
    ]
    measures = [[(1, 1, s), (2, 1, a), (3, 2, b)] for s, a, b in zip(sop, alto, bass)]
    return "Fugue in D major BWV 850 (simplified)", 4, 4, 4, 2, measures, [{"onset_tick": 48, "class": "PAC"}]


def chopin():
    # C minor nocturne, 4/4, eighth = 1.
    tonic = ["G3", "C4", "Eb4"]
    rh = [
        [(["G4"], 3), (["Ab4"], 1), (["G4"], 2), (["C5"], 2)],
        [(["Eb5"], 3), (["D5"], 1), (["C5"], 2), (["Eb5"], 2)],
        [(["D5"], 3), (["C5"], 1), (["Ab4"], 2), (["F4"], 2)],
        [(["D5"], 4), ([], 4)],
        [(["G4"], 3), (["Ab4"], 1), (["G4"], 2), (["C5"], 2)],
        [(["Eb5"], 3), (["D5"], 1), (["C5"], 2), (["Ab4"], 2)],
        [(["G4"], 2), (["C5"], 2), (["B4"], 2), (["D5"], 2)],
        [(["C5"], 4), ([], 4)],
    ]
    lh = [
        [(["C3"], 2), (tonic, 2), (["G2"], 2), (tonic, 2)],
        [(["Ab2"], 2), (["Ab3", "C4", "Eb4"], 2), (["F2"], 2), (["Ab3", "C4", "F4"], 2)],
        [(["F2"], 2), (["F3", "Ab3", "C4"], 2), (["D3"], 2), (["F3", "Ab3", "B3"], 2)],
        [(["G2", "G3", "B3"], 4), ([], 4)],
        [(["C3"], 2), (tonic, 2), (["G2"], 2), (tonic, 2)],
        [(["Ab2"], 2), (["Ab3", "C4", "Eb4"], 2), (["F2"], 2), (["Ab3", "C4", "F4"], 2)],
        [(["G2"], 2), (tonic, 2), (["G2"], 2), (["G3", "B3", "F4"], 2)],
        [(["C3", "G3", "Eb4"], 4), ([], 4)],
    ]
    measures = [[(1, 1, r), (2, 2, l)] for r, l in zip(rh, lh)]
    return "Nocturne in C minor op. 48 no. 1 (simplified)", 2, 4, 4, -3, measures, [
        {"onset_tick": 24, "class": "HC"}, {"onset_tick": 56, "class": "PAC"}]


def main():
    out_dir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "data/pieces")
    out_dir.mkdir(parents=True, exist_ok=True)
    for stem, build in [("mozart_k280_2", mozart), ("bach_wtc1_fugue5", bach), ("chopin_op48_1", chopin)]:
        title, divisions, beats, beat_type, fifths, measures, labels = build()
        write_piece(out_dir / f"{stem}.musicxml", title, divisions, beats, beat_type, fifths, measures)
        (out_dir / f"{stem}.annotations.json").write_text(json.dumps(labels, indent=2) + "\n")


if __name__ == "__main__":
    main()
