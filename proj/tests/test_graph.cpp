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

#include <chrono>
#include <numeric>

#include "doctest.h"
#include "oracles/oracles.hpp"
#include "scoregraph/corpus.hpp"
#include "scoregraph/error.hpp"
#include "scoregraph/features.hpp"
#include "scoregraph/musicxml.hpp"
#include "support.hpp"

using namespace scoregraph;
using testing::make_score;
using testing::note;
using testing::rest;

namespace {

std::vector<Edge> rel(const ScoreGraph& g, RelationType r) { return g.edges[static_cast<int>(r)]; }

std::size_t column(const ScoreGraph& g, const std::string& name) {
  const auto it = std::find(g.feature_names.begin(), g.feature_names.end(), name);
  REQUIRE(it != g.feature_names.end());
  return static_cast<std::size_t>(it - g.feature_names.begin());
}

}  // namespace

TEST_CASE("two simultaneous notes share only onset edges") {
  const auto g = build_graph(make_score({note("a", 0, 4), note("b", 0, 4, 'E')}));
  CHECK(rel(g, RelationType::Onset) == std::vector<Edge>{{0, 1}, {1, 0}});
  CHECK(rel(g, RelationType::Consecutive).empty());
  CHECK(rel(g, RelationType::During).empty());
  CHECK(rel(g, RelationType::Rest).empty());
}

TEST_CASE("consecutive and during edges") {
  const auto seq = build_graph(make_score({note("a", 0, 4), note("b", 4, 4)}));
  CHECK(rel(seq, RelationType::Consecutive) == std::vector<Edge>{{0, 1}});
  CHECK(rel(seq, RelationType::During).empty());

  const auto held = build_graph(make_score({note("a", 0, 8), note("b", 4, 2, 'E')}));
  CHECK(rel(held, RelationType::During) == std::vector<Edge>{{0, 1}});
  CHECK(rel(held, RelationType::Consecutive).empty());
}

TEST_CASE("a rest links the notes around it") {
  const auto g = build_graph(make_score({note("a", 0, 4), note("b", 8, 4)}, {rest(4, 4)}));
  CHECK(rel(g, RelationType::Rest) == std::vector<Edge>{{0, 1}});
  CHECK(rel(g, RelationType::Consecutive).empty());
}

TEST_CASE("contiguous rests merge into one silent span unless disabled") {
  const auto s = make_score({note("a", 0, 4), note("b", 12, 4)}, {rest(4, 4), rest(8, 4)});
  CHECK(rel(build_graph(s), RelationType::Rest) == std::vector<Edge>{{0, 1}});
  GraphOptions per_event;
  per_event.merge_rest_spans = false;
  CHECK(compute_edges(s, per_event)[3].empty());
}

TEST_CASE("a rest in one voice under a sounding note is not a silent span") {
  const auto s = make_score({note("a", 0, 4), note("b", 8, 4), note("held", 0, 12, 'C', 3, 0, 2)}, {rest(4, 4)});
  CHECK(rel(build_graph(s), RelationType::Rest).empty());
}

TEST_CASE("single note has no edges and an empty score is rejected") {
  const auto s = make_score({note("a", 0, 4)});
  const auto g = build_graph(s);
  CHECK(g.num_edges() == 0);
  for (const auto& set : oracle::oracle_edges(s)) CHECK(set.empty());

  Score empty;
  empty.normalize();
  CHECK_THROWS_AS(build_graph(empty), Error);
}

TEST_CASE("build_graph agrees with the brute-force oracle on 100 random scores") {
  Rng rng(100);
  const auto start = std::chrono::steady_clock::now();
  for (int trial = 0; trial < 100; ++trial) {
    const Score s = random_score(rng);
    CAPTURE(trial);
    REQUIRE(s.notes.size() <= 40);
    for (bool merge : {true, false}) {
      GraphOptions opts;
      opts.merge_rest_spans = merge;
      const auto expected = oracle::oracle_edges(s, merge);
      const auto got = oracle::as_sets(compute_edges(s, opts));
      for (int r = 0; r < kNumRelations; ++r) CHECK(got[r] == expected[r]);
    }
  }
  CHECK(std::chrono::steady_clock::now() - start < std::chrono::seconds(10));
}

TEST_CASE("graph invariants on random scores") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Score s = random_score(rng);
    const auto g = build_graph(s);
    CHECK_NOTHROW(g.validate());
    for (int r = 0; r < kNumRelations; ++r) CHECK(std::is_sorted(g.edges[r].begin(), g.edges[r].end()));
    const std::set<Edge> during(g.edges[2].begin(), g.edges[2].end());
    for (const Edge& e : g.edges[1]) CHECK_FALSE(during.count(e));
    const auto again = build_graph(s);
    CHECK(again.node_ids == g.node_ids);
    CHECK(again.edges == g.edges);
    CHECK(again.features == g.features);
  }
}

TEST_CASE("graph JSON round trip") {
  const auto g = build_graph(parse_musicxml(read_file(testing::bundled_pieces()[0])));
  const auto back = graph_from_json(graph_to_json(g));
  CHECK(back.node_ids == g.node_ids);
  CHECK(back.edges == g.edges);
  CHECK(back.features == g.features);
  CHECK(back.feature_names == g.feature_names);
  CHECK(back.onsets == g.onsets);
}

TEST_CASE("validate catches broken graphs") {
  auto g = build_graph(make_score({note("a", 0, 4), note("b", 0, 4, 'E')}));
  auto asym = g;
  asym.edges[0].pop_back();
  CHECK_THROWS_AS(asym.validate(), Error);
  auto loop = g;
  loop.edges[1].push_back({0, 0});
  CHECK_THROWS_AS(loop.validate(), Error);
  auto dup = g;
  dup.edges[2] = {{0, 1}, {0, 1}};
  CHECK_THROWS_AS(dup.validate(), Error);
}

TEST_CASE("base-v1 feature names and unknown specs") {
  const auto names = feature_names(FeatureSpec::base_v1());
  CHECK(names.size() == 40);
  CHECK(std::set<std::string>(names.begin(), names.end()).size() == 40);
  CHECK_THROWS_AS(feature_names(FeatureSpec{"nope"}), Error);
}

TEST_CASE("C4 quarter on a downbeat") {
  const auto g = build_graph(make_score({note("a", 0, 4)}));
  CHECK(g.features(0, column(g, "pitch_class_0")) == 1.0);
  CHECK(g.features(0, column(g, "octave_4")) == 1.0);
  CHECK(g.features(0, column(g, "is_downbeat")) == 1.0);
  CHECK(g.features(0, column(g, "metrical_strength")) == 1.0);
  CHECK(g.features(0, column(g, "log_duration")) == doctest::Approx(0.5));
}

TEST_CASE("C major triad sonority features") {
  const auto g = build_graph(make_score({note("c", 0, 4), note("e", 0, 4, 'E'), note("g", 0, 4, 'G')}));
  const auto c = *g.node_index("c");
  const auto e = *g.node_index("e");
  CHECK(g.features(c, column(g, "sonority_major_triad")) == 1.0);
  CHECK(g.features(c, column(g, "is_lowest_at_onset")) == 1.0);
  CHECK(g.features(c, column(g, "is_highest_at_onset")) == 0.0);
  CHECK(g.features(e, column(g, "interval_to_lowest_4")) == 1.0);
  CHECK(g.features(c, column(g, "sonority_dominant_seventh")) == 0.0);
}

TEST_CASE("dominant seventh resolution features") {
  const auto g = build_graph(make_score({note("g", 0, 4, 'G', 3), note("b", 0, 4, 'B', 3), note("d", 0, 4, 'D', 4),
                                         note("f", 0, 4, 'F', 4), note("c", 4, 4, 'C', 4), note("e", 4, 4, 'E', 4)}));
  CHECK(g.features(*g.node_index("g"), column(g, "sonority_dominant_seventh")) == 1.0);
  CHECK(g.features(*g.node_index("b"), column(g, "resolves_up_semitone")) == 1.0);
  CHECK(g.features(*g.node_index("c"), column(g, "preceded_by_dominant_seventh")) == 1.0);
  CHECK(g.features(*g.node_index("g"), column(g, "preceded_by_dominant_seventh")) == 0.0);
}

TEST_CASE("one-hot groups are exact and all values lie in [0, 1]") {
  std::vector<Score> scores;
  for (const auto& path : testing::bundled_pieces()) scores.push_back(parse_musicxml(read_file(path)));
  Rng rng(17);
  for (int i = 0; i < 20; ++i) scores.push_back(random_score(rng));
  const auto groups = one_hot_groups(FeatureSpec::base_v1());
  CHECK(groups.size() == 3);
  for (const auto& s : scores) {
    const auto fm = extract_features(s, FeatureSpec::base_v1());
    for (std::size_t v = 0; v < fm.values.rows(); ++v) {
      for (double x : fm.values.row(v)) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
      }
      for (const auto& [lo, hi] : groups) {
        double sum = 0.0;
        for (std::size_t j = lo; j < hi; ++j) sum += fm.values(v, j);
        CHECK(sum == 1.0);
      }
    }
  }
}
