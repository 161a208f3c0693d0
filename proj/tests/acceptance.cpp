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

// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "cli.hpp"
#include "oracles/oracles.hpp"
#include "scoregraph/corpus.hpp"
#include "scoregraph/mei.hpp"
#include "scoregraph/metrics.hpp"
#include "scoregraph/musicxml.hpp"
#include "scoregraph/smote.hpp"
#include "scoregraph/synth.hpp"
#include "scoregraph/train.hpp"
#include "support.hpp"

using namespace scoregraph;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const Checkpoint& toy() {
  static const Checkpoint ckpt = load_checkpoint_file(testing::toy_checkpoint_path());
  return ckpt;
}

Outcome graph_oracle() {
  const auto start = Clock::now();
  Rng rng(100);
  int mismatches = 0;
  std::size_t max_notes = 0;
  for (int i = 0; i < 100; ++i) {
    const Score s = random_score(rng);
    max_notes = std::max(max_notes, s.notes.size());
    if (oracle::as_sets(compute_edges(s)) != oracle::oracle_edges(s)) ++mismatches;
  }
  const double t = seconds_since(start);
  return {mismatches == 0 && max_notes <= 40 && t < 10.0,
          std::to_string(mismatches) + " mismatches over 100 scores (max " + std::to_string(max_notes) + " notes), " +
              fmt("%.2f s", t)};
}

std::vector<char> relu_pattern(const Tape& tape) {
  std::vector<char> out;
  for (std::size_t i = 0; i < tape.size(); ++i) {
    const auto& rec = tape.record(static_cast<int>(i));
    if (rec.op != Tape::Op::Relu) continue;
    for (double x : tape.value(rec.inputs[0]).data()) out.push_back(x > 0.0);
  }
  return out;
}

Outcome gradient_check() {
  const auto start = Clock::now();
  Rng rng(5);
  double worst = 0.0;
  std::size_t checked = 0, skipped = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = testing::random_graph(rng);
    const auto ckpt = testing::random_checkpoint(testing::small_config(), g.num_features(), rng);
    const std::size_t node = rng.below(g.num_nodes());
    const std::size_t cls = rng.below(kNumClasses);
    EdgeMask mask = uniform_mask(g);
    for (auto& m : mask) {
      for (double& x : m) x = rng.uniform(0.2, 1.0);
    }
    const std::size_t nf = g.num_nodes() * g.num_features();
    auto unpack = [&](std::span<const double> v) {
      Tensor f(g.num_nodes(), g.num_features(), std::vector<double>(v.begin(), v.begin() + nf));
      EdgeMask m;
      std::size_t pos = nf;
      for (int r = 0; r < kNumRelations; ++r) {
        m[r].assign(v.begin() + pos, v.begin() + pos + g.edges[r].size());
        pos += g.edges[r].size();
      }
      return std::make_pair(f, m);
    };
    std::vector<double> x = g.features.data();
    for (const auto& m : mask) x.insert(x.end(), m.begin(), m.end());
    const auto grad = backward(forward_with_tape(g, ckpt, &mask).tape, node, cls, BackpropMode::Standard);
    std::vector<double> analytic = grad.d_features.data();
    for (const auto& m : grad.d_edge_mask) analytic.insert(analytic.end(), m.begin(), m.end());
    const double eps = 1e-5;
    const auto numeric = finite_diff(
        [&](std::span<const double> v) {
          const auto [f, m] = unpack(v);
          return forward_with_tape(g, ckpt, &m, &f).logits(node, cls);
        },
        x, eps);
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::vector<double> lo(x), hi(x);
      lo[i] -= eps;
      hi[i] += eps;
      const auto [fl, ml] = unpack(lo);
      const auto [fh, mh] = unpack(hi);
      if (relu_pattern(forward_with_tape(g, ckpt, &ml, &fl).tape) !=
          relu_pattern(forward_with_tape(g, ckpt, &mh, &fh).tape)) {
        ++skipped;
        continue;
      }
      ++checked;
      const double denom = std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-6});
      worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
    }
  }
  const double t = seconds_since(start);
  return {worst <= 1e-4 && t < 60.0 && skipped * 20 < checked,
          "max rel err " + fmt("%.2e", worst) + " over " + std::to_string(checked) + " coords (" +
              std::to_string(skipped) + " at ReLU kinks skipped), " + fmt("%.2f s", t)};
}

Outcome ig_completeness() {
  Rng rng(3);
  double worst = 0.0;
  double worst_fine = 0.0;
  int failing = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = testing::random_graph(rng);
    const auto ckpt = testing::random_checkpoint(testing::small_config(), g.num_features(), rng);
    const std::size_t node = rng.below(g.num_nodes());
    const int cls = static_cast<int>(rng.below(kNumClasses));
    const auto ig = integrated_gradients(g, ckpt, node, cls, 200);
    const double delta = ig.f_input - ig.f_baseline;
    const double gap = std::abs(ig.total() - delta) / std::abs(delta);
    worst = std::max(worst, gap);
    failing += gap > 0.01;
    const auto fine = integrated_gradients(g, ckpt, node, cls, 100000);
    worst_fine = std::max(worst_fine, std::abs(fine.total() - delta) / std::abs(delta));
  }
  ModelConfig lin;
  lin.n_layers = 0;
  lin.hidden_dim = 6;
  lin.activation = Activation::Identity;
  lin.norm = NormKind::None;
  lin.onset_pool = OnsetPoolKind::None;
  double linear_err = 0.0;
  for (int trial = 0; trial < 5; ++trial) {
    const auto g = testing::random_graph(rng);
    const auto ckpt = testing::random_checkpoint(lin, g.num_features(), rng);
    const Tensor w = matmul(ckpt.tensor("head.0.weight"), ckpt.tensor("head.1.weight"));
    const std::size_t node = rng.below(g.num_nodes());
    for (int steps : {1, 7, 50}) {
      const auto ig = integrated_gradients(g, ckpt, node, 0, steps);
      linear_err = std::max(linear_err, std::abs(ig.total() - (ig.f_input - ig.f_baseline)));
      for (std::size_t v = 0; v < g.num_nodes(); ++v) {
        for (std::size_t j = 0; j < g.num_features(); ++j) {
          const double expect = v == node ? w(j, 0) * g.features(v, j) : 0.0;
          linear_err = std::max(linear_err, std::abs(ig.features(v, j) - expect));
        }
      }
    }
  }
  return {worst <= 0.01 && linear_err <= 1e-10,
          "worst relative gap " + fmt("%.2e", worst) + " at 200 steps (" + std::to_string(failing) +
              "/10 over 1%), " + fmt("%.2e", worst_fine) + " at 100000 steps; linear model error " +
              fmt("%.1e", linear_err)};
}

Outcome mode_degeneration() {
  Rng rng(5);
  ModelConfig cfg = testing::small_config();
  cfg.activation = Activation::Identity;
  int identical = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = testing::random_graph(rng, 12);
    const auto ckpt = testing::random_checkpoint(cfg, g.num_features(), rng);
    const auto& target = g.node_ids[rng.below(g.num_nodes())];
    ExplainConfig ec;
    ec.top_k = 3;
    std::vector<Explanation> e;
    for (auto m : {ExplainMethod::Saliency, ExplainMethod::Deconv, ExplainMethod::GuidedBackprop}) {
      ec.method = m;
      e.push_back(explain(g, ckpt, target, ec));
    }
    if (e[0].selected_edges == e[1].selected_edges && e[0].selected_edges == e[2].selected_edges) ++identical;
  }
  return {identical == 10, std::to_string(identical) + "/10 instances with identical SAL/DC/GBP rankings"};
}

Outcome metric_formulas() {
  const double a = characterization(1.0, 0.0);
  const double b = characterization(0.8, 0.2);
  bool monotone = true;
  for (int i = 0; i <= 10; ++i) {
    for (int j = 0; j <= 10; ++j) {
      const double c = characterization(i / 10.0, j / 10.0);
      if (i < 10 && characterization((i + 1) / 10.0, j / 10.0) < c) monotone = false;
      if (j < 10 && characterization(i / 10.0, (j + 1) / 10.0) > c) monotone = false;
    }
  }
  return {a == 1.0 && std::abs(b - 0.8) <= 1e-15 && monotone,
          "char(1,0)=" + fmt("%.17g", a) + ", char(0.8,0.2)=" + fmt("%.17g", b) +
              (monotone ? ", grid monotone" : ", grid NOT monotone")};
}

Outcome fidelity_oracle() {
  using testing::note;
  const auto g = build_graph(testing::make_score({note("g", 0, 8, 'G', 3), note("b", 0, 4, 'B', 3),
                                                  note("d", 0, 4, 'D', 4), note("f", 2, 2, 'F', 4),
                                                  note("c", 4, 4, 'C', 4)}));
  int cases = 0, equal = 0;
  for (auto method : {ExplainMethod::Saliency, ExplainMethod::IntegratedGradients, ExplainMethod::Deconv,
                      ExplainMethod::GuidedBackprop}) {
    for (int k : {1, 2}) {
      ExplainConfig ec;
      ec.method = method;
      ec.top_k = k;
      std::vector<Explanation> exps;
      for (const auto& id : g.node_ids) exps.push_back(explain(g, toy(), id, ec));
      const auto report = fidelity(g, toy(), exps);
      const auto manual = oracle::manual_fidelity(g, toy(), exps);
      bool same = report.fid_plus == manual.mean_plus && report.fid_minus == manual.mean_minus;
      for (std::size_t i = 0; i < exps.size(); ++i) {
        same = same && report.instances[i].fid_plus == manual.fid_plus[i] &&
               report.instances[i].fid_minus == manual.fid_minus[i];
      }
      ++cases;
      equal += same;
    }
  }
  return {equal == cases, std::to_string(equal) + "/" + std::to_string(cases) +
                              " method/k reports on the 5-note graph equal the manual recomputation"};
}

Outcome topk_contract() {
  std::vector<std::pair<std::string, ScoreGraph>> graphs;
  for (const auto& path : testing::bundled_pieces()) {
    graphs.emplace_back(fs::path(path).stem().string(), build_graph(parse_musicxml(read_file(path))));
  }
  for (const auto& p : synth_corpus(11, 6).pieces) graphs.emplace_back(p.name, build_graph(p.score));
  int explanations = 0, violations = 0;
  for (const auto& [name, g] : graphs) {
    const auto pred = predict(g, toy());
    for (auto method : {ExplainMethod::Saliency, ExplainMethod::IntegratedGradients, ExplainMethod::Deconv,
                        ExplainMethod::GuidedBackprop}) {
      ExplainConfig ec;
      ec.method = method;
      for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        if (pred.classes[i] == CadenceClass::NoCad && i >= 3) continue;
        const auto ex = explain(g, toy(), g.node_ids[i], ec);
        ++explanations;
        const auto expected = oracle::sort_topk(ex.edge_importance, g.edges, 10);
        bool ok = ex.selected_indices == expected;
        for (int r = 0; r < kNumRelations; ++r) ok = ok && ex.selected_edges[r].size() <= 10;
        violations += !ok;
      }
    }
  }
  return {violations == 0 && explanations > 0,
          std::to_string(violations) + " violations in " + std::to_string(explanations) + " explanations over " +
              std::to_string(graphs.size()) + " pieces x 4 methods"};
}

Outcome smote_balance() {
  Rng rng(21);
  int unbalanced = 0;
  double worst = 0.0;
  std::size_t synthetic = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 40 + rng.below(60);
    Tensor x(n, 8);
    for (double& v : x.data()) v = rng.uniform(-2, 2);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = i < n / 2 ? 0 : 1 + static_cast<int>(i % 3);
    const auto out = smote_oversample(x, y, 5, 1000 + static_cast<std::uint64_t>(trial));
    std::array<int, 4> counts{};
    for (int l : out.labels) ++counts[static_cast<std::size_t>(l)];
    if (!std::all_of(counts.begin(), counts.end(), [&](int c) { return c == counts[0]; })) ++unbalanced;
    for (std::size_t i = 0; i < out.provenance.size(); ++i) {
      const auto& p = out.provenance[i];
      double sq = 0.0;
      for (std::size_t j = 0; j < 8; ++j) {
        const double xb = x(static_cast<std::size_t>(p.base), j);
        const double r = (out.embeddings(n + i, j) - xb) - p.lambda * (x(static_cast<std::size_t>(p.neighbor), j) - xb);
        sq += r * r;
      }
      worst = std::max(worst, std::sqrt(sq));
      ++synthetic;
    }
  }
  return {unbalanced == 0 && worst <= 1e-9,
          std::to_string(unbalanced) + " unbalanced of 20 batches; max residual " + fmt("%.1e", worst) + " over " +
              std::to_string(synthetic) + " synthetic rows"};
}

Outcome toy_learning() {
  const auto start = Clock::now();
  const auto corpus = to_examples(synth_corpus(7, 200));
  TrainConfig cfg;
  cfg.seed = 7;
  const auto result = train(corpus, cfg, ModelConfig{});
  const double t = seconds_since(start);
  const double f1 = result.log.back().val_macro_f1;
  const bool matches_shipped = save_checkpoint(result.checkpoint) == read_file(testing::toy_checkpoint_path());
  return {f1 >= 0.8 && t < 300.0 && result.max_smote_residual <= 1e-9,
          "held-out macro-F1 " + fmt("%.4f", f1) + " after " + std::to_string(cfg.epochs) + " epochs in " +
              fmt("%.1f s", t) + "; checkpoint " + (matches_shipped ? "matches" : "differs from") +
              " data/checkpoints/toy.json"};
}

Outcome mei_round_trip() {
  std::vector<Score> scores;
  for (const auto& path : testing::bundled_pieces()) scores.push_back(parse_musicxml(read_file(path)));
  scores.push_back(parse_mei(read_file(testing::source_path("data/pieces/mozart_k280_2.mei"))));
  for (auto& p : synth_corpus(7, 200).pieces) scores.push_back(std::move(p.score));
  int failures = 0;
  for (const auto& s : scores) {
    const auto xml = export_mei(s).xml;
    bool ok = note_keys(parse_mei(xml)) == note_keys(s);
    std::set<std::string> ids;
    std::size_t count = 0;
    for (std::size_t p = xml.find("xml:id=\""); p != std::string::npos; p = xml.find("xml:id=\"", p + 1)) {
      ids.insert(xml.substr(p + 8, xml.find('"', p + 8) - p - 8));
      ++count;
    }
    ok = ok && ids.size() == count;
    failures += !ok;
  }
  return {failures == 0, std::to_string(failures) + " failures over " + std::to_string(scores.size()) +
                             " scores (4 bundled files, 200 synthetic)"};
}

Outcome end_to_end() {
  const auto base = fs::temp_directory_path() / "scoregraph-acceptance";
  fs::remove_all(base);
  std::array<std::string, 2> texts;
  std::array<std::string, 2> jsons;
  std::array<std::string, 2> csvs;
  for (int run = 0; run < 2; ++run) {
    const auto dir = (base / ("run" + std::to_string(run))).string();
    const std::string ckpt = testing::toy_checkpoint_path();
    const char* argv[] = {"scoregraph", "evaluate", "--synth-count", "6", "--methods", "saliency,gbp,deconv,ig",
                          "--checkpoint", ckpt.c_str(), "--out-dir", dir.c_str()};
    std::ostringstream out, err;
    if (cli::run_cli(10, argv, out, err) != 0) return {false, "evaluate failed: " + err.str()};
    texts[run] = read_file(fs::path(dir) / "evaluation.txt");
    jsons[run] = read_file(fs::path(dir) / "evaluation.json");
    csvs[run] = read_file(fs::path(dir) / "instances.csv");
  }
  const auto j = nlohmann::json::parse(jsons[0]);
  int cells = 0, valid = 0, na = 0;
  for (const auto& row : j["rows"]) {
    for (const auto& [label, cell] : row["cells"].items()) {
      ++cells;
      const auto& c = cell["characterization"];
      if (c.is_null()) {
        ++na;
        ++valid;
      } else if (c.get<double>() >= 0.0 && c.get<double>() <= 1.0) {
        ++valid;
      }
    }
  }
  const bool identical = texts[0] == texts[1] && jsons[0] == jsons[1] && csvs[0] == csvs[1];
  fs::remove_all(base);
  return {j["rows"].size() == 6 && j["methods"].size() == 4 && cells == 24 && valid == 24 && identical,
          std::to_string(j["rows"].size()) + " rows x " + std::to_string(j["methods"].size()) + " methods, " +
              std::to_string(valid) + "/24 cells valid (" + std::to_string(na) + " N/A), outputs " +
              (identical ? "byte-identical" : "DIFFER") + " across runs"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"graph-oracle", graph_oracle},
      {"gradient-check", gradient_check},
      {"ig-completeness", ig_completeness},
      {"mode-degeneration", mode_degeneration},
      {"metric-formulas", metric_formulas},
      {"fidelity-oracle", fidelity_oracle},
      {"topk-contract", topk_contract},
      {"smote", smote_balance},
      {"toy-learning", toy_learning},
      {"mei-round-trip", mei_round_trip},
      {"end-to-end-evaluate", end_to_end},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %-20s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
