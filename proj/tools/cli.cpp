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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "scoregraph/corpus.hpp"
#include "scoregraph/error.hpp"
#include "scoregraph/explain.hpp"
#include "scoregraph/metrics.hpp"
#include "scoregraph/model.hpp"
#include "scoregraph/service.hpp"
#include "scoregraph/store.hpp"
#include "scoregraph/synth.hpp"
#include "scoregraph/train.hpp"

#ifndef SCOREGRAPH_DEFAULT_CHECKPOINT
#define SCOREGRAPH_DEFAULT_CHECKPOINT "data/checkpoints/toy.json"
#endif

namespace scoregraph::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  std::replace(s.begin(), s.end(), '\r', ' ');
  return s;
}

struct Common {
  std::string checkpoint = env_or("SCOREGRAPH_CHECKPOINT", SCOREGRAPH_DEFAULT_CHECKPOINT);
  std::string data_dir = env_or("SCOREGRAPH_DATA_DIR", "scoregraph-data");
};

void emit(std::ostream& out, const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    write_file(path, text);
  }
}

/// A file path, or the id of a score already in the data directory.
ScoreRecord resolve_score(const std::string& ref, const Common& common, const Checkpoint& ckpt) {
  if (fs::is_regular_file(ref)) return build_record(read_file(ref), ckpt);
  const fs::path stored = fs::path(common.data_dir) / "scores" / (ref + ".xml");
  if (fs::is_regular_file(stored)) return build_record(read_file(stored), ckpt);
  fail(ErrorKind::NotFound, "score '" + ref + "' is neither a file nor a stored score id");
}

std::vector<ExplainMethod> parse_methods(const std::string& list) {
  std::vector<ExplainMethod> methods;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto m = parse_method(item);
    if (!m) throw UsageError("unknown method '" + item + "' (expected saliency, ig, deconv, gbp)");
    methods.push_back(*m);
  }
  if (methods.empty()) throw UsageError("no methods given");
  return methods;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Score graphs, cadence prediction and gradient explanations", "scoregraph"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  Common common;
  std::function<void()> action;

  // ingest
  std::string ingest_input;
  auto* ingest = app.add_subcommand("ingest", "Store a MusicXML or MEI score and write its MEI and graph");
  ingest->add_option("--input", ingest_input, "Score file")->required();
  ingest->add_option("--data-dir", common.data_dir, "Score store directory (env SCOREGRAPH_DATA_DIR)");
  ingest->add_option("--checkpoint", common.checkpoint, "Checkpoint JSON (env SCOREGRAPH_CHECKPOINT)");
  ingest->callback([&] {
    action = [&] {
      auto ckpt = std::make_shared<const Checkpoint>(load_checkpoint_file(common.checkpoint));
      ScoreStore store(ckpt, fs::path(common.data_dir));
      const std::string id = store.add(read_file(ingest_input));
      const auto rec = store.get(id);
      const fs::path dir = fs::path(common.data_dir) / "scores";
      write_file(dir / (id + ".mei"), record_mei(*rec));
      write_file(dir / (id + ".graph.json"), graph_to_json(rec->graph));
      nlohmann::ordered_json j;
      j["score_id"] = id;
      j["notes"] = rec->graph.num_nodes();
      nlohmann::ordered_json counts = nlohmann::ordered_json::object();
      for (int r = 0; r < kNumRelations; ++r) counts[to_string(kRelations[r])] = rec->graph.edges[r].size();
      j["edge_counts"] = std::move(counts);
      j["warnings"] = rec->score.warnings;
      out << j.dump() << "\n";
    };
  });

  // predict
  std::string predict_score, predict_out;
  auto* predict_cmd = app.add_subcommand("predict", "Per-note cadence predictions as JSON");
  predict_cmd->add_option("--score", predict_score, "Score file or stored score id")->required();
  predict_cmd->add_option("--checkpoint", common.checkpoint, "Checkpoint JSON");
  predict_cmd->add_option("--data-dir", common.data_dir, "Score store directory");
  predict_cmd->add_option("--out", predict_out, "Output file (default stdout)");
  predict_cmd->callback([&] {
    action = [&] {
      const auto ckpt = load_checkpoint_file(common.checkpoint);
      const auto rec = resolve_score(predict_score, common, ckpt);
      emit(out, prediction_to_json(rec.predictions), predict_out);
    };
  });

  // explain
  std::string explain_score, explain_note, explain_method = "saliency", explain_out, explain_class;
  int explain_k = 10;
  int explain_steps = 50;
  auto* explain_cmd = app.add_subcommand("explain", "Explanation JSON for one note");
  explain_cmd->add_option("--score", explain_score, "Score file or stored score id")->required();
  explain_cmd->add_option("--note", explain_note, "Target note id")->required();
  explain_cmd->add_option("--method", explain_method, "saliency, ig, deconv or gbp");
  explain_cmd->add_option("--k", explain_k, "Edges kept per relation")->check(CLI::PositiveNumber);
  explain_cmd->add_option("--ig-steps", explain_steps, "Integrated-gradients steps")->check(CLI::PositiveNumber);
  explain_cmd->add_option("--target-class", explain_class, "Explain this class instead of the prediction");
  explain_cmd->add_option("--checkpoint", common.checkpoint, "Checkpoint JSON");
  explain_cmd->add_option("--data-dir", common.data_dir, "Score store directory");
  explain_cmd->add_option("--out", explain_out, "Output file (default stdout)");
  explain_cmd->callback([&] {
    action = [&] {
      ExplainConfig cfg;
      const auto m = parse_method(explain_method);
      if (!m) throw UsageError("unknown method '" + explain_method + "'");
      cfg.method = *m;
      cfg.top_k = explain_k;
      cfg.ig_steps = explain_steps;
      if (!explain_class.empty()) {
        const auto c = parse_cadence_class(explain_class);
        if (!c) throw UsageError("unknown class '" + explain_class + "'");
        cfg.target_class = static_cast<int>(*c);
      }
      const auto ckpt = load_checkpoint_file(common.checkpoint);
      const auto rec = resolve_score(explain_score, common, ckpt);
      emit(out, explanation_to_json(explain(rec.graph, ckpt, explain_note, cfg)), explain_out);
    };
  });

  // evaluate
  std::vector<std::string> eval_inputs;
  std::string eval_methods = "saliency,gbp,deconv,ig", eval_out_dir, eval_instances = "predicted", eval_corpus;
  int eval_synth_count = 0;
  std::uint64_t eval_synth_seed = 11;
  int eval_k = 10;
  int eval_steps = 50;
  auto* eval_cmd = app.add_subcommand("evaluate", "Characterization table over pieces and methods");
  eval_cmd->add_option("--input", eval_inputs, "Score files (annotations read from <stem>.annotations.json)");
  eval_cmd->add_option("--corpus", eval_corpus, "Corpus directory written by synth");
  eval_cmd->add_option("--synth-count", eval_synth_count, "Generate this many synthetic pieces instead");
  eval_cmd->add_option("--synth-seed", eval_synth_seed, "Seed for --synth-count");
  eval_cmd->add_option("--methods", eval_methods, "Comma-separated methods");
  eval_cmd->add_option("--k", eval_k, "Edges kept per relation")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--ig-steps", eval_steps, "Integrated-gradients steps")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--instances", eval_instances, "predicted or annotated")
      ->check(CLI::IsMember({"predicted", "annotated"}));
  eval_cmd->add_option("--checkpoint", common.checkpoint, "Checkpoint JSON");
  eval_cmd->add_option("--out-dir", eval_out_dir, "Write evaluation.json, evaluation.txt and instances.csv here");
  eval_cmd->callback([&] {
    action = [&] {
      EvaluationConfig cfg;
      cfg.methods = parse_methods(eval_methods);
      cfg.top_k = eval_k;
      cfg.ig_steps = eval_steps;
      cfg.instances = eval_instances == "annotated" ? InstanceSource::Annotated : InstanceSource::Predicted;
      std::vector<LoadedPiece> pieces;
      for (const auto& path : eval_inputs) pieces.push_back(load_piece_file(path));
      if (!eval_corpus.empty()) {
        auto more = read_corpus_dir(eval_corpus);
        pieces.insert(pieces.end(), more.begin(), more.end());
      }
      if (eval_synth_count > 0) {
        auto more = loaded_pieces(synth_corpus(eval_synth_seed, eval_synth_count));
        pieces.insert(pieces.end(), more.begin(), more.end());
      }
      if (pieces.empty()) throw UsageError("evaluate needs --input, --corpus or --synth-count");
      const auto ckpt = load_checkpoint_file(common.checkpoint);
      const auto table = evaluate(to_evaluation_pieces(pieces), ckpt, cfg);
      const std::string text = table_to_text(table);
      if (!eval_out_dir.empty()) {
        write_file(fs::path(eval_out_dir) / "evaluation.json", table_to_json(table));
        write_file(fs::path(eval_out_dir) / "evaluation.txt", text);
        write_file(fs::path(eval_out_dir) / "instances.csv", instances_to_csv(table));
      }
      out << text;
    };
  });

  // train
  std::string train_corpus, train_out, train_log;
  int train_synth_count = 0;
  TrainConfig train_cfg;
  ModelConfig model_cfg;
  auto* train_cmd = app.add_subcommand("train", "Train a checkpoint");
  train_cmd->add_option("--corpus", train_corpus, "Corpus directory written by synth");
  train_cmd->add_option("--synth-count", train_synth_count, "Generate a synthetic corpus of this size (seed = --seed)");
  train_cmd->add_option("--seed", train_cfg.seed, "Seed for everything random");
  train_cmd->add_option("--epochs", train_cfg.epochs, "Epochs")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--lr", train_cfg.learning_rate, "Learning rate")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--k-nn", train_cfg.k_nn, "SMOTE neighbors")->check(CLI::PositiveNumber);
  train_cmd->add_option("--val-fraction", train_cfg.validation_fraction, "Held-out fraction")->check(CLI::Range(0.0, 0.99));
  train_cmd->add_option("--hidden", model_cfg.hidden_dim, "Hidden width")->check(CLI::PositiveNumber);
  train_cmd->add_option("--layers", model_cfg.n_layers, "Encoder layers")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--out", train_out, "Checkpoint path")->required();
  train_cmd->add_option("--log", train_log, "Metrics log (JSON lines)");
  train_cmd->callback([&] {
    action = [&] {
      std::vector<TrainExample> examples;
      if (!train_corpus.empty()) examples = to_examples(read_corpus_dir(train_corpus));
      if (train_synth_count > 0) {
        auto more = to_examples(synth_corpus(train_cfg.seed, train_synth_count));
        examples.insert(examples.end(), more.begin(), more.end());
      }
      if (examples.empty()) throw UsageError("train needs --corpus or --synth-count");
      std::ostringstream log;
      const auto result = train(examples, train_cfg, model_cfg, [&](const EpochMetrics& m) {
        log << epoch_metrics_json(m) << "\n";
      });
      save_checkpoint_file(result.checkpoint, train_out);
      if (!train_log.empty()) write_file(train_log, log.str());
      out << epoch_metrics_json(result.log.back()) << "\n";
    };
  });

  // synth
  std::uint64_t synth_seed = 7;
  int synth_count = 200;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Write a synthetic labeled corpus");
  synth_cmd->add_option("--seed", synth_seed, "Generator seed");
  synth_cmd->add_option("--count", synth_count, "Number of pieces")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--out-dir", synth_out, "Output directory")->required();
  synth_cmd->callback([&] {
    action = [&] {
      const auto corpus = synth_corpus(synth_seed, synth_count);
      write_synth_corpus(corpus, synth_seed, synth_out);
      nlohmann::ordered_json j;
      j["pieces"] = corpus.pieces.size();
      j["phrase_counts"] = corpus.phrase_counts;
      j["note_counts"] = corpus.note_counts;
      out << j.dump() << "\n";
    };
  });

  // serve
  ServerConfig server_cfg;
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP JSON service");
  serve_cmd->add_option("--host", server_cfg.host, "Listen address");
  serve_cmd->add_option("--port", server_cfg.port, "Listen port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--checkpoint", common.checkpoint, "Checkpoint JSON");
  serve_cmd->add_option("--data-dir", common.data_dir, "Score store directory");
  serve_cmd->callback([&] {
    action = [&] {
      server_cfg.checkpoint_path = common.checkpoint;
      server_cfg.data_dir = fs::path(common.data_dir);
      auto service = make_service(server_cfg);
      HttpServer server(*service);
      const int port = server.bind(server_cfg.host, server_cfg.port);
      err << "scoregraph: listening on " << server_cfg.host << ":" << port << std::endl;
      server.run();
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "scoregraph: usage_error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  try {
    if (action) action();
    return kExitOk;
  } catch (const UsageError& e) {
    err << "scoregraph: usage_error: " << one_line(e.what()) << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "scoregraph: " << to_string(e.kind()) << ": " << one_line(e.what()) << "\n";
    return e.kind() == ErrorKind::Numeric ? kExitNumeric : kExitData;
  } catch (const std::exception& e) {
    err << "scoregraph: io_error: " << one_line(e.what()) << "\n";
    return kExitData;
  }
}

}  // namespace scoregraph::cli
