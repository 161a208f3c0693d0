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

#include "scoregraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "scoregraph/error.hpp"

namespace scoregraph {

void MetricConfig::validate() const {
  if (!(w_plus >= 0.0) || !(w_minus >= 0.0) || std::abs(w_plus + w_minus - 1.0) > 1e-12) {
    fail(ErrorKind::Validation, "fidelity weights must be nonnegative and sum to 1");
  }
}

double characterization(double fid_plus, double fid_minus, const MetricConfig& cfg) {
  cfg.validate();
  if (!(fid_plus >= 0.0 && fid_plus <= 1.0) || !(fid_minus >= 0.0 && fid_minus <= 1.0)) {
    fail(ErrorKind::Validation, "fidelity values must lie in [0, 1]");
  }
  if (fid_plus == 0.0 || fid_minus == 1.0) return 0.0;
  return (cfg.w_plus + cfg.w_minus) / (cfg.w_plus / fid_plus + cfg.w_minus / (1.0 - fid_minus));
}

ScoreGraph removed_subgraph(const ScoreGraph& graph, const Explanation& expl) {
  EdgeSet edges;
  for (int r = 0; r < kNumRelations; ++r) {
    const std::set<Edge> drop(expl.selected_edges[r].begin(), expl.selected_edges[r].end());
    for (const Edge& e : graph.edges[r]) {
      if (!drop.count(e)) edges[r].push_back(e);
    }
  }
  return with_edges(graph, std::move(edges));
}

ScoreGraph kept_subgraph(const ScoreGraph& graph, const Explanation& expl) {
  EdgeSet edges;
  for (int r = 0; r < kNumRelations; ++r) {
    edges[r] = expl.selected_edges[r];
    std::sort(edges[r].begin(), edges[r].end());
  }
  ScoreGraph kept = with_edges(graph, std::move(edges));
  std::vector<char> keep(graph.num_nodes(), 0);
  for (std::size_t v : expl.explanation_nodes) keep[v] = 1;
  for (std::size_t v = 0; v < kept.num_nodes(); ++v) {
    if (!keep[v]) std::fill(kept.features.row(v).begin(), kept.features.row(v).end(), 0.0);
  }
  return kept;
}

FidelityReport fidelity(const ScoreGraph& graph, const Checkpoint& ckpt, const std::vector<Explanation>& explanations,
                        const MetricConfig& cfg) {
  cfg.validate();
  if (explanations.empty()) fail(ErrorKind::Validation, "fidelity needs at least one explanation");
  const auto original = predict(graph, ckpt);
  FidelityReport report;
  for (const auto& expl : explanations) {
    const auto idx = graph.node_index(expl.target_note_id);
    if (!idx) fail(ErrorKind::NotFound, "explanation target '" + expl.target_note_id + "' not in graph");
    FidelityInstance inst;
    inst.note_id = expl.target_note_id;
    inst.method = expl.method;
    inst.original_class = static_cast<int>(original.classes[*idx]);
    inst.removed_class = static_cast<int>(predict(removed_subgraph(graph, expl), ckpt).classes[*idx]);
    inst.kept_class = static_cast<int>(predict(kept_subgraph(graph, expl), ckpt).classes[*idx]);
    inst.fid_plus = inst.removed_class != inst.original_class ? 1.0 : 0.0;
    inst.fid_minus = inst.kept_class != inst.original_class ? 1.0 : 0.0;
    report.fid_plus += inst.fid_plus;
    report.fid_minus += inst.fid_minus;
    report.instances.push_back(inst);
  }
  const auto n = static_cast<double>(report.instances.size());
  report.fid_plus /= n;
  report.fid_minus /= n;
  report.characterization = characterization(report.fid_plus, report.fid_minus, cfg);
  return report;
}

EvaluationTable evaluate(const std::vector<EvaluationPiece>& pieces, const Checkpoint& ckpt,
                         const EvaluationConfig& cfg) {
  if (pieces.empty()) fail(ErrorKind::Validation, "evaluate needs at least one piece");
  if (cfg.methods.empty()) fail(ErrorKind::Validation, "evaluate needs at least one method");
  cfg.metric.validate();
  EvaluationTable table;
  table.methods = cfg.methods;
  for (const auto& piece : pieces) {
    table.pieces.push_back(piece.name);
    std::vector<std::string> targets;
    if (cfg.instances == InstanceSource::Predicted) {
      const auto pred = predict(piece.graph, ckpt);
      for (std::size_t i = 0; i < pred.classes.size(); ++i) {
        if (pred.classes[i] != CadenceClass::NoCad) targets.push_back(pred.note_ids[i]);
      }
    } else {
      for (const auto& id : piece.graph.node_ids) {
        if (piece.annotations.label_of(id) != CadenceClass::NoCad) targets.push_back(id);
      }
    }
    std::vector<EvaluationCell> row;
    for (ExplainMethod method : cfg.methods) {
      EvaluationCell cell;
      if (!targets.empty()) {
        ExplainConfig ec;
        ec.method = method;
        ec.top_k = cfg.top_k;
        ec.ig_steps = cfg.ig_steps;
        std::vector<Explanation> explanations;
        explanations.reserve(targets.size());
        for (const auto& id : targets) explanations.push_back(explain(piece.graph, ckpt, id, ec));
        cell.report = fidelity(piece.graph, ckpt, explanations, cfg.metric);
        cell.value = cell.report.characterization;
      }
      row.push_back(std::move(cell));
    }
    table.cells.push_back(std::move(row));
  }
  return table;
}

std::string table_to_json(const EvaluationTable& table) {
  nlohmann::ordered_json j;
  std::vector<std::string> labels;
  for (auto m : table.methods) labels.push_back(method_label(m));
  j["methods"] = labels;
  auto rows = nlohmann::ordered_json::array();
  for (std::size_t p = 0; p < table.pieces.size(); ++p) {
    nlohmann::ordered_json row;
    row["piece"] = table.pieces[p];
    auto cells = nlohmann::ordered_json::object();
    for (std::size_t m = 0; m < table.methods.size(); ++m) {
      const auto& cell = table.cells[p][m];
      nlohmann::ordered_json c;
      c["characterization"] = cell.value ? nlohmann::ordered_json(*cell.value) : nlohmann::ordered_json(nullptr);
      c["fid_plus"] = cell.value ? nlohmann::ordered_json(cell.report.fid_plus) : nlohmann::ordered_json(nullptr);
      c["fid_minus"] = cell.value ? nlohmann::ordered_json(cell.report.fid_minus) : nlohmann::ordered_json(nullptr);
      c["instances"] = cell.report.instances.size();
      cells[labels[m]] = std::move(c);
    }
    row["cells"] = std::move(cells);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump(2) + "\n";
}

std::string table_to_text(const EvaluationTable& table) {
  std::size_t name_width = 5;
  for (const auto& p : table.pieces) name_width = std::max(name_width, p.size());
  std::ostringstream out;
  char buf[32];
  out << std::string("Piece") << std::string(name_width - 5, ' ');
  for (auto m : table.methods) {
    std::snprintf(buf, sizeof buf, " %6s", method_label(m));
    out << buf;
  }
  out << "\n";
  for (std::size_t p = 0; p < table.pieces.size(); ++p) {
    out << table.pieces[p] << std::string(name_width - table.pieces[p].size(), ' ');
    for (std::size_t m = 0; m < table.methods.size(); ++m) {
      const auto& cell = table.cells[p][m];
      if (cell.value) {
        std::snprintf(buf, sizeof buf, " %6.3f", *cell.value);
      } else {
        std::snprintf(buf, sizeof buf, " %6s", "N/A");
      }
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

std::string instances_to_csv(const EvaluationTable& table) {
  std::ostringstream out;
  out << "piece,note_id,method,original,removed,kept,fid_plus,fid_minus\n";
  for (std::size_t p = 0; p < table.pieces.size(); ++p) {
    for (std::size_t m = 0; m < table.methods.size(); ++m) {
      for (const auto& inst : table.cells[p][m].report.instances) {
        out << table.pieces[p] << ',' << inst.note_id << ',' << to_string(inst.method) << ','
            << kClassNames[static_cast<std::size_t>(inst.original_class)] << ','
            << kClassNames[static_cast<std::size_t>(inst.removed_class)] << ','
            << kClassNames[static_cast<std::size_t>(inst.kept_class)] << ',' << inst.fid_plus << ',' << inst.fid_minus
            << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace scoregraph
