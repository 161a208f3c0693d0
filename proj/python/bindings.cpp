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

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "scoregraph/corpus.hpp"
#include "scoregraph/error.hpp"
#include "scoregraph/explain.hpp"
#include "scoregraph/graph.hpp"
#include "scoregraph/mei.hpp"
#include "scoregraph/metrics.hpp"
#include "scoregraph/model.hpp"
#include "scoregraph/musicxml.hpp"
#include "scoregraph/service.hpp"
#include "scoregraph/store.hpp"
#include "scoregraph/synth.hpp"

namespace py = pybind11;
using namespace scoregraph;

namespace {

py::array_t<double> to_numpy(const Tensor& t) {
  py::array_t<double> out({t.rows(), t.cols()});
  std::copy(t.data().begin(), t.data().end(), out.mutable_data());
  return out;
}

py::object json_to_python(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

ExplainMethod method_from(const std::string& name) {
  auto m = parse_method(name);
  if (!m) fail(ErrorKind::Validation, "unknown method '" + name + "'");
  return *m;
}

py::dict edges_by_relation(const ScoreGraph& graph, const EdgeSelection& edges) {
  py::dict out;
  for (int r = 0; r < kNumRelations; ++r) {
    py::list pairs;
    for (const Edge& e : edges[r]) pairs.append(py::make_tuple(graph.node_ids[e.src], graph.node_ids[e.dst]));
    out[to_string(static_cast<RelationType>(r))] = pairs;
  }
  return out;
}

struct PyExplanation {
  Explanation expl;
  std::shared_ptr<const ScoreGraph> graph;
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Score graphs, cadence prediction and gradient explanations";

  static py::exception<Error> base(m, "ScoregraphError");
  static py::exception<Error> parse_exc(m, "ParseError", base.ptr());
  static py::exception<Error> format_exc(m, "UnsupportedFormatError", base.ptr());
  static py::exception<Error> validation_exc(m, "ValidationError", base.ptr());
  static py::exception<Error> numeric_exc(m, "NumericError", base.ptr());
  static py::exception<Error> not_found_exc(m, "NotFoundError", base.ptr());
  static py::exception<Error> io_exc(m, "IoError", base.ptr());
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      switch (e.kind()) {
        case ErrorKind::Parse: py::set_error(parse_exc, e.what()); break;
        case ErrorKind::UnsupportedFormat: py::set_error(format_exc, e.what()); break;
        case ErrorKind::Validation: py::set_error(validation_exc, e.what()); break;
        case ErrorKind::Numeric: py::set_error(numeric_exc, e.what()); break;
        case ErrorKind::NotFound: py::set_error(not_found_exc, e.what()); break;
        case ErrorKind::Io: py::set_error(io_exc, e.what()); break;
      }
    }
  });

  m.attr("CLASSES") = py::make_tuple("no-cad", "PAC", "IAC", "HC");

  py::class_<Score>(m, "Score")
      .def_readonly("title", &Score::title)
      .def_readonly("ticks_per_quarter", &Score::ticks_per_quarter)
      .def_readonly("warnings", &Score::warnings)
      .def_property_readonly("num_notes", [](const Score& s) { return s.notes.size(); })
      .def_property_readonly("note_ids",
                             [](const Score& s) {
                               std::vector<std::string> ids;
                               for (const auto& n : s.notes) ids.push_back(n.id);
                               return ids;
                             })
      .def("to_mei", [](const Score& s) { return export_mei(s).xml; })
      .def("to_musicxml", &write_musicxml)
      .def("__repr__", [](const Score& s) {
        return "<Score '" + s.title + "' with " + std::to_string(s.notes.size()) + " notes>";
      });

  m.def("parse_score", [](const std::string& doc) { return parse_score(doc); }, py::arg("document"),
        "Parse MusicXML or MEI, detected from the document root.");
  m.def("load_score", [](const std::string& path) { return parse_score(read_file(path)); }, py::arg("path"));
  m.def("score_id", [](const std::string& doc) { return sha256_hex(doc); }, py::arg("document"));

  py::class_<ScoreGraph, std::shared_ptr<ScoreGraph>>(m, "Graph")
      .def_readonly("node_ids", &ScoreGraph::node_ids)
      .def_readonly("feature_names", &ScoreGraph::feature_names)
      .def_readonly("onsets", &ScoreGraph::onsets)
      .def_property_readonly("num_nodes", &ScoreGraph::num_nodes)
      .def_property_readonly("num_edges", &ScoreGraph::num_edges)
      .def_property_readonly("features", [](const ScoreGraph& g) { return to_numpy(g.features); })
      .def_property_readonly("edges", [](const ScoreGraph& g) { return edges_by_relation(g, g.edges); })
      .def("to_json", &graph_to_json)
      .def_static("from_json", [](const std::string& text) { return std::make_shared<ScoreGraph>(graph_from_json(text)); })
      .def("__len__", &ScoreGraph::num_nodes);

  m.def(
      "build_graph",
      [](const Score& score, bool merge_rest_spans) {
        GraphOptions opts;
        opts.merge_rest_spans = merge_rest_spans;
        return std::make_shared<ScoreGraph>(build_graph(score, FeatureSpec::base_v1(), opts));
      },
      py::arg("score"), py::arg("merge_rest_spans") = true);

  py::class_<Checkpoint, std::shared_ptr<Checkpoint>>(m, "Checkpoint")
      .def_readonly("input_dim", &Checkpoint::input_dim)
      .def_readonly("feature_spec", &Checkpoint::feature_spec)
      .def_property_readonly("hidden_dim", [](const Checkpoint& c) { return c.config.hidden_dim; })
      .def_property_readonly("n_layers", [](const Checkpoint& c) { return c.config.n_layers; })
      .def_property_readonly("tensor_names",
                             [](const Checkpoint& c) {
                               std::vector<std::string> names;
                               for (const auto& [name, t] : c.tensors) names.push_back(name);
                               return names;
                             })
      .def("tensor", [](const Checkpoint& c, const std::string& name) { return to_numpy(c.tensor(name)); })
      .def("to_json", &save_checkpoint)
      .def_property_readonly("hash", [](const Checkpoint& c) { return sha256_hex(save_checkpoint(c)); })
      .def_static("from_json", [](const std::string& text) { return std::make_shared<Checkpoint>(load_checkpoint(text)); });

  m.def("load_checkpoint", [](const std::string& path) { return std::make_shared<Checkpoint>(load_checkpoint_file(path)); },
        py::arg("path"));

  m.def(
      "predict",
      [](const ScoreGraph& g, const Checkpoint& c) { return json_to_python(prediction_to_json(predict(g, c))); },
      py::arg("graph"), py::arg("checkpoint"),
      "Per-note classes and probabilities as a dict.");

  py::class_<PyExplanation>(m, "Explanation")
      .def_property_readonly("target_note_id", [](const PyExplanation& e) { return e.expl.target_note_id; })
      .def_property_readonly("method", [](const PyExplanation& e) { return std::string(to_string(e.expl.method)); })
      .def_property_readonly("target_class", [](const PyExplanation& e) { return e.expl.target_class; })
      .def_property_readonly("selected_edges",
                             [](const PyExplanation& e) { return edges_by_relation(*e.graph, e.expl.selected_edges); })
      .def_property_readonly("explanation_nodes",
                             [](const PyExplanation& e) {
                               std::vector<std::string> ids;
                               for (std::size_t v : e.expl.explanation_nodes) ids.push_back(e.graph->node_ids[v]);
                               return ids;
                             })
      .def_property_readonly("feature_mask", [](const PyExplanation& e) { return to_numpy(e.expl.feature_mask); })
      .def("to_json", [](const PyExplanation& e) { return explanation_to_json(e.expl); })
      .def("to_dict", [](const PyExplanation& e) { return json_to_python(explanation_to_json(e.expl)); });

  m.def(
      "explain",
      [](std::shared_ptr<ScoreGraph> g, const Checkpoint& c, const std::string& note, const std::string& method, int k,
         int ig_steps, std::optional<int> target_class) {
        ExplainConfig cfg;
        cfg.method = method_from(method);
        cfg.top_k = k;
        cfg.ig_steps = ig_steps;
        cfg.target_class = target_class;
        PyExplanation out{explain(*g, c, note, cfg), g};
        return out;
      },
      py::arg("graph"), py::arg("checkpoint"), py::arg("note_id"), py::arg("method") = "saliency",
      py::arg("k") = 10, py::arg("ig_steps") = 50, py::arg("target_class") = py::none(),
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "integrated_gradients",
      [](const ScoreGraph& g, const Checkpoint& c, const std::string& note, int cls, int steps) {
        const auto idx = g.node_index(note);
        if (!idx) fail(ErrorKind::NotFound, "unknown note '" + note + "'");
        const auto ig = integrated_gradients(g, c, *idx, cls, steps);
        py::dict out;
        out["features"] = to_numpy(ig.features);
        out["total"] = ig.total();
        out["f_input"] = ig.f_input;
        out["f_baseline"] = ig.f_baseline;
        return out;
      },
      py::arg("graph"), py::arg("checkpoint"), py::arg("note_id"), py::arg("target_class"), py::arg("steps") = 50,
      "Signed attributions; `total` is their sum over features and edge masks.");

  m.def(
      "characterization",
      [](double fp, double fm, double wp, double wm) { return characterization(fp, fm, MetricConfig{wp, wm}); },
      py::arg("fid_plus"), py::arg("fid_minus"), py::arg("w_plus") = 0.5, py::arg("w_minus") = 0.5);

  m.def(
      "fidelity",
      [](const ScoreGraph& g, const Checkpoint& c, const std::vector<const PyExplanation*>& explanations, double wp,
         double wm) {
        std::vector<Explanation> list;
        for (const auto* e : explanations) list.push_back(e->expl);
        const auto report = fidelity(g, c, list, MetricConfig{wp, wm});
        py::dict out;
        out["fid_plus"] = report.fid_plus;
        out["fid_minus"] = report.fid_minus;
        out["characterization"] = report.characterization;
        py::list rows;
        for (const auto& inst : report.instances) {
          py::dict row;
          row["note_id"] = inst.note_id;
          row["original"] = kClassNames[static_cast<std::size_t>(inst.original_class)];
          row["removed"] = kClassNames[static_cast<std::size_t>(inst.removed_class)];
          row["kept"] = kClassNames[static_cast<std::size_t>(inst.kept_class)];
          rows.append(row);
        }
        out["instances"] = rows;
        return out;
      },
      py::arg("graph"), py::arg("checkpoint"), py::arg("explanations"), py::arg("w_plus") = 0.5,
      py::arg("w_minus") = 0.5);

  m.def(
      "synth_corpus",
      [](std::uint64_t seed, int count) {
        py::list out;
        for (auto& piece : synth_corpus(seed, count).pieces) {
          py::dict labels;
          for (const auto& [id, cls] : piece.annotations.labels) labels[py::str(id)] = to_string(cls);
          out.append(py::make_tuple(piece.name, piece.score, labels));
        }
        return out;
      },
      py::arg("seed"), py::arg("count"), "List of (name, Score, {note_id: class}) for labeled notes.");

  py::class_<Service>(m, "Service")
      .def(py::init([](const std::string& checkpoint_path, std::optional<std::string> data_dir) {
             ServerConfig cfg;
             cfg.checkpoint_path = checkpoint_path;
             if (data_dir) cfg.data_dir = *data_dir;
             return make_service(cfg);
           }),
           py::arg("checkpoint_path"), py::arg("data_dir") = py::none())
      .def_property_readonly("checkpoint_hash", &Service::checkpoint_hash)
      .def(
          "handle",
          [](Service& s, const std::string& method, const std::string& path,
             const std::map<std::string, std::string>& query, const std::string& body) {
            HttpResponse r;
            {
              py::gil_scoped_release unlocked;
              r = s.handle(method, path, query, body);
            }
            return py::make_tuple(r.status, r.content_type, r.body);
          },
          py::arg("method"), py::arg("path"), py::arg("query") = std::map<std::string, std::string>{},
          py::arg("body") = "",
          "Returns (status, content_type, body) for one API request.");
}
