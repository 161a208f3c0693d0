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

"""Score graphs, cadence prediction and gradient explanations."""

from pathlib import Path

from ._core import (
    CLASSES,
    Checkpoint,
    Explanation,
    Graph,
    IoError,
    NotFoundError,
    NumericError,
    ParseError,
    Score,
    ScoregraphError,
    Service,
    UnsupportedFormatError,
    ValidationError,
    build_graph,
    characterization,
    explain,
    fidelity,
    integrated_gradients,
    load_checkpoint,
    load_score,
    parse_score,
    predict,
    score_id,
    synth_corpus,
)

__all__ = [
    "CLASSES",
    "Checkpoint",
    "Explanation",
    "Graph",
    "IoError",
    "NotFoundError",
    "NumericError",
    "ParseError",
    "Score",
    "ScoregraphError",
    "Service",
    "UnsupportedFormatError",
    "ValidationError",
    "build_graph",
    "characterization",
    "explain",
    "explain_all",
    "fidelity",
    "integrated_gradients",
    "load_checkpoint",
    "load_score",
    "parse_score",
    "predict",
    "score_id",
    "synth_corpus",
]

__version__ = "0.1.0"


def explain_all(graph, checkpoint, method="saliency", k=10, ig_steps=50):
    """Explanations for every note the model predicts as a cadence."""
    predictions = predict(graph, checkpoint)["predictions"]
    return [
        explain(graph, checkpoint, p["note_id"], method=method, k=k, ig_steps=ig_steps)
        for p in predictions
        if p["class"] != "no-cad"
    ]
