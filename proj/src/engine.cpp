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

#include "scoregraph/engine.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "scoregraph/error.hpp"
#include "scoregraph/model.hpp"

namespace scoregraph {

const char* to_string(BackpropMode mode) {
  switch (mode) {
    case BackpropMode::Standard: return "standard";
    case BackpropMode::Deconv: return "deconv";
    case BackpropMode::Guided: return "guided";
  }
  return "standard";
}

EdgeMask uniform_mask(const ScoreGraph& graph, double value) {
  EdgeMask m;
  for (int r = 0; r < kNumRelations; ++r) m[r].assign(graph.edges[r].size(), value);
  return m;
}

Tape::Tape(EdgeSet edges, std::vector<Tick> onsets) : edges_(std::move(edges)) {
  const std::size_t n = onsets.size();
  for (int r = 0; r < kNumRelations; ++r) {
    std::vector<int> deg(n, 0);
    for (const auto& e : edges_[r]) deg[static_cast<std::size_t>(e.dst)]++;
    inv_in_degree_[r].resize(n);
    for (std::size_t v = 0; v < n; ++v) inv_in_degree_[r][v] = deg[v] > 0 ? 1.0 / deg[v] : 0.0;
  }
  std::map<Tick, int> group_of;
  onset_group_.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    auto [it, inserted] = group_of.emplace(onsets[v], static_cast<int>(group_of.size()));
    onset_group_[v] = it->second;
  }
  std::vector<int> counts(group_of.size(), 0);
  for (int g : onset_group_) counts[static_cast<std::size_t>(g)]++;
  group_inv_size_.resize(counts.size());
  for (std::size_t g = 0; g < counts.size(); ++g) group_inv_size_[g] = 1.0 / counts[g];
}

int Tape::push(Record r) {
  records_.push_back(std::move(r));
  return static_cast<int>(records_.size()) - 1;
}

const Tensor& Tape::value(int id) const {
  const auto& r = records_.at(static_cast<std::size_t>(id));
  return r.external ? *r.external : r.value;
}

int Tape::input(std::string name, Tensor value) {
  Record r;
  r.op = Op::Input;
  r.value = std::move(value);
  r.name = std::move(name);
  return push(std::move(r));
}

int Tape::param(std::string name, const Tensor& value) {
  Record r;
  r.op = Op::Param;
  r.external = &value;
  r.name = std::move(name);
  return push(std::move(r));
}

namespace {

std::vector<const Tensor*> gather_inputs(const Tape& tape, const std::vector<int>& ids) {
  std::vector<const Tensor*> in;
  in.reserve(ids.size());
  for (int id : ids) in.push_back(&tape.value(id));
  return in;
}

}  // namespace

Tensor Tape::evaluate(const Record& r, const std::vector<const Tensor*>& in) const {
  switch (r.op) {
    case Op::Input:
    case Op::Param:
      return r.value;
    case Op::Aggregate: {
      const Tensor& h = *in[0];
      const Tensor& mask = *in[1];
      const auto& edges = edges_[r.aux];
      const auto& inv = inv_in_degree_[r.aux];
      if (mask.size() != edges.size()) {
        fail(ErrorKind::Validation, std::string("edge mask for relation ") +
                                        to_string(static_cast<RelationType>(r.aux)) + " has " +
                                        std::to_string(mask.size()) + " entries, expected " +
                                        std::to_string(edges.size()));
      }
      Tensor out(h.rows(), h.cols());
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto src = static_cast<std::size_t>(edges[e].src);
        const auto dst = static_cast<std::size_t>(edges[e].dst);
        const double w = mask.data()[e];
        if (w == 0.0) continue;
        auto o = out.row(dst);
        auto s = h.row(src);
        for (std::size_t j = 0; j < o.size(); ++j) o[j] += w * s[j];
      }
      for (std::size_t v = 0; v < out.rows(); ++v) {
        const double k = inv[v];
        if (k == 1.0) continue;
        for (double& x : out.row(v)) x *= k;
      }
      return out;
    }
    case Op::SliceRows: {
      const Tensor& x = *in[0];
      Tensor out(r.hi - r.lo, x.cols());
      std::copy(x.data().begin() + static_cast<std::ptrdiff_t>(r.lo * x.cols()),
                x.data().begin() + static_cast<std::ptrdiff_t>(r.hi * x.cols()), out.data().begin());
      return out;
    }
    case Op::MatMul:
      return scoregraph::matmul(*in[0], *in[1]);
    case Op::AddBias: {
      Tensor out = *in[0];
      const Tensor& b = *in[1];
      if (b.rows() != 1 || b.cols() != out.cols()) {
        fail(ErrorKind::Validation, "bias '" + records_[static_cast<std::size_t>(r.inputs[1])].name +
                                        "' shape " + b.shape_string() + " does not fit " +
                                        out.shape_string());
      }
      for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        for (std::size_t j = 0; j < row.size(); ++j) row[j] += b.data()[j];
      }
      return out;
    }
    case Op::Sum: {
      Tensor out = *in[0];
      for (std::size_t k = 1; k < in.size(); ++k) out += *in[k];
      return out;
    }
    case Op::Relu: {
      Tensor out = *in[0];
      for (double& v : out.data()) v = v > 0.0 ? v : 0.0;
      return out;
    }
    case Op::L2Normalize: {
      Tensor out = *in[0];
      for (std::size_t i = 0; i < out.rows(); ++i) {
        auto row = out.row(i);
        double sq = 0.0;
        for (double v : row) sq += v * v;
        const double denom = std::max(std::sqrt(sq), r.eps);
        for (double& v : row) v /= denom;
      }
      return out;
    }
    case Op::OnsetPool: {
      const Tensor& x = *in[0];
      Tensor sums(group_inv_size_.size(), x.cols());
      for (std::size_t v = 0; v < x.rows(); ++v) {
        auto s = sums.row(static_cast<std::size_t>(onset_group_[v]));
        auto xr = x.row(v);
        for (std::size_t j = 0; j < s.size(); ++j) s[j] += xr[j];
      }
      Tensor out = x;
      for (std::size_t v = 0; v < x.rows(); ++v) {
        const auto g = static_cast<std::size_t>(onset_group_[v]);
        const double k = group_inv_size_[g];
        auto o = out.row(v);
        auto s = sums.row(g);
        for (std::size_t j = 0; j < o.size(); ++j) o[j] += k * s[j];
      }
      return out;
    }
    case Op::RowMix: {
      const Tensor& x = *in[0];
      const auto& rows = mixes_[static_cast<std::size_t>(r.aux)];
      Tensor out(rows.size(), x.cols());
      for (std::size_t i = 0; i < rows.size(); ++i) {
        auto o = out.row(i);
        for (const auto& [src, c] : rows[i]) {
          auto s = x.row(static_cast<std::size_t>(src));
          for (std::size_t j = 0; j < o.size(); ++j) o[j] += c * s[j];
        }
      }
      return out;
    }
  }
  return {};
}

int Tape::aggregate(int h, int mask, RelationType relation) {
  Record r;
  r.op = Op::Aggregate;
  r.inputs = {h, mask};
  r.aux = static_cast<int>(relation);
  r.value = evaluate(r, gather_inputs(*this, r.inputs));
  return push(std::move(r));
}

int Tape::slice_rows(int x, std::size_t lo, std::size_t hi) {
  Record r;
  r.op = Op::SliceRows;
  r.inputs = {x};
  r.lo = lo;
  r.hi = hi;
  if (hi < lo || hi > value(x).rows()) fail(ErrorKind::Validation, "row slice out of range");
  r.value = evaluate(r, gather_inputs(*this, r.inputs));
  return push(std::move(r));
}

int Tape::matmul(int a, int b) {
  Record r;
  r.op = Op::MatMul;
  r.inputs = {a, b};
  if (value(a).cols() != value(b).rows()) {
    fail(ErrorKind::Validation, "matmul shape mismatch: '" + records_[static_cast<std::size_t>(b)].name +
                                    "' is " + value(b).shape_string() + ", input is " +
                                    value(a).shape_string());
  }
  r.value = evaluate(r, gather_inputs(*this, r.inputs));
  return push(std::move(r));
}

int Tape::add_bias(int x, int bias) {
  Record r;
  r.op = Op::AddBias;
  r.inputs = {x, bias};
  r.value = evaluate(r, gather_inputs(*this, r.inputs));
  return push(std::move(r));
}

int Tape::sum(std::vector<int> terms) {
  Record r;
  r.op = Op::Sum;
  r.inputs = std::move(terms);
  r.value = evaluate(r, gather_inputs(*this, r.inputs));
  return push(std::move(r));
}

int Tape::relu(int x) {
  Record r;
  r.op = Op::Relu;
  r.inputs = {x};
  r.value = evaluate(r, gather_inputs(*this, r.inputs));
  return push(std::move(r));
}

int Tape::l2_normalize(int x, double eps) {
  Record r;
  r.op = Op::L2Normalize;
  r.inputs = {x};
  r.eps = eps;
  r.value = evaluate(r, gather_inputs(*this, r.inputs));
  return push(std::move(r));
}

int Tape::onset_pool(int x) {
  Record r;
  r.op = Op::OnsetPool;
  r.inputs = {x};
  if (value(x).rows() != onset_group_.size()) {
    fail(ErrorKind::Validation, "onset pool input has " + std::to_string(value(x).rows()) +
                                    " rows, expected " + std::to_string(onset_group_.size()));
  }
  r.value = evaluate(r, gather_inputs(*this, r.inputs));
  return push(std::move(r));
}

int Tape::row_mix(int x, std::vector<MixRow> rows) {
  Record r;
  r.op = Op::RowMix;
  r.inputs = {x};
  r.aux = static_cast<int>(mixes_.size());
  mixes_.push_back(std::move(rows));
  r.value = evaluate(r, gather_inputs(*this, r.inputs));
  return push(std::move(r));
}

Tensor Tape::replay(int output_id) const {
  std::vector<Tensor> values(records_.size());
  auto val = [&](int id) -> const Tensor& {
    const auto& rec = records_[static_cast<std::size_t>(id)];
    if (rec.op == Op::Param) return *rec.external;
    return values[static_cast<std::size_t>(id)];
  };
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& rec = records_[i];
    if (rec.op == Op::Param) continue;
    if (rec.op == Op::Input) {
      values[i] = rec.value;
      continue;
    }
    std::vector<const Tensor*> in;
    for (int id : rec.inputs) in.push_back(&val(id));
    values[i] = evaluate(rec, in);
  }
  return val(output_id);
}

std::vector<Tensor> Tape::backprop(int output_id, const Tensor& seed, BackpropMode mode,
                                   bool param_grads) const {
  std::vector<Tensor> grads(records_.size());
  if (!seed.same_shape(value(output_id))) {
    fail(ErrorKind::Validation, "seed shape " + seed.shape_string() + " does not match output " +
                                    value(output_id).shape_string());
  }
  grads[static_cast<std::size_t>(output_id)] = seed;

  // Which records lead to something we need a gradient for.
  std::vector<char> wanted(records_.size(), 0);
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& rec = records_[i];
    if (rec.op == Op::Input) wanted[i] = 1;
    if (rec.op == Op::Param) wanted[i] = param_grads ? 1 : 0;
    for (int id : rec.inputs) wanted[i] |= wanted[static_cast<std::size_t>(id)];
  }

  auto accumulate = [&](int id) -> Tensor& {
    auto& g = grads[static_cast<std::size_t>(id)];
    if (g.empty() && !value(id).empty()) g = Tensor(value(id).rows(), value(id).cols());
    return g;
  };
  auto needs = [&](int id) { return wanted[static_cast<std::size_t>(id)] != 0; };

  for (int i = output_id; i >= 0; --i) {
    const auto& rec = records_[static_cast<std::size_t>(i)];
    const Tensor& g = grads[static_cast<std::size_t>(i)];
    if (g.empty() || rec.op == Op::Input || rec.op == Op::Param) continue;
    switch (rec.op) {
      case Op::Aggregate: {
        const int h_id = rec.inputs[0];
        const int m_id = rec.inputs[1];
        const Tensor& h = value(h_id);
        const Tensor& mask = value(m_id);
        const auto& edges = edges_[rec.aux];
        const auto& inv = inv_in_degree_[rec.aux];
        Tensor* gh = needs(h_id) ? &accumulate(h_id) : nullptr;
        Tensor* gm = needs(m_id) ? &accumulate(m_id) : nullptr;
        for (std::size_t e = 0; e < edges.size(); ++e) {
          const auto src = static_cast<std::size_t>(edges[e].src);
          const auto dst = static_cast<std::size_t>(edges[e].dst);
          const double k = inv[dst];
          auto gv = g.row(dst);
          if (gh) {
            const double w = mask.data()[e] * k;
            auto out = gh->row(src);
            for (std::size_t j = 0; j < out.size(); ++j) out[j] += w * gv[j];
          }
          if (gm) {
            auto hs = h.row(src);
            double dot = 0.0;
            for (std::size_t j = 0; j < hs.size(); ++j) dot += hs[j] * gv[j];
            gm->data()[e] += k * dot;
          }
        }
        break;
      }
      case Op::SliceRows: {
        const int x_id = rec.inputs[0];
        if (!needs(x_id)) break;
        Tensor& gx = accumulate(x_id);
        const std::size_t cols = gx.cols();
        for (std::size_t k = 0; k < g.size(); ++k) gx.data()[rec.lo * cols + k] += g.data()[k];
        break;
      }
      case Op::MatMul: {
        const int a_id = rec.inputs[0];
        const int b_id = rec.inputs[1];
        if (needs(a_id)) matmul_nt_acc(g, value(b_id), accumulate(a_id));
        if (needs(b_id)) matmul_tn_acc(value(a_id), g, accumulate(b_id));
        break;
      }
      case Op::AddBias: {
        const int x_id = rec.inputs[0];
        const int b_id = rec.inputs[1];
        if (needs(x_id)) accumulate(x_id) += g;
        if (needs(b_id)) {
          Tensor& gb = accumulate(b_id);
          for (std::size_t r = 0; r < g.rows(); ++r) {
            auto row = g.row(r);
            for (std::size_t j = 0; j < row.size(); ++j) gb.data()[j] += row[j];
          }
        }
        break;
      }
      case Op::Sum:
        for (int id : rec.inputs) {
          if (needs(id)) accumulate(id) += g;
        }
        break;
      case Op::Relu: {
        const int x_id = rec.inputs[0];
        if (!needs(x_id)) break;
        const Tensor& x = value(x_id);
        Tensor& gx = accumulate(x_id);
        for (std::size_t k = 0; k < g.size(); ++k) {
          const double gk = g.data()[k];
          const bool forward_open = x.data()[k] > 0.0;
          const bool positive_grad = gk > 0.0;
          bool pass = false;
          switch (mode) {
            case BackpropMode::Standard: pass = forward_open; break;
            case BackpropMode::Deconv: pass = positive_grad; break;
            case BackpropMode::Guided: pass = positive_grad && forward_open; break;
          }
          if (pass) gx.data()[k] += gk;
        }
        break;
      }
      case Op::L2Normalize: {
        const int x_id = rec.inputs[0];
        if (!needs(x_id)) break;
        const Tensor& x = value(x_id);
        const Tensor& y = rec.value;
        Tensor& gx = accumulate(x_id);
        for (std::size_t r = 0; r < x.rows(); ++r) {
          auto xr = x.row(r);
          auto yr = y.row(r);
          auto gr = g.row(r);
          auto out = gx.row(r);
          double sq = 0.0;
          for (double v : xr) sq += v * v;
          const double norm = std::sqrt(sq);
          if (norm > rec.eps) {
            double dot = 0.0;
            for (std::size_t j = 0; j < yr.size(); ++j) dot += yr[j] * gr[j];
            for (std::size_t j = 0; j < out.size(); ++j) out[j] += (gr[j] - yr[j] * dot) / norm;
          } else {
            for (std::size_t j = 0; j < out.size(); ++j) out[j] += gr[j] / rec.eps;
          }
        }
        break;
      }
      case Op::OnsetPool: {
        const int x_id = rec.inputs[0];
        if (!needs(x_id)) break;
        Tensor sums(group_inv_size_.size(), g.cols());
        for (std::size_t v = 0; v < g.rows(); ++v) {
          auto s = sums.row(static_cast<std::size_t>(onset_group_[v]));
          auto gr = g.row(v);
          for (std::size_t j = 0; j < s.size(); ++j) s[j] += gr[j];
        }
        Tensor& gx = accumulate(x_id);
        for (std::size_t v = 0; v < g.rows(); ++v) {
          const auto grp = static_cast<std::size_t>(onset_group_[v]);
          const double k = group_inv_size_[grp];
          auto out = gx.row(v);
          auto gr = g.row(v);
          auto s = sums.row(grp);
          for (std::size_t j = 0; j < out.size(); ++j) out[j] += gr[j] + k * s[j];
        }
        break;
      }
      case Op::RowMix: {
        const int x_id = rec.inputs[0];
        if (!needs(x_id)) break;
        Tensor& gx = accumulate(x_id);
        const auto& rows = mixes_[static_cast<std::size_t>(rec.aux)];
        for (std::size_t i2 = 0; i2 < rows.size(); ++i2) {
          auto gr = g.row(i2);
          for (const auto& [src, c] : rows[i2]) {
            auto out = gx.row(static_cast<std::size_t>(src));
            for (std::size_t j = 0; j < out.size(); ++j) out[j] += c * gr[j];
          }
        }
        break;
      }
      case Op::Input:
      case Op::Param:
        break;
    }
  }
  return grads;
}

namespace {

void check_finite(const Tape& tape, int id, int layer) {
  if (!tape.value(id).all_finite()) {
    fail(ErrorKind::Numeric, "non-finite activation in layer " + std::to_string(layer));
  }
}

}  // namespace

Tape encode_with_tape(const ScoreGraph& graph, const Checkpoint& ckpt, const EdgeMask* mask,
                      const Tensor* feature_override) {
  const Tensor& features = feature_override ? *feature_override : graph.features;
  if (features.rows() != graph.num_nodes()) {
    fail(ErrorKind::Validation, "features have " + std::to_string(features.rows()) +
                                    " rows for a graph of " + std::to_string(graph.num_nodes()) +
                                    " nodes");
  }
  if (features.cols() != ckpt.input_dim) {
    fail(ErrorKind::Validation, "features have " + std::to_string(features.cols()) +
                                    " columns, checkpoint expects " + std::to_string(ckpt.input_dim));
  }
  Tape tape(graph.edges, graph.onsets);
  tape.features_id = tape.input("features", features);
  for (int r = 0; r < kNumRelations; ++r) {
    std::vector<double> values = mask ? (*mask)[r] : std::vector<double>(graph.edges[r].size(), 1.0);
    if (values.size() != graph.edges[r].size()) {
      fail(ErrorKind::Validation, std::string("edge mask '") + to_string(kRelations[r]) + "' has " +
                                      std::to_string(values.size()) + " entries, graph has " +
                                      std::to_string(graph.edges[r].size()));
    }
    const std::size_t count = values.size();
    tape.mask_ids[r] = tape.input(std::string("mask.") + to_string(kRelations[r]),
                                  Tensor(count, 1, std::move(values)));
  }

  const auto& cfg = ckpt.config;
  int h = tape.features_id;
  std::size_t d_in = ckpt.input_dim;
  for (int l = 0; l < cfg.n_layers; ++l) {
    std::vector<int> self_slices;
    std::vector<int> terms;
    for (int r = 0; r < kNumRelations; ++r) {
      const int w = tape.param(encoder_weight_name(l, kRelations[r]),
                               ckpt.tensor(encoder_weight_name(l, kRelations[r])));
      if (tape.value(w).rows() != 2 * d_in) {
        fail(ErrorKind::Validation, "tensor '" + encoder_weight_name(l, kRelations[r]) + "' has " +
                                        tape.value(w).shape_string() + ", expected " +
                                        std::to_string(2 * d_in) + " rows");
      }
      self_slices.push_back(tape.slice_rows(w, 0, d_in));
      const int agg = tape.aggregate(h, tape.mask_ids[r], kRelations[r]);
      terms.push_back(tape.matmul(agg, tape.slice_rows(w, d_in, 2 * d_in)));
    }
    // Sum over relations of W_self h_v equals h_v times the summed self blocks.
    terms.insert(terms.begin(), tape.matmul(h, tape.sum(self_slices)));
    int z = tape.add_bias(tape.sum(terms), tape.param(encoder_bias_name(l), ckpt.tensor(encoder_bias_name(l))));
    if (cfg.activation == Activation::Relu) z = tape.relu(z);
    if (cfg.norm == NormKind::L2) z = tape.l2_normalize(z, kNormEpsilon);
    check_finite(tape, z, l);
    h = z;
    d_in = static_cast<std::size_t>(cfg.hidden_dim);
  }
  if (cfg.onset_pool == OnsetPoolKind::ResidualMean) h = tape.onset_pool(h);
  tape.embeddings_id = h;
  tape.output_id = h;
  return tape;
}

int append_head(Tape& tape, int embeddings, const Checkpoint& ckpt) {
  int hidden = tape.add_bias(tape.matmul(embeddings, tape.param("head.0.weight", ckpt.tensor("head.0.weight"))),
                             tape.param("head.0.bias", ckpt.tensor("head.0.bias")));
  if (ckpt.config.activation == Activation::Relu) hidden = tape.relu(hidden);
  check_finite(tape, hidden, ckpt.config.n_layers);
  const int logits = tape.add_bias(tape.matmul(hidden, tape.param("head.1.weight", ckpt.tensor("head.1.weight"))),
                                   tape.param("head.1.bias", ckpt.tensor("head.1.bias")));
  check_finite(tape, logits, ckpt.config.n_layers + 1);
  tape.output_id = logits;
  return logits;
}

ForwardResult forward_with_tape(const ScoreGraph& graph, const Checkpoint& ckpt, const EdgeMask* mask,
                                const Tensor* feature_override) {
  Tape tape = encode_with_tape(graph, ckpt, mask, feature_override);
  const int logits = append_head(tape, tape.embeddings_id, ckpt);
  Tensor out = tape.value(logits);
  return {std::move(out), std::move(tape)};
}

GradientResult backward(const Tape& tape, std::size_t node, std::size_t cls, BackpropMode mode) {
  const Tensor& out = tape.value(tape.output_id);
  if (node >= out.rows() || cls >= out.cols()) {
    fail(ErrorKind::Validation, "target (" + std::to_string(node) + ", " + std::to_string(cls) +
                                    ") outside logits " + out.shape_string());
  }
  Tensor seed(out.rows(), out.cols());
  seed(node, cls) = 1.0;
  auto grads = tape.backprop(tape.output_id, seed, mode, false);

  GradientResult result;
  result.value = out(node, cls);
  const Tensor& features = tape.value(tape.features_id);
  result.d_features = grads[static_cast<std::size_t>(tape.features_id)];
  if (result.d_features.empty()) result.d_features = Tensor(features.rows(), features.cols());
  for (int r = 0; r < kNumRelations; ++r) {
    const auto& g = grads[static_cast<std::size_t>(tape.mask_ids[r])];
    result.d_edge_mask[r] = g.empty() ? std::vector<double>(tape.value(tape.mask_ids[r]).size(), 0.0)
                                      : g.data();
  }
  if (!result.d_features.all_finite()) fail(ErrorKind::Numeric, "non-finite feature gradient");
  for (const auto& m : result.d_edge_mask) {
    for (double v : m) {
      if (!std::isfinite(v)) fail(ErrorKind::Numeric, "non-finite edge-mask gradient");
    }
  }
  return result;
}

std::vector<double> finite_diff(const std::function<double(std::span<const double>)>& f,
                                std::span<const double> x, double eps) {
  if (!(eps > 0.0)) fail(ErrorKind::Validation, "finite_diff needs eps > 0");
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> grad(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = point[i];
    point[i] = orig + eps;
    const double plus = f(point);
    point[i] = orig - eps;
    const double minus = f(point);
    point[i] = orig;
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      fail(ErrorKind::Numeric, "non-finite function value at coordinate " + std::to_string(i));
    }
    grad[i] = (plus - minus) / (2.0 * eps);
  }
  return grad;
}

}  // namespace scoregraph
