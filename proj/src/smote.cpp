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

#include "scoregraph/smote.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "scoregraph/error.hpp"

namespace scoregraph {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double t = a[j] - b[j];
    d += t * t;
  }
  return d;
}

/// The k nearest members of `members` to row `base`, excluding itself.
std::vector<int> nearest(const Tensor& x, const std::vector<int>& members, int base, std::size_t k) {
  std::vector<std::pair<double, int>> dist;
  dist.reserve(members.size());
  for (int m : members) {
    if (m == base) continue;
    dist.emplace_back(squared_distance(x.row(static_cast<std::size_t>(base)), x.row(static_cast<std::size_t>(m))), m);
  }
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
  std::vector<int> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(dist[i].second);
  return out;
}

}  // namespace

SmoteResult smote_oversample(const Tensor& embeddings, std::span<const int> labels, int k_nn,
                             const std::function<double()>& lambda_source, Rng& rng) {
  if (labels.size() != embeddings.rows()) {
    fail(ErrorKind::Validation, "smote: " + std::to_string(labels.size()) + " labels for " +
                                    std::to_string(embeddings.rows()) + " rows");
  }
  if (k_nn < 1) fail(ErrorKind::Validation, "smote: k_nn must be >= 1");

  std::map<int, std::vector<int>> members;
  for (std::size_t i = 0; i < labels.size(); ++i) members[labels[i]].push_back(static_cast<int>(i));
  std::size_t majority = 0;
  for (const auto& [label, rows] : members) majority = std::max(majority, rows.size());

  std::size_t extra = 0;
  for (const auto& [label, rows] : members) {
    if (rows.size() == majority) continue;
    if (rows.size() == 1) {
      fail(ErrorKind::Validation, "smote: class " + std::to_string(label) +
                                      " has a single sample; lower k_nn or merge batches so every class "
                                      "has at least two");
    }
    extra += majority - rows.size();
  }

  SmoteResult result;
  const std::size_t m = embeddings.rows();
  const std::size_t d = embeddings.cols();
  result.embeddings = Tensor(m + extra, d);
  std::copy(embeddings.data().begin(), embeddings.data().end(), result.embeddings.data().begin());
  result.labels.assign(labels.begin(), labels.end());
  result.labels.reserve(m + extra);
  result.provenance.reserve(extra);

  std::size_t out_row = m;
  for (const auto& [label, rows] : members) {
    if (rows.size() == majority) continue;
    const std::size_t k_eff = std::min(static_cast<std::size_t>(k_nn), rows.size() - 1);
    std::map<int, std::vector<int>> neighbor_cache;
    for (std::size_t i = 0; i < majority - rows.size(); ++i) {
      const int base = rows[i % rows.size()];
      auto [it, inserted] = neighbor_cache.try_emplace(base);
      if (inserted) it->second = nearest(embeddings, rows, base, k_eff);
      const int nn = it->second[rng.below(k_eff)];
      const double lambda = lambda_source();
      auto x = embeddings.row(static_cast<std::size_t>(base));
      auto y = embeddings.row(static_cast<std::size_t>(nn));
      auto s = result.embeddings.row(out_row);
      for (std::size_t j = 0; j < d; ++j) s[j] = x[j] + lambda * (y[j] - x[j]);
      result.labels.push_back(label);
      result.provenance.push_back({base, nn, lambda, label});
      ++out_row;
    }
  }
  return result;
}

SmoteResult smote_oversample(const Tensor& embeddings, std::span<const int> labels, int k_nn, Rng& rng) {
  return smote_oversample(embeddings, labels, k_nn, [&rng] { return rng.uniform(); }, rng);
}

SmoteResult smote_oversample(const Tensor& embeddings, std::span<const int> labels, int k_nn,
                             std::uint64_t seed) {
  Rng rng(seed);
  return smote_oversample(embeddings, labels, k_nn, rng);
}

}  // namespace scoregraph
