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

#include "scoregraph/service.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>
#include <sstream>
#include <vector>

#include "scoregraph/error.hpp"

namespace scoregraph {

namespace {

HttpResponse json_error(int status, const std::string& code, const std::string& detail = {}) {
  nlohmann::ordered_json j;
  j["error"] = code;
  if (!detail.empty()) j["detail"] = detail;
  return {status, "application/json", j.dump() + "\n"};
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '/') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

}  // namespace

Service::Service(std::shared_ptr<const Checkpoint> ckpt, std::optional<std::filesystem::path> data_dir,
                 ExplainConfig default_explain)
    : ckpt_(ckpt),
      checkpoint_hash_(sha256_hex(save_checkpoint(*ckpt))),
      store_(ckpt, std::move(data_dir)),
      default_explain_(default_explain) {
  default_explain_.validate();
}

HttpResponse Service::handle(const std::string& method, const std::string& path,
                             const std::map<std::string, std::string>& query, const std::string& body) {
  const auto parts = split_path(path);
  if (parts.size() < 2 || parts[0] != "api") return json_error(404, "not_found");

  if (parts[1] == "health" && parts.size() == 2) {
    if (method != "GET") return json_error(405, "method_not_allowed");
    nlohmann::ordered_json j;
    j["status"] = "ok";
    j["checkpoint_hash"] = checkpoint_hash_;
    return {200, "application/json", j.dump() + "\n"};
  }
  if (parts[1] != "scores") return json_error(404, "not_found");

  if (parts.size() == 2) {
    if (method == "GET") {
      nlohmann::ordered_json j;
      j["scores"] = store_.ids();
      return {200, "application/json", j.dump() + "\n"};
    }
    if (method == "POST") {
      try {
        const std::string id = store_.add(body);
        nlohmann::ordered_json j;
        j["score_id"] = id;
        return {200, "application/json", j.dump() + "\n"};
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Io) return json_error(500, "storage_error", e.what());
        return json_error(400, "invalid_score", e.what());
      }
    }
    return json_error(405, "method_not_allowed");
  }

  if (method != "GET") return json_error(405, "method_not_allowed");
  const auto rec = store_.get(parts[2]);
  if (!rec) return json_error(404, "score_not_found");
  if (parts.size() == 4 && parts[3] == "mei") return {200, "application/xml", record_mei(*rec)};
  if (parts.size() == 4 && parts[3] == "graph") return {200, "application/json", graph_edges_json(rec->graph)};
  if (parts.size() == 4 && parts[3] == "predictions") {
    return {200, "application/json", prediction_to_json(rec->predictions)};
  }
  if (parts.size() == 5 && parts[3] == "explanations") return explanation(parts[2], parts[4], query);
  return json_error(404, "not_found");
}

HttpResponse Service::explanation(const std::string& score_id, const std::string& note_id,
                                  const std::map<std::string, std::string>& query) {
  ExplainConfig cfg = default_explain_;
  if (auto it = query.find("method"); it != query.end()) {
    const auto m = parse_method(it->second);
    if (!m) return json_error(400, "invalid_method", "expected one of saliency, ig, deconv, gbp");
    cfg.method = *m;
  }
  if (auto it = query.find("k"); it != query.end()) {
    std::size_t used = 0;
    int k = 0;
    try {
      k = std::stoi(it->second, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != it->second.size() || k < 1) return json_error(400, "invalid_k", "k must be a positive integer");
    cfg.top_k = k;
  }
  const auto rec = store_.get(score_id);
  if (!rec) return json_error(404, "score_not_found");
  if (!rec->graph.node_index(note_id)) return json_error(404, "note_not_found");

  const CacheKey key{score_id, note_id, to_string(cfg.method), cfg.top_k, checkpoint_hash_};
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = explanation_cache_.find(key); it != explanation_cache_.end()) {
      return {200, "application/json", it->second};
    }
  }
  std::string body;
  try {
    body = explanation_to_json(explain(rec->graph, *ckpt_, note_id, cfg));
  } catch (const Error& e) {
    return json_error(e.kind() == ErrorKind::Numeric ? 422 : 400, "explanation_failed", e.what());
  }
  std::lock_guard lock(cache_mutex_);
  auto [it, inserted] = explanation_cache_.emplace(key, std::move(body));
  return {200, "application/json", it->second};
}

std::unique_ptr<Service> make_service(const ServerConfig& config) {
  auto ckpt = std::make_shared<const Checkpoint>(load_checkpoint_file(config.checkpoint_path));
  return std::make_unique<Service>(ckpt, config.data_dir, config.default_explain);
}

struct HttpServer::Impl {
  httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>()) {
  auto dispatch = [&service](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const HttpResponse r = service.handle(req.method, req.path, query, req.body);
    res.status = r.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(r.body, r.content_type);
  };
  impl_->server.Get(".*", dispatch);
  impl_->server.Post(".*", dispatch);
  impl_->server.Options(".*", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) fail(ErrorKind::Io, "cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace scoregraph
