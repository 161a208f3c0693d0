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

#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>

#include "scoregraph/explain.hpp"
#include "scoregraph/model.hpp"
#include "scoregraph/store.hpp"

namespace scoregraph {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string checkpoint_path;
  std::optional<std::filesystem::path> data_dir;
  ExplainConfig default_explain;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Request handling for the JSON API, independent of the transport.
///
///   GET  /api/health
///   GET  /api/scores
///   POST /api/scores                                  body: MusicXML or MEI
///   GET  /api/scores/{id}/mei
///   GET  /api/scores/{id}/graph
///   GET  /api/scores/{id}/predictions
///   GET  /api/scores/{id}/explanations/{note}?method=&k=
class Service {
 public:
  Service(std::shared_ptr<const Checkpoint> ckpt, std::optional<std::filesystem::path> data_dir,
          ExplainConfig default_explain = {});

  HttpResponse handle(const std::string& method, const std::string& path,
                      const std::map<std::string, std::string>& query, const std::string& body);

  const std::string& checkpoint_hash() const { return checkpoint_hash_; }
  ScoreStore& store() { return store_; }

 private:
  HttpResponse explanation(const std::string& score_id, const std::string& note_id,
                           const std::map<std::string, std::string>& query);

  std::shared_ptr<const Checkpoint> ckpt_;
  std::string checkpoint_hash_;
  ScoreStore store_;
  ExplainConfig default_explain_;

  using CacheKey = std::tuple<std::string, std::string, std::string, int, std::string>;
  std::mutex cache_mutex_;
  std::map<CacheKey, std::string> explanation_cache_;
};

/// HTTP/1.1 transport for a Service.
class HttpServer {
 public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds to host:port (port 0 picks a free port) and returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop() is called from another thread.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Service for a config: loads the checkpoint and opens the data directory.
std::unique_ptr<Service> make_service(const ServerConfig& config);

}  // namespace scoregraph
