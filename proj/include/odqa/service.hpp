// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

// Component wiring and the JSON REST front door:
//
//   POST /api/v1/ask     {question, top_k?, query_mode?, model?}
//   GET  /api/v1/models
//   GET  /healthz        liveness
//   GET  /readyz         backend and search provider reachability

#pragma once

#include <atomic>
#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "odqa/config.hpp"
#include "odqa/extractor.hpp"
#include "odqa/pipeline.hpp"
#include "odqa/search.hpp"
#include "odqa/textproc.hpp"

namespace httplib {
class Server;
}

namespace odqa {

/// Owns every pipeline component built from an AppConfig: fixture search
/// plus the stub backend in offline mode, the live clients otherwise.
class Engine {
 public:
  /// Throws ConfigError, IoError or FixtureFormatError.
  explicit Engine(AppConfig cfg);
  ~Engine();

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  const AppConfig& config() const noexcept { return cfg_; }
  const Pipeline& pipeline() const noexcept { return *pipeline_; }

  /// Empty when ready; otherwise one message per unreachable dependency.
  std::vector<std::string> probe() const;

 private:
  AppConfig cfg_;
  Lexicon function_words_;
  Lexicon excluded_verbs_;
  std::unique_ptr<TextProcessor> processor_;
  std::unique_ptr<SearchProvider> search_;
  std::unique_ptr<InferenceBackend> backend_;
  std::unique_ptr<Pipeline> pipeline_;
};

/// {query_terms, results: [{position, url, title, snippet,
///  answer: {text, start, end} | null, c, r, q}]}, at most top_k results.
nlohmann::ordered_json ask_response(const std::vector<Query>& queries,
                                    const std::vector<RankedAnswer>& answers,
                                    std::size_t top_k);

class QaService {
 public:
  /// The service answers 503 on /api/v1/* until an engine is attached.
  explicit QaService(std::string cors_origin = "*");
  ~QaService();

  QaService(const QaService&) = delete;
  QaService& operator=(const QaService&) = delete;

  void attach(std::shared_ptr<const Engine> engine);

  /// Binds to `port` (0 picks a free port) and returns the bound port, or
  /// -1 on failure.
  int bind(const std::string& host, int port);
  /// Blocks serving requests until stop().
  bool listen_after_bind();
  void stop();

 private:
  void install_routes();

  std::string cors_origin_;
  std::unique_ptr<httplib::Server> server_;
  std::mutex engine_mutex_;
  std::shared_ptr<const Engine> engine_;
  std::atomic<bool> ready_{false};
};

}  // namespace odqa
