// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/service.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "http_util.hpp"
#include "odqa/errors.hpp"

namespace odqa {
namespace {

std::optional<std::string> unreachable(const std::string& url, const char* what) {
  try {
    const auto endpoint = detail::parse_endpoint(url);
    auto client = detail::make_client(endpoint, 2000);
    if (auto res = client->Get("/"); !res) {
      return std::string(what) + " unreachable: " + httplib::to_string(res.error());
    }
  } catch (const ConfigError& e) {
    return std::string(what) + ": " + e.what();
  }
  return std::nullopt;
}

void send_json(httplib::Response& res, int status, const nlohmann::ordered_json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
  send_json(res, status, {{"error", message}});
}

}  // namespace

Engine::Engine(AppConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  function_words_ = Lexicon::load(cfg_.function_words);
  excluded_verbs_ = Lexicon::load(cfg_.excluded_verbs);

  std::optional<RemoteProcessorConfig> remote;
  if (!cfg_.offline() && !cfg_.teprolin_endpoint.empty()) {
    remote = RemoteProcessorConfig{cfg_.teprolin_endpoint, cfg_.teprolin_timeout_ms, 1};
  }
  processor_ = std::make_unique<TextProcessor>(function_words_, std::move(remote));

  if (cfg_.offline()) {
    search_ = std::make_unique<FixtureSearchProvider>(*cfg_.fixture_dir);
    backend_ = std::make_unique<StubInferenceBackend>(
        cfg_.stub_answers ? StubInferenceBackend::load(*cfg_.stub_answers)
                          : StubInferenceBackend());
  } else {
    if (cfg_.infer_endpoint.empty()) {
      throw ConfigError("INFER_ENDPOINT is not set (use offline mode for fixtures)");
    }
    search_ = std::make_unique<LiveSearchProvider>(cfg_.search);
    backend_ = std::make_unique<RemoteInferenceBackend>(cfg_.infer_endpoint,
                                                        cfg_.infer_timeout_ms);
  }

  auto pipeline_cfg = cfg_.pipeline;
  pipeline_cfg.model = cfg_.models.front();
  pipeline_ = std::make_unique<Pipeline>(*processor_, excluded_verbs_, *search_, *backend_,
                                         pipeline_cfg);
}

Engine::~Engine() = default;

std::vector<std::string> Engine::probe() const {
  std::vector<std::string> problems;
  if (cfg_.offline()) return problems;
  if (cfg_.search.api_key.empty()) problems.emplace_back("search: SEARCH_API_KEY is not set");
  if (auto p = unreachable(cfg_.search.endpoint, "search provider")) problems.push_back(*p);
  if (auto p = unreachable(cfg_.infer_endpoint, "inference backend")) problems.push_back(*p);
  return problems;
}

nlohmann::ordered_json ask_response(const std::vector<Query>& queries,
                                    const std::vector<RankedAnswer>& answers,
                                    std::size_t top_k) {
  nlohmann::ordered_json terms = nlohmann::ordered_json::array();
  for (const auto& q : queries) terms.push_back(q.text());

  nlohmann::ordered_json results = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < answers.size() && k < top_k; ++k) {
    const auto& a = answers[k];
    nlohmann::ordered_json item;
    item["position"] = k + 1;
    item["url"] = a.hit().url();
    item["title"] = a.hit().title();
    item["snippet"] = a.hit().snippet();
    if (a.answer().is_no_answer()) {
      item["answer"] = nullptr;
    } else {
      item["answer"] = {{"text", a.answer().text()},
                        {"start", a.answer().start_char()},
                        {"end", a.answer().end_char()}};
    }
    item["c"] = a.answer().confidence();
    item["r"] = a.hit().rank();
    item["q"] = a.combined();
    results.push_back(std::move(item));
  }
  return {{"query_terms", terms}, {"results", results}};
}

QaService::QaService(std::string cors_origin)
    : cors_origin_(std::move(cors_origin)), server_(std::make_unique<httplib::Server>()) {
  install_routes();
}

QaService::~QaService() { stop(); }

void QaService::attach(std::shared_ptr<const Engine> engine) {
  std::lock_guard lock(engine_mutex_);
  engine_ = std::move(engine);
  ready_ = engine_ != nullptr;
}

void QaService::install_routes() {
  auto engine = [this]() -> std::shared_ptr<const Engine> {
    std::lock_guard lock(engine_mutex_);
    return ready_ ? engine_ : nullptr;
  };

  server_->set_post_routing_handler([this](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", cors_origin_);
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
  });

  server_->Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.status = 204;
  });

  server_->Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, {{"status", "ok"}});
  });

  server_->Get("/readyz", [engine](const httplib::Request&, httplib::Response& res) {
    const auto e = engine();
    if (!e) return send_error(res, 503, "engine not initialized");
    const auto problems = e->probe();
    if (!problems.empty()) {
      return send_json(res, 503, {{"status", "unavailable"}, {"problems", problems}});
    }
    send_json(res, 200, {{"status", "ready"}});
  });

  server_->Get("/api/v1/models", [engine](const httplib::Request&, httplib::Response& res) {
    const auto e = engine();
    if (!e) return send_error(res, 503, "backends not initialized");
    send_json(res, 200, nlohmann::ordered_json(e->config().models));
  });

  server_->Post("/api/v1/ask", [engine](const httplib::Request& req, httplib::Response& res) {
    const auto e = engine();
    if (!e) return send_error(res, 503, "backends not initialized");

    nlohmann::json body;
    try {
      body = nlohmann::json::parse(req.body);
    } catch (const nlohmann::json::exception&) {
      return send_error(res, 400, "request body is not valid JSON");
    }
    if (!body.is_object() || !body.contains("question") || !body["question"].is_string()) {
      return send_error(res, 400, "'question' must be a string");
    }

    auto top_k = e->config().top_k;
    if (body.contains("top_k")) {
      if (!body["top_k"].is_number_integer() || body["top_k"].get<long long>() < 1) {
        return send_error(res, 400, "'top_k' must be a positive integer");
      }
      top_k = body["top_k"].get<std::size_t>();
    }
    auto mode = e->pipeline().config().mode;
    if (body.contains("query_mode")) {
      try {
        mode = query_mode_from_string(body["query_mode"].get<std::string>());
      } catch (const std::exception& ex) {
        return send_error(res, 400, ex.what());
      }
    }
    auto model = e->config().models.front();
    if (body.contains("model")) {
      const auto& models = e->config().models;
      if (!body["model"].is_string() ||
          std::find(models.begin(), models.end(), body["model"].get<std::string>()) ==
              models.end()) {
        return send_error(res, 400, "unknown model");
      }
      model = body["model"].get<std::string>();
    }

    std::optional<Question> question;
    try {
      question.emplace(body["question"].get<std::string>());
    } catch (const ValidationError& ex) {
      return send_error(res, 400, ex.what());
    }

    try {
      const auto result = e->pipeline().answer_question(*question, mode, model);
      send_json(res, 200, ask_response(result.queries, result.answers, top_k));
    } catch (const NoResults&) {
      send_json(res, 200, ask_response(e->pipeline().queries_for(*question, mode), {}, top_k));
    } catch (const SearchFailed& ex) {
      send_error(res, 502, ex.what());
    } catch (const Error& ex) {
      spdlog::error("ask failed: {}", ex.what());
      send_error(res, 500, ex.what());
    }
  });
}

int QaService::bind(const std::string& host, int port) {
  if (port == 0) return server_->bind_to_any_port(host);
  return server_->bind_to_port(host, port) ? port : -1;
}

bool QaService::listen_after_bind() { return server_->listen_after_bind(); }

void QaService::stop() {
  if (server_ && server_->is_running()) server_->stop();
}

}  // namespace odqa
