// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "odqa/errors.hpp"
#include "odqa/utf8.hpp"

#ifndef ODQA_DEFAULT_RESOURCE_DIR
#define ODQA_DEFAULT_RESOURCE_DIR "resources"
#endif

namespace odqa {
namespace {

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return out;
}

double parse_double(std::string_view key, std::string_view value) {
  try {
    std::size_t used = 0;
    const std::string s(value);
    const double d = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
}

std::vector<std::string> split_list(std::string_view value) {
  std::vector<std::string> out;
  std::size_t from = 0;
  while (from <= value.size()) {
    const auto comma = value.find(',', from);
    auto item = utf8::trim(value.substr(from, comma == std::string_view::npos
                                                  ? std::string_view::npos
                                                  : comma - from));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    from = comma + 1;
  }
  return out;
}

}  // namespace

std::filesystem::path default_resource_dir() { return ODQA_DEFAULT_RESOURCE_DIR; }

AppConfig::AppConfig()
    : function_words(default_resource_dir() / "lexicon" / "function_words_ro.txt"),
      excluded_verbs(default_resource_dir() / "lexicon" / "excluded_verbs_ro.txt") {}

void AppConfig::set(std::string_view key, std::string_view value) {
  const std::string v(value);
  if (key == "search.endpoint") {
    search.endpoint = v;
  } else if (key == "search.api_key") {
    throw ConfigError("search.api_key may only be set through SEARCH_API_KEY");
  } else if (key == "search.market") {
    search.market = v;
  } else if (key == "search.count") {
    search.count = parse_number<int>(key, value);
  } else if (key == "search.timeout_ms") {
    search.timeout_ms = parse_number<int>(key, value);
  } else if (key == "search.max_in_flight") {
    search.max_in_flight = parse_number<int>(key, value);
  } else if (key == "infer.endpoint") {
    infer_endpoint = v;
  } else if (key == "infer.timeout_ms") {
    infer_timeout_ms = parse_number<int>(key, value);
  } else if (key == "infer.models") {
    models = split_list(value);
  } else if (key == "teprolin.endpoint") {
    teprolin_endpoint = v;
  } else if (key == "teprolin.timeout_ms") {
    teprolin_timeout_ms = parse_number<int>(key, value);
  } else if (key == "decoder.max_span_tokens") {
    pipeline.decoder.max_span_tokens = parse_number<int>(key, value);
  } else if (key == "decoder.no_answer_threshold") {
    pipeline.decoder.no_answer_threshold = parse_double(key, value);
  } else if (key == "decoder.max_context_chars") {
    pipeline.decoder.max_context_chars = parse_number<std::size_t>(key, value);
  } else if (key == "pipeline.query_mode") {
    pipeline.mode = query_mode_from_string(value);
  } else if (key == "pipeline.min_results") {
    pipeline.min_results = parse_number<std::size_t>(key, value);
  } else if (key == "pipeline.max_concurrency") {
    pipeline.max_concurrency = parse_number<std::size_t>(key, value);
  } else if (key == "pipeline.top_k") {
    top_k = parse_number<std::size_t>(key, value);
  } else if (key == "lexicon.function_words") {
    function_words = v;
  } else if (key == "lexicon.excluded_verbs") {
    excluded_verbs = v;
  } else if (key == "offline.fixture_dir") {
    fixture_dir = v;
  } else if (key == "offline.stub_answers") {
    stub_answers = v;
  } else if (key == "server.cors_origin") {
    cors_origin = v;
  } else if (key == "server.host") {
    host = v;
  } else if (key == "server.port") {
    port = parse_number<int>(key, value);
  } else {
    throw ConfigError("unknown configuration key '" + std::string(key) + "'");
  }
}

void AppConfig::validate() const {
  search.validate();
  pipeline.decoder.validate();
  if (models.empty()) throw ConfigError("at least one model must be configured");
  if (top_k == 0) throw ConfigError("pipeline.top_k must be >= 1");
  if (pipeline.max_concurrency == 0) throw ConfigError("pipeline.max_concurrency must be >= 1");
  if (port < 0 || port > 65535) throw ConfigError("server.port outside [0, 65535]");
  if (teprolin_timeout_ms <= 0 || infer_timeout_ms <= 0) {
    throw ConfigError("timeouts must be positive");
  }
}

std::optional<std::string> process_env(const char* name) {
  if (const char* v = std::getenv(name); v != nullptr && *v != '\0') return std::string(v);
  return std::nullopt;
}

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (utf8::trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    out[utf8::trim(std::string_view(line).substr(0, eq))] =
        utf8::trim(std::string_view(line).substr(eq + 1));
  }
  return out;
}

AppConfig load_config(const std::optional<std::filesystem::path>& file, const EnvLookup& env) {
  AppConfig cfg;
  if (file) {
    std::ifstream in(*file, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file " + file->string());
    std::ostringstream buf;
    buf << in.rdbuf();
    for (const auto& [key, value] : parse_key_values(buf.str())) cfg.set(key, value);
  }
  if (auto v = env("SEARCH_API_KEY")) cfg.search.api_key = *v;
  if (auto v = env("SEARCH_ENDPOINT")) cfg.search.endpoint = *v;
  if (auto v = env("INFER_ENDPOINT")) cfg.infer_endpoint = *v;
  if (auto v = env("TEPROLIN_ENDPOINT")) cfg.teprolin_endpoint = *v;
  return cfg;
}

}  // namespace odqa
