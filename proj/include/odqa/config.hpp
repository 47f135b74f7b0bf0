// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "odqa/pipeline.hpp"
#include "odqa/search.hpp"

namespace odqa {

/// Directory holding the shipped lexicons (set at build time).
std::filesystem::path default_resource_dir();

struct AppConfig {
  SearchProviderConfig search;
  std::string infer_endpoint;
  int infer_timeout_ms = 10000;
  std::vector<std::string> models{"covid-ro-v1"};
  std::string teprolin_endpoint;
  int teprolin_timeout_ms = 3000;
  PipelineConfig pipeline;
  std::size_t top_k = 10;
  std::filesystem::path function_words;
  std::filesystem::path excluded_verbs;
  std::optional<std::filesystem::path> fixture_dir;
  std::optional<std::filesystem::path> stub_answers;
  std::string cors_origin = "*";
  std::string host = "0.0.0.0";
  int port = 8080;

  AppConfig();

  bool offline() const noexcept { return fixture_dir.has_value(); }

  /// Applies one `key = value` setting. Throws ConfigError on unknown keys,
  /// unparsable values, and on api keys (those come from the environment
  /// only).
  void set(std::string_view key, std::string_view value);

  void validate() const;
};

using EnvLookup = std::function<std::optional<std::string>(const char*)>;

/// Process environment lookup.
std::optional<std::string> process_env(const char* name);

/// Layers defaults < config file (if given) < environment variables
/// (SEARCH_API_KEY, SEARCH_ENDPOINT, INFER_ENDPOINT, TEPROLIN_ENDPOINT).
/// Command-line overrides are applied by the caller via AppConfig::set.
AppConfig load_config(const std::optional<std::filesystem::path>& file,
                      const EnvLookup& env = process_env);

/// Parses the key-value format ('#' comments, blank lines ignored).
std::map<std::string, std::string> parse_key_values(std::string_view text);

}  // namespace odqa
