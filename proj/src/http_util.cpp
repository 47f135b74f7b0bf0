// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "http_util.hpp"

#include "odqa/errors.hpp"

namespace odqa::detail {

Endpoint parse_endpoint(std::string_view url) {
  const auto sep = url.find("://");
  if (sep == std::string_view::npos) {
    throw ConfigError("endpoint '" + std::string(url) + "' has no scheme");
  }
  const auto scheme = url.substr(0, sep);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("unsupported endpoint scheme '" + std::string(scheme) + "'");
  }
  const auto path_begin = url.find('/', sep + 3);
  Endpoint endpoint;
  if (path_begin == std::string_view::npos) {
    endpoint.base = std::string(url);
    endpoint.path = "/";
  } else {
    endpoint.base = std::string(url.substr(0, path_begin));
    endpoint.path = std::string(url.substr(path_begin));
  }
  if (endpoint.base.size() == sep + 3) {
    throw ConfigError("endpoint '" + std::string(url) + "' has no host");
  }
  return endpoint;
}

std::unique_ptr<httplib::Client> make_client(const Endpoint& endpoint, int timeout_ms) {
  auto client = std::make_unique<httplib::Client>(endpoint.base);
  const auto sec = timeout_ms / 1000;
  const auto usec = (timeout_ms % 1000) * 1000;
  client->set_connection_timeout(sec, usec);
  client->set_read_timeout(sec, usec);
  client->set_write_timeout(sec, usec);
  return client;
}

}  // namespace odqa::detail
