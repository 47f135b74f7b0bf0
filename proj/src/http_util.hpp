// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "httplib.h"

namespace odqa::detail {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // starts with '/'
};

Endpoint parse_endpoint(std::string_view url);

std::unique_ptr<httplib::Client> make_client(const Endpoint& endpoint, int timeout_ms);

}  // namespace odqa::detail
