// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <string_view>
#include <vector>

#include "odqa/model.hpp"
#include "odqa/querygen.hpp"

namespace odqa {

class SearchProvider {
 public:
  virtual ~SearchProvider() = default;

  /// Hits ranked 0..n-1 in provider order, n <= 10.
  virtual std::vector<SearchHit> search(const Query& query) const = 0;
};

/// Lookup key for recorded queries: diacritic-folded, lowercased and
/// whitespace-collapsed, so both content-word variants share a recording.
std::string fixture_key(std::string_view query_text);

/// Plays back recorded hits. The directory holds `manifest.json`:
///
///   {"queries": [{"query": "<query text>", "results": "<file>.json"}, ...]}
///
/// and one result file per query holding a JSON array of
/// {"url", "title", "snippet"} objects in rank order (at most 10).
/// Throws FixtureFormatError on malformed files or duplicate keys.
class FixtureSearchProvider : public SearchProvider {
 public:
  explicit FixtureSearchProvider(const std::filesystem::path& fixture_dir);

  /// Unknown queries return an empty list and are recorded in misses().
  std::vector<SearchHit> search(const Query& query) const override;

  std::vector<std::string> misses() const;

 private:
  std::map<std::string, std::vector<SearchHit>> recorded_;
  mutable std::mutex misses_mutex_;
  mutable std::vector<std::string> misses_;
};

std::vector<SearchHit> search_fixture(const Query& query,
                                      const std::filesystem::path& fixture_dir);

struct SearchProviderConfig {
  std::string endpoint = "https://api.bing.microsoft.com/v7.0/search";
  std::string api_key;
  std::string market = "ro-RO";
  int count = 10;
  int timeout_ms = 5000;
  int max_in_flight = 2;

  /// Throws ConfigError when count is outside [1, 10] or limits are not
  /// positive.
  void validate() const;
};

/// Removes engine highlighting from a snippet: HTML tags, the U+E000/U+E001
/// hit markers, and the basic HTML entities.
std::string strip_markup(std::string_view snippet);

/// Reads `webPages.value[]` (name, url, snippet) from a web-search JSON
/// response. Entries with an empty snippet are skipped. Throws
/// ProtocolError.
std::vector<SearchHit> parse_search_response(std::string_view body, int count);

/// Web-search API client. Retries once on network failure, never on 429.
class LiveSearchProvider : public SearchProvider {
 public:
  explicit LiveSearchProvider(SearchProviderConfig cfg);

  /// Throws AuthError, QuotaError, NetworkError or ProtocolError.
  std::vector<SearchHit> search(const Query& query) const override;

 private:
  SearchProviderConfig cfg_;
  mutable std::unique_ptr<std::counting_semaphore<>> in_flight_;
};

/// Union of several hit lists: deduplicated by normalized URL keeping the
/// best (lowest) rank, ordered by that rank (earlier lists first on ties),
/// re-ranked 0..n-1 and truncated to `limit`.
std::vector<SearchHit> merge_hits(const std::vector<std::vector<SearchHit>>& lists,
                                  std::size_t limit = kMaxSearchRank);

}  // namespace odqa
