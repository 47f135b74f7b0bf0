// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/search.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <tuple>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "http_util.hpp"
#include "odqa/errors.hpp"
#include "odqa/normalize.hpp"
#include "odqa/utf8.hpp"

namespace odqa {
namespace {

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FixtureFormatError("cannot open fixture file " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw FixtureFormatError(path.string() + ": " + e.what());
  }
}

std::vector<SearchHit> load_results(const std::filesystem::path& path) {
  const auto doc = read_json(path);
  if (!doc.is_array()) throw FixtureFormatError(path.string() + ": expected an array");
  if (doc.size() > static_cast<std::size_t>(kMaxSearchRank)) {
    throw FixtureFormatError(path.string() + ": more than 10 recorded hits");
  }
  std::vector<SearchHit> hits;
  try {
    for (const auto& item : doc) {
      hits.emplace_back(static_cast<int>(hits.size()), item.at("url").get<std::string>(),
                        item.value("title", std::string()),
                        item.at("snippet").get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw FixtureFormatError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw FixtureFormatError(path.string() + ": " + e.what());
  }
  return hits;
}

}  // namespace

std::string fixture_key(std::string_view query_text) {
  return collapse_whitespace(fold_lower(query_text));
}

FixtureSearchProvider::FixtureSearchProvider(const std::filesystem::path& fixture_dir) {
  const auto manifest = read_json(fixture_dir / "manifest.json");
  if (!manifest.is_object() || !manifest.contains("queries") ||
      !manifest.at("queries").is_array()) {
    throw FixtureFormatError("manifest.json: expected {\"queries\": [...]}");
  }
  for (const auto& entry : manifest.at("queries")) {
    if (!entry.is_object() || !entry.contains("query") || !entry.contains("results") ||
        !entry.at("query").is_string() || !entry.at("results").is_string()) {
      throw FixtureFormatError("manifest.json: entry needs string 'query' and 'results'");
    }
    auto key = fixture_key(entry.at("query").get<std::string>());
    if (recorded_.contains(key)) {
      throw FixtureFormatError("manifest.json: duplicate query '" + key + "'");
    }
    recorded_.emplace(std::move(key),
                      load_results(fixture_dir / entry.at("results").get<std::string>()));
  }
}

std::vector<SearchHit> FixtureSearchProvider::search(const Query& query) const {
  const auto key = fixture_key(query.text());
  if (const auto it = recorded_.find(key); it != recorded_.end()) return it->second;
  spdlog::info("fixture miss for query '{}'", key);
  std::lock_guard lock(misses_mutex_);
  misses_.push_back(key);
  return {};
}

std::vector<std::string> FixtureSearchProvider::misses() const {
  std::lock_guard lock(misses_mutex_);
  return misses_;
}

std::vector<SearchHit> search_fixture(const Query& query,
                                      const std::filesystem::path& fixture_dir) {
  return FixtureSearchProvider(fixture_dir).search(query);
}

void SearchProviderConfig::validate() const {
  if (count < 1 || count > kMaxSearchRank) {
    throw ConfigError("search count must be within [1, 10], got " + std::to_string(count));
  }
  if (timeout_ms <= 0) throw ConfigError("search timeout must be positive");
  if (max_in_flight <= 0) throw ConfigError("search max_in_flight must be positive");
}

std::string strip_markup(std::string_view snippet) {
  std::string no_tags;
  no_tags.reserve(snippet.size());
  for (std::size_t i = 0; i < snippet.size(); ++i) {
    if (snippet[i] == '<') {
      const auto close = snippet.find('>', i);
      if (close != std::string_view::npos) {
        i = close;
        continue;
      }
    }
    no_tags.push_back(snippet[i]);
  }

  std::string out;
  for (char32_t c : utf8::decode(no_tags)) {
    if (c != 0xE000 && c != 0xE001) utf8::append(out, c);
  }

  static const std::pair<std::string_view, std::string_view> kEntities[] = {
      {"&quot;", "\""}, {"&#39;", "'"}, {"&apos;", "'"}, {"&lt;", "<"},
      {"&gt;", ">"}, {"&nbsp;", " "}, {"&amp;", "&"}};
  for (const auto& [entity, replacement] : kEntities) {
    for (auto pos = out.find(entity); pos != std::string::npos;
         pos = out.find(entity, pos + replacement.size())) {
      out.replace(pos, entity.size(), replacement);
    }
  }
  return out;
}

std::vector<SearchHit> parse_search_response(std::string_view body, int count) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("search response is not JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ProtocolError("search response is not an object");
  const auto pages = doc.find("webPages");
  if (pages == doc.end()) return {};
  if (!pages->is_object() || !pages->contains("value") || !pages->at("value").is_array()) {
    throw ProtocolError("search response has malformed webPages");
  }
  std::vector<SearchHit> hits;
  try {
    for (const auto& item : pages->at("value")) {
      if (static_cast<int>(hits.size()) >= count) break;
      auto snippet = utf8::trim(strip_markup(item.value("snippet", std::string())));
      if (snippet.empty()) continue;
      hits.emplace_back(static_cast<int>(hits.size()), item.at("url").get<std::string>(),
                        strip_markup(item.value("name", std::string())), std::move(snippet));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed search hit: ") + e.what());
  } catch (const ValidationError& e) {
    throw ProtocolError(std::string("invalid search hit: ") + e.what());
  }
  return hits;
}

LiveSearchProvider::LiveSearchProvider(SearchProviderConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  in_flight_ = std::make_unique<std::counting_semaphore<>>(cfg_.max_in_flight);
}

std::vector<SearchHit> LiveSearchProvider::search(const Query& query) const {
  if (cfg_.api_key.empty()) throw AuthError("search API key is not set");
  const auto endpoint = detail::parse_endpoint(cfg_.endpoint);
  const httplib::Params params = {
      {"q", query.text()},
      {"mkt", cfg_.market},
      {"count", std::to_string(cfg_.count)},
  };
  const httplib::Headers headers = {{"Ocp-Apim-Subscription-Key", cfg_.api_key}};
  const auto path = httplib::append_query_params(endpoint.path, params);

  in_flight_->acquire();
  struct Release {
    std::counting_semaphore<>* sem;
    ~Release() { sem->release(); }
  } release{in_flight_.get()};

  std::string last_error;
  for (int attempt = 0; attempt < 2; ++attempt) {
    auto client = detail::make_client(endpoint, cfg_.timeout_ms);
    auto res = client->Get(path, headers);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403) {
      throw AuthError("search API rejected credentials (HTTP " + std::to_string(res->status) +
                      ")");
    }
    if (res->status == 429) throw QuotaError("search API quota exhausted");
    if (res->status != 200) {
      throw ProtocolError("search API returned HTTP " + std::to_string(res->status));
    }
    return parse_search_response(res->body, cfg_.count);
  }
  throw NetworkError("search API unreachable: " + last_error);
}

std::vector<SearchHit> merge_hits(const std::vector<std::vector<SearchHit>>& lists,
                                  std::size_t limit) {
  struct Candidate {
    int best_rank;
    std::size_t list_index;
    std::size_t first_seen;
    const SearchHit* hit;
  };
  std::vector<Candidate> candidates;
  std::unordered_map<std::string, std::size_t> by_url;
  for (std::size_t l = 0; l < lists.size(); ++l) {
    for (const auto& hit : lists[l]) {
      const auto key = normalize_url(hit.url());
      const auto it = by_url.find(key);
      if (it == by_url.end()) {
        by_url.emplace(key, candidates.size());
        candidates.push_back({hit.rank(), l, candidates.size(), &hit});
      } else if (hit.rank() < candidates[it->second].best_rank) {
        auto& c = candidates[it->second];
        c.best_rank = hit.rank();
        c.list_index = l;
        c.hit = &hit;
      }
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& a, const Candidate& b) {
                     return std::tie(a.best_rank, a.list_index, a.first_seen) <
                            std::tie(b.best_rank, b.list_index, b.first_seen);
                   });
  std::vector<SearchHit> merged;
  for (const auto& c : candidates) {
    if (merged.size() >= limit) break;
    merged.push_back(c.hit->with_rank(static_cast<int>(merged.size())));
  }
  return merged;
}

}  // namespace odqa
