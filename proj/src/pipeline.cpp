// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <optional>
#include <thread>

#include <spdlog/spdlog.h>

#include "odqa/errors.hpp"

namespace odqa {

std::string_view to_string(QueryMode mode) noexcept {
  switch (mode) {
    case QueryMode::kBaseline: return "baseline";
    case QueryMode::kContentWords: return "cw";
    case QueryMode::kContentWordsUnion: return "cw-union";
  }
  return "cw-union";
}

QueryMode query_mode_from_string(std::string_view s) {
  if (s == "baseline") return QueryMode::kBaseline;
  if (s == "cw") return QueryMode::kContentWords;
  if (s == "cw-union") return QueryMode::kContentWordsUnion;
  throw ConfigError("unknown query mode '" + std::string(s) +
                    "' (expected baseline, cw or cw-union)");
}

void sort_ranked(std::vector<RankedAnswer>& answers) {
  std::stable_sort(answers.begin(), answers.end(),
                   [](const RankedAnswer& a, const RankedAnswer& b) {
                     if (a.combined() != b.combined()) return a.combined() > b.combined();
                     return a.hit().rank() < b.hit().rank();
                   });
}

Pipeline::Pipeline(const TextProcessor& processor, const Lexicon& excluded_verbs,
                   const SearchProvider& search, const InferenceBackend& backend,
                   PipelineConfig cfg)
    : processor_(processor),
      excluded_verbs_(excluded_verbs),
      search_(search),
      backend_(backend),
      cfg_(std::move(cfg)) {
  cfg_.decoder.validate();
  if (cfg_.max_concurrency == 0) throw ConfigError("max_concurrency must be >= 1");
}

PipelineResult Pipeline::answer_question(const Question& question) const {
  return answer_question(question, cfg_.mode, cfg_.model);
}

std::vector<Query> Pipeline::queries_for(const Question& question, QueryMode mode) const {
  if (mode == QueryMode::kBaseline) return {generate_baseline(question)};
  const auto processed = processor_.process(question);
  if (mode == QueryMode::kContentWordsUnion) {
    return generate_query_set(processed, excluded_verbs_);
  }
  try {
    return {generate_content_words(processed, excluded_verbs_)};
  } catch (const NoContentWords&) {
    return {generate_baseline(question)};
  }
}

PipelineResult Pipeline::answer_question(const Question& question, QueryMode mode,
                                         const std::string& model) const {
  PipelineResult result;
  result.queries = queries_for(question, mode);

  std::vector<std::vector<SearchHit>> lists;
  std::string last_error;
  for (const auto& query : result.queries) {
    try {
      lists.push_back(search_.search(query));
    } catch (const Error& e) {
      spdlog::warn("search failed for '{}': {}", query.text(), e.what());
      last_error = e.what();
    }
  }
  if (lists.empty()) throw SearchFailed("all searches failed: " + last_error);

  const auto hits = merge_hits(lists);
  if (hits.empty()) throw NoResults("no search results for '" + question.text() + "'");

  std::vector<std::optional<AnswerSpan>> spans(hits.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (auto k = next.fetch_add(1); k < hits.size(); k = next.fetch_add(1)) {
      try {
        spans[k] = extract(question, hits[k].snippet(), backend_, cfg_.decoder, model);
      } catch (const Error& e) {
        spdlog::warn("skipping hit {} ({}): {}", hits[k].rank(), hits[k].url(), e.what());
      }
    }
  };
  {
    const auto n_threads = std::min(cfg_.max_concurrency, hits.size());
    std::vector<std::jthread> threads;
    for (std::size_t t = 1; t < n_threads; ++t) threads.emplace_back(worker);
    worker();
  }

  std::vector<RankedAnswer> answered;
  std::vector<RankedAnswer> unanswered;
  for (std::size_t k = 0; k < hits.size(); ++k) {
    if (!spans[k]) continue;
    auto& bucket = spans[k]->is_no_answer() ? unanswered : answered;
    bucket.emplace_back(hits[k], *spans[k]);
  }
  sort_ranked(answered);
  sort_ranked(unanswered);
  for (auto& extra : unanswered) {
    if (answered.size() >= cfg_.min_results) break;
    answered.push_back(std::move(extra));
  }
  sort_ranked(answered);
  result.answers = std::move(answered);
  return result;
}

}  // namespace odqa
