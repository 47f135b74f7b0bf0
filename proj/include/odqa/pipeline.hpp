// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

// The end-to-end flow: process the question, generate queries, search,
// highlight an answer in every snippet and re-rank by combined confidence.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "odqa/extractor.hpp"
#include "odqa/model.hpp"
#include "odqa/querygen.hpp"
#include "odqa/search.hpp"
#include "odqa/textproc.hpp"

namespace odqa {

enum class QueryMode { kBaseline, kContentWords, kContentWordsUnion };

std::string_view to_string(QueryMode mode) noexcept;
/// Accepts "baseline", "cw" and "cw-union". Throws ConfigError.
QueryMode query_mode_from_string(std::string_view s);

struct PipelineConfig {
  QueryMode mode = QueryMode::kContentWordsUnion;
  DecoderConfig decoder;
  std::size_t min_results = 1;
  std::size_t max_concurrency = 4;
  std::string model = "covid-ro-v1";
};

struct PipelineResult {
  std::vector<Query> queries;
  std::vector<RankedAnswer> answers;
};

/// Sorts by combined confidence descending, ties by ascending search rank.
void sort_ranked(std::vector<RankedAnswer>& answers);

/// Immutable after construction; answer_question may be called from many
/// threads. The referenced components must outlive the pipeline.
class Pipeline {
 public:
  Pipeline(const TextProcessor& processor, const Lexicon& excluded_verbs,
           const SearchProvider& search, const InferenceBackend& backend,
           PipelineConfig cfg);

  /// Throws SearchFailed when every query errored and NoResults when the
  /// merged hit list is empty. Snippets whose extraction fails are skipped.
  PipelineResult answer_question(const Question& question) const;

  /// Same, with a per-call query mode and model.
  PipelineResult answer_question(const Question& question, QueryMode mode,
                                 const std::string& model) const;

  /// The queries answer_question issues for `mode`.
  std::vector<Query> queries_for(const Question& question, QueryMode mode) const;

  const PipelineConfig& config() const noexcept { return cfg_; }

 private:
  const TextProcessor& processor_;
  const Lexicon& excluded_verbs_;
  const SearchProvider& search_;
  const InferenceBackend& backend_;
  PipelineConfig cfg_;
};

}  // namespace odqa
