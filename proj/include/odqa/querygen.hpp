// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

// Search-query generation: the raw question (baseline), content-word
// selection, and its diacritic-free variant.

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "odqa/model.hpp"
#include "odqa/normalize.hpp"
#include "odqa/textproc.hpp"

namespace odqa {

enum class QueryKind { kBaseline, kContentWords, kContentWordsNoDiacritics };

std::string_view to_string(QueryKind kind) noexcept;

class Query {
 public:
  /// Throws ValidationError on an empty term list or a blank term.
  Query(std::vector<std::string> terms, QueryKind kind);

  const std::vector<std::string>& terms() const noexcept { return terms_; }
  QueryKind kind() const noexcept { return kind_; }

  /// Terms joined by single spaces; this is the string sent to the engine.
  std::string text() const;

  bool operator==(const Query&) const = default;

 private:
  std::vector<std::string> terms_;
  QueryKind kind_;
};

Query generate_baseline(const Question& question);

/// Nouns, numerals, verbs, adjectives and adverbs in question order, minus
/// frequent verbs. Exclusion matches the lemma of VERB tokens for remote
/// annotations and the folded surface of any content token for fallback
/// annotations. Throws NoContentWords when nothing survives.
Query generate_content_words(const ProcessedQuestion& pq, const Lexicon& excluded_verbs);

/// [content words, content words without diacritics], the second dropped
/// when identical to the first; degrades to [baseline] when the question
/// has no content words.
std::vector<Query> generate_query_set(const ProcessedQuestion& pq, const Lexicon& excluded_verbs);

}  // namespace odqa
