// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/querygen.hpp"

#include <utility>

#include "odqa/errors.hpp"
#include "odqa/utf8.hpp"

namespace odqa {

std::string_view to_string(QueryKind kind) noexcept {
  switch (kind) {
    case QueryKind::kBaseline: return "BASELINE";
    case QueryKind::kContentWords: return "CONTENT_WORDS";
    case QueryKind::kContentWordsNoDiacritics: return "CONTENT_WORDS_NO_DIACRITICS";
  }
  return "BASELINE";
}

Query::Query(std::vector<std::string> terms, QueryKind kind)
    : terms_(std::move(terms)), kind_(kind) {
  if (terms_.empty()) throw ValidationError("query has no terms");
  for (const auto& term : terms_) {
    if (utf8::trim(term).empty()) throw ValidationError("query has a blank term");
  }
}

std::string Query::text() const {
  std::string out;
  for (const auto& term : terms_) {
    if (!out.empty()) out.push_back(' ');
    out += term;
  }
  return out;
}

Query generate_baseline(const Question& question) {
  return Query({question.trimmed()}, QueryKind::kBaseline);
}

Query generate_content_words(const ProcessedQuestion& pq, const Lexicon& excluded_verbs) {
  const bool remote = pq.source() == ProcessingSource::kRemote;
  std::vector<std::string> terms;
  for (const auto& token : pq.tokens()) {
    if (!is_content_pos(token.pos)) continue;
    if (remote) {
      if (token.pos == PosTag::kVerb && excluded_verbs.contains(token.lemma)) continue;
    } else if (excluded_verbs.contains(token.surface)) {
      continue;
    }
    terms.push_back(token.surface);
  }
  if (terms.empty()) {
    throw NoContentWords("no content words in '" + pq.question().text() + "'");
  }
  return Query(std::move(terms), QueryKind::kContentWords);
}

std::vector<Query> generate_query_set(const ProcessedQuestion& pq,
                                      const Lexicon& excluded_verbs) {
  try {
    auto content = generate_content_words(pq, excluded_verbs);
    std::vector<std::string> folded;
    folded.reserve(content.terms().size());
    for (const auto& term : content.terms()) folded.push_back(fold_diacritics(term));

    std::vector<Query> queries;
    const bool same = folded == content.terms();
    queries.push_back(std::move(content));
    if (!same) queries.emplace_back(std::move(folded), QueryKind::kContentWordsNoDiacritics);
    return queries;
  } catch (const NoContentWords&) {
    return {generate_baseline(pq.question())};
  }
}

}  // namespace odqa
