// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

// Evaluation against an annotated test set: mean reciprocal rank of the
// first relevant document, exact span match and character-overlap F1.

#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "odqa/model.hpp"

namespace odqa {

struct CharRange {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive

  std::size_t size() const noexcept { return end > start ? end - start : 0; }
  bool operator==(const CharRange&) const = default;
};

struct GoldDoc {
  std::string url;
  std::string snippet;
  std::vector<CharRange> answers;
};

struct GoldQuestion {
  std::string question;
  std::vector<GoldDoc> gold_docs;  // empty: no suitable document exists
};

/// Reads the test-set JSON array
/// [{question, gold_docs: [{url, snippet, answers: [{start, end}]}]}].
/// Throws ValidationError when a range does not fit its snippet.
std::vector<GoldQuestion> load_testset(const std::filesystem::path& path);
std::vector<GoldQuestion> parse_testset(const nlohmann::json& j);

/// 1 / (1-based position of the first result whose normalized URL is in
/// `gold_urls`), 0 when none is. `gold_urls` must already be normalized.
double reciprocal_rank(const std::vector<RankedAnswer>& results,
                       const std::unordered_set<std::string>& gold_urls);

/// True iff the predicted range equals one of the gold ranges.
bool exact_match(const AnswerSpan& pred, const std::vector<CharRange>& golds);

/// Maximum over golds of the F1 of overlapping characters. Throws
/// DomainError on an empty prediction.
double f1_char_overlap(CharRange pred, const std::vector<CharRange>& golds);

/// Bag-of-tokens F1 after lowercasing, removing punctuation and folding
/// diacritics. Both empty gives 1.
double f1_token(std::string_view pred_text, std::string_view gold_text);

struct QuestionEval {
  std::string question;
  std::size_t gold_docs = 0;
  bool gold_retrieved = false;
  double reciprocal_rank = 0.0;
  bool exact = false;
  double f1 = 0.0;
  std::optional<std::string> scored_url;
  std::optional<std::string> predicted;
  std::optional<std::string> error;
};

struct EvalReport {
  std::string label;
  std::size_t questions = 0;
  std::size_t answerable = 0;  // questions with at least one gold document
  double mrr = 0.0;
  double exact_pct = 0.0;
  double f1_pct = 0.0;
  double coverage_pct = 0.0;
  double retrieved_pct = 0.0;
  // Exact and F1 averaged over answerable questions only.
  double exact_answerable_pct = 0.0;
  double f1_answerable_pct = 0.0;
  std::vector<QuestionEval> per_question;

  /// MRR / Exact % / F1 % table.
  std::string render_table() const;
};

nlohmann::ordered_json to_json(const EvalReport& report);

using Answerer = std::function<std::vector<RankedAnswer>(const Question&)>;

/// Runs every question through `answerer`, in order. Exact and F1 are
/// scored on the highest-ranked result whose URL is gold (only the top
/// result when `only_top1`); questions without such a result score 0.
/// Answerer errors are recorded per question and score 0.
EvalReport run_eval(const std::vector<GoldQuestion>& testset, const Answerer& answerer,
                    bool only_top1 = false, std::string label = {});

}  // namespace odqa
