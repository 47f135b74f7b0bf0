// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

// Shared domain types. All character offsets are Unicode scalar-value
// indices, never byte offsets.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace odqa {

inline constexpr std::size_t kMaxQuestionChars = 1000;
inline constexpr int kMaxSearchRank = 10;

enum class PosTag { kNoun, kVerb, kAdj, kAdv, kNum, kFunction, kPunct, kOther };

std::string_view to_string(PosTag pos) noexcept;
PosTag pos_from_string(std::string_view s);

/// Nouns, numerals, verbs, adjectives and adverbs.
bool is_content_pos(PosTag pos) noexcept;

class Question {
 public:
  /// Throws ValidationError when the text is blank, longer than
  /// kMaxQuestionChars scalar values, or not valid UTF-8.
  explicit Question(std::string text);

  const std::string& text() const noexcept { return text_; }
  std::string trimmed() const;
  std::size_t length() const noexcept { return length_; }

  bool operator==(const Question&) const = default;

 private:
  std::string text_;
  std::size_t length_ = 0;
};

struct Token {
  std::string surface;
  std::string lemma;
  PosTag pos = PosTag::kOther;
  std::size_t start_char = 0;
  std::size_t end_char = 0;

  bool operator==(const Token&) const = default;
};

enum class ProcessingSource { kRemote, kFallback };

std::string_view to_string(ProcessingSource source) noexcept;

class ProcessedQuestion {
 public:
  /// Validates that tokens are ordered, non-overlapping, inside the question
  /// and that each surface is exactly the text it covers.
  ProcessedQuestion(Question question, std::vector<Token> tokens,
                    ProcessingSource source);

  const Question& question() const noexcept { return question_; }
  const std::vector<Token>& tokens() const noexcept { return tokens_; }
  ProcessingSource source() const noexcept { return source_; }

  bool operator==(const ProcessedQuestion&) const = default;

 private:
  Question question_;
  std::vector<Token> tokens_;
  ProcessingSource source_;
};

class SearchHit {
 public:
  SearchHit(int rank, std::string url, std::string title, std::string snippet);

  int rank() const noexcept { return rank_; }
  const std::string& url() const noexcept { return url_; }
  const std::string& title() const noexcept { return title_; }
  const std::string& snippet() const noexcept { return snippet_; }

  SearchHit with_rank(int rank) const;

  bool operator==(const SearchHit&) const = default;

 private:
  int rank_;
  std::string url_;
  std::string title_;
  std::string snippet_;
};

class AnswerSpan {
 public:
  static AnswerSpan no_answer(double confidence);

  /// Slices the answer text out of `snippet` by scalar offsets.
  static AnswerSpan from_snippet(std::string_view snippet, std::size_t start_char,
                                 std::size_t end_char, double confidence);

  /// Validates the span on its own (start < end, text length matches,
  /// confidence in [0, 1]). Consistency with a snippet is checked by
  /// RankedAnswer.
  AnswerSpan(std::size_t start_char, std::size_t end_char, std::string text,
             double confidence);

  std::size_t start_char() const noexcept { return start_char_; }
  std::size_t end_char() const noexcept { return end_char_; }
  const std::string& text() const noexcept { return text_; }
  double confidence() const noexcept { return confidence_; }
  bool is_no_answer() const noexcept { return is_no_answer_; }

  bool operator==(const AnswerSpan&) const = default;

 private:
  AnswerSpan() = default;

  std::size_t start_char_ = 0;
  std::size_t end_char_ = 0;
  std::string text_;
  double confidence_ = 0.0;
  bool is_no_answer_ = true;
};

/// q = c * (10 - r) / 10. Throws DomainError when c is outside [0, 1] or r
/// outside [0, 10).
double combined_confidence(double c, int r);

class RankedAnswer {
 public:
  RankedAnswer(SearchHit hit, AnswerSpan answer);

  const SearchHit& hit() const noexcept { return hit_; }
  const AnswerSpan& answer() const noexcept { return answer_; }
  double combined() const noexcept { return combined_; }

  bool operator==(const RankedAnswer&) const = default;

 private:
  SearchHit hit_;
  AnswerSpan answer_;
  double combined_;
};

}  // namespace odqa

namespace nlohmann {

#define ODQA_JSON_SERIALIZER(Type)                        \
  template <>                                             \
  struct adl_serializer<Type> {                           \
    static void to_json(json& j, const Type& value);      \
    static Type from_json(const json& j);                 \
  }

ODQA_JSON_SERIALIZER(odqa::PosTag);
ODQA_JSON_SERIALIZER(odqa::Question);
ODQA_JSON_SERIALIZER(odqa::Token);
ODQA_JSON_SERIALIZER(odqa::ProcessedQuestion);
ODQA_JSON_SERIALIZER(odqa::SearchHit);
ODQA_JSON_SERIALIZER(odqa::AnswerSpan);
ODQA_JSON_SERIALIZER(odqa::RankedAnswer);

#undef ODQA_JSON_SERIALIZER

}  // namespace nlohmann
