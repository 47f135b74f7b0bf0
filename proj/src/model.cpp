// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/model.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "odqa/errors.hpp"
#include "odqa/utf8.hpp"

namespace odqa {
namespace {

constexpr std::array<std::pair<PosTag, std::string_view>, 8> kPosNames{{
    {PosTag::kNoun, "NOUN"},
    {PosTag::kVerb, "VERB"},
    {PosTag::kAdj, "ADJ"},
    {PosTag::kAdv, "ADV"},
    {PosTag::kNum, "NUM"},
    {PosTag::kFunction, "FUNCTION"},
    {PosTag::kPunct, "PUNCT"},
    {PosTag::kOther, "OTHER"},
}};

}  // namespace

std::string_view to_string(PosTag pos) noexcept {
  for (const auto& [tag, name] : kPosNames) {
    if (tag == pos) return name;
  }
  return "OTHER";
}

PosTag pos_from_string(std::string_view s) {
  for (const auto& [tag, name] : kPosNames) {
    if (name == s) return tag;
  }
  throw ValidationError("unknown POS tag '" + std::string(s) + "'");
}

bool is_content_pos(PosTag pos) noexcept {
  switch (pos) {
    case PosTag::kNoun:
    case PosTag::kNum:
    case PosTag::kVerb:
    case PosTag::kAdj:
    case PosTag::kAdv:
      return true;
    default:
      return false;
  }
}

std::string_view to_string(ProcessingSource source) noexcept {
  return source == ProcessingSource::kRemote ? "REMOTE" : "FALLBACK";
}

Question::Question(std::string text) : text_(std::move(text)) {
  if (!utf8::is_valid(text_)) throw ValidationError("question is not valid UTF-8");
  if (utf8::trim(text_).empty()) throw ValidationError("question is empty");
  length_ = utf8::length(text_);
  if (length_ > kMaxQuestionChars) {
    throw ValidationError("question exceeds " + std::to_string(kMaxQuestionChars) +
                          " characters");
  }
}

std::string Question::trimmed() const { return utf8::trim(text_); }

ProcessedQuestion::ProcessedQuestion(Question question, std::vector<Token> tokens,
                                     ProcessingSource source)
    : question_(std::move(question)), tokens_(std::move(tokens)), source_(source) {
  const auto chars = utf8::decode(question_.text());
  std::size_t cursor = 0;
  for (const auto& token : tokens_) {
    if (token.start_char >= token.end_char || token.end_char > chars.size()) {
      throw ValidationError("token '" + token.surface + "' has invalid offsets");
    }
    if (token.start_char < cursor) {
      throw ValidationError("tokens overlap or are out of order at '" +
                            token.surface + "'");
    }
    const auto covered = utf8::encode(std::u32string_view(chars).substr(
        token.start_char, token.end_char - token.start_char));
    if (covered != token.surface) {
      throw ValidationError("token surface '" + token.surface +
                            "' does not match question text '" + covered + "'");
    }
    cursor = token.end_char;
  }
}

SearchHit::SearchHit(int rank, std::string url, std::string title, std::string snippet)
    : rank_(rank), url_(std::move(url)), title_(std::move(title)), snippet_(std::move(snippet)) {
  if (rank_ < 0 || rank_ >= kMaxSearchRank) {
    throw ValidationError("search rank " + std::to_string(rank_) + " outside [0, 10)");
  }
  if (snippet_.empty()) throw ValidationError("search hit has an empty snippet");
  if (!utf8::is_valid(snippet_)) throw ValidationError("snippet is not valid UTF-8");
}

SearchHit SearchHit::with_rank(int rank) const {
  return SearchHit(rank, url_, title_, snippet_);
}

AnswerSpan AnswerSpan::no_answer(double confidence) {
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw ValidationError("confidence outside [0, 1]");
  }
  AnswerSpan span;
  span.confidence_ = confidence;
  return span;
}

AnswerSpan AnswerSpan::from_snippet(std::string_view snippet, std::size_t start_char,
                                    std::size_t end_char, double confidence) {
  return AnswerSpan(start_char, end_char, utf8::slice(snippet, start_char, end_char),
                    confidence);
}

AnswerSpan::AnswerSpan(std::size_t start_char, std::size_t end_char, std::string text,
                       double confidence)
    : start_char_(start_char),
      end_char_(end_char),
      text_(std::move(text)),
      confidence_(confidence),
      is_no_answer_(false) {
  if (start_char_ >= end_char_) throw ValidationError("answer span is empty");
  if (!(confidence_ >= 0.0 && confidence_ <= 1.0)) {
    throw ValidationError("confidence outside [0, 1]");
  }
  if (utf8::length(text_) != end_char_ - start_char_) {
    throw ValidationError("answer text length does not match its span");
  }
}

double combined_confidence(double c, int r) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw DomainError("confidence " + std::to_string(c) + " outside [0, 1]");
  }
  if (r < 0 || r >= kMaxSearchRank) {
    throw DomainError("rank " + std::to_string(r) + " outside [0, 10)");
  }
  return c * (10 - r) / 10;
}

RankedAnswer::RankedAnswer(SearchHit hit, AnswerSpan answer)
    : hit_(std::move(hit)),
      answer_(std::move(answer)),
      combined_(combined_confidence(answer_.confidence(), hit_.rank())) {
  if (!answer_.is_no_answer()) {
    const auto length = utf8::length(hit_.snippet());
    if (answer_.end_char() > length ||
        utf8::slice(hit_.snippet(), answer_.start_char(), answer_.end_char()) !=
            answer_.text()) {
      throw ValidationError("answer span is not a slice of the hit snippet");
    }
  }
}

}  // namespace odqa

namespace nlohmann {

using odqa::AnswerSpan;
using odqa::PosTag;
using odqa::ProcessedQuestion;
using odqa::Question;
using odqa::RankedAnswer;
using odqa::SearchHit;
using odqa::Token;

namespace {

template <typename F>
auto rethrow_as_validation(F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw odqa::ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

void adl_serializer<PosTag>::to_json(json& j, const PosTag& value) {
  j = std::string(odqa::to_string(value));
}

PosTag adl_serializer<PosTag>::from_json(const json& j) {
  return rethrow_as_validation([&] { return odqa::pos_from_string(j.get<std::string>()); });
}

void adl_serializer<Question>::to_json(json& j, const Question& value) {
  j = json{{"text", value.text()}};
}

Question adl_serializer<Question>::from_json(const json& j) {
  return rethrow_as_validation([&] { return Question(j.at("text").get<std::string>()); });
}

void adl_serializer<Token>::to_json(json& j, const Token& value) {
  j = json{{"surface", value.surface},
           {"lemma", value.lemma},
           {"pos", value.pos},
           {"start_char", value.start_char},
           {"end_char", value.end_char}};
}

Token adl_serializer<Token>::from_json(const json& j) {
  return rethrow_as_validation([&] {
    Token t{j.at("surface").get<std::string>(), j.at("lemma").get<std::string>(),
            j.at("pos").get<PosTag>(), j.at("start_char").get<std::size_t>(),
            j.at("end_char").get<std::size_t>()};
    if (t.start_char >= t.end_char) throw odqa::ValidationError("token span is empty");
    return t;
  });
}

void adl_serializer<ProcessedQuestion>::to_json(json& j, const ProcessedQuestion& value) {
  j = json{{"question", value.question()},
           {"tokens", value.tokens()},
           {"source", std::string(odqa::to_string(value.source()))}};
}

ProcessedQuestion adl_serializer<ProcessedQuestion>::from_json(const json& j) {
  return rethrow_as_validation([&] {
    const auto source = j.at("source").get<std::string>();
    if (source != "REMOTE" && source != "FALLBACK") {
      throw odqa::ValidationError("unknown processing source '" + source + "'");
    }
    std::vector<Token> tokens;
    for (const auto& t : j.at("tokens")) tokens.push_back(t.get<Token>());
    return ProcessedQuestion(j.at("question").get<Question>(), std::move(tokens),
                             source == "REMOTE" ? odqa::ProcessingSource::kRemote
                                                : odqa::ProcessingSource::kFallback);
  });
}

void adl_serializer<SearchHit>::to_json(json& j, const SearchHit& value) {
  j = json{{"rank", value.rank()},
           {"url", value.url()},
           {"title", value.title()},
           {"snippet", value.snippet()}};
}

SearchHit adl_serializer<SearchHit>::from_json(const json& j) {
  return rethrow_as_validation([&] {
    return SearchHit(j.at("rank").get<int>(), j.at("url").get<std::string>(),
                     j.at("title").get<std::string>(), j.at("snippet").get<std::string>());
  });
}

void adl_serializer<AnswerSpan>::to_json(json& j, const AnswerSpan& value) {
  j = json{{"start_char", value.start_char()},
           {"end_char", value.end_char()},
           {"text", value.text()},
           {"confidence", value.confidence()},
           {"is_no_answer", value.is_no_answer()}};
}

AnswerSpan adl_serializer<AnswerSpan>::from_json(const json& j) {
  return rethrow_as_validation([&] {
    const double c = j.at("confidence").get<double>();
    if (j.at("is_no_answer").get<bool>()) {
      if (j.at("start_char").get<std::size_t>() != 0 ||
          j.at("end_char").get<std::size_t>() != 0 ||
          !j.at("text").get<std::string>().empty()) {
        throw odqa::ValidationError("no-answer span must be empty at offset 0");
      }
      return AnswerSpan::no_answer(c);
    }
    return AnswerSpan(j.at("start_char").get<std::size_t>(),
                      j.at("end_char").get<std::size_t>(), j.at("text").get<std::string>(),
                      c);
  });
}

void adl_serializer<RankedAnswer>::to_json(json& j, const RankedAnswer& value) {
  j = json{{"hit", value.hit()}, {"answer", value.answer()}, {"combined", value.combined()}};
}

RankedAnswer adl_serializer<RankedAnswer>::from_json(const json& j) {
  return rethrow_as_validation([&] {
    RankedAnswer ranked(j.at("hit").get<SearchHit>(), j.at("answer").get<AnswerSpan>());
    if (j.contains("combined") && j.at("combined").get<double>() != ranked.combined()) {
      throw odqa::ValidationError("combined confidence does not match c and r");
    }
    return ranked;
  });
}

}  // namespace nlohmann
