// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/model.hpp"

#include <gtest/gtest.h>

#include "odqa/errors.hpp"
#include "odqa/utf8.hpp"
#include "test_support.hpp"

namespace odqa {
namespace {

template <typename T>
T round_trip(const T& value) {
  const nlohmann::json j = value;
  return nlohmann::json::parse(j.dump()).get<T>();
}

TEST(Question, Validation) {
  EXPECT_THROW(Question(""), ValidationError);
  EXPECT_THROW(Question(" \t\n"), ValidationError);
  EXPECT_THROW(Question("\xFF"), ValidationError);
  EXPECT_NO_THROW(Question(std::string(1000, 'a')));
  EXPECT_THROW(Question(std::string(1001, 'a')), ValidationError);

  std::string thousand_diacritics;
  for (int k = 0; k < 1000; ++k) thousand_diacritics += "ă";
  EXPECT_NO_THROW(Question{thousand_diacritics});
  EXPECT_EQ(Question("  x  ").trimmed(), "x");
}

TEST(ProcessedQuestion, RejectsBadOffsets) {
  const Question q("Covid?");
  EXPECT_NO_THROW(ProcessedQuestion(q,
                                    {{"Covid", "covid", PosTag::kNoun, 0, 5},
                                     {"?", "?", PosTag::kPunct, 5, 6}},
                                    ProcessingSource::kFallback));
  // surface does not match the covered text
  EXPECT_THROW(ProcessedQuestion(q, {{"Covix", "covid", PosTag::kNoun, 0, 5}},
                                 ProcessingSource::kFallback),
               ValidationError);
  // overlapping
  EXPECT_THROW(ProcessedQuestion(q,
                                 {{"Covid", "covid", PosTag::kNoun, 0, 5},
                                  {"d?", "d?", PosTag::kNoun, 4, 6}},
                                 ProcessingSource::kFallback),
               ValidationError);
  // past the end
  EXPECT_THROW(ProcessedQuestion(q, {{"?", "?", PosTag::kPunct, 6, 7}},
                                 ProcessingSource::kFallback),
               ValidationError);
  // empty
  EXPECT_THROW(ProcessedQuestion(q, {{"", "", PosTag::kPunct, 2, 2}},
                                 ProcessingSource::kFallback),
               ValidationError);
}

TEST(SearchHit, Validation) {
  EXPECT_NO_THROW(SearchHit(0, "u", "t", "s"));
  EXPECT_NO_THROW(SearchHit(9, "u", "t", "s"));
  EXPECT_THROW(SearchHit(10, "u", "t", "s"), ValidationError);
  EXPECT_THROW(SearchHit(-1, "u", "t", "s"), ValidationError);
  EXPECT_THROW(SearchHit(0, "u", "t", ""), ValidationError);
  EXPECT_EQ(SearchHit(3, "u", "t", "s").with_rank(1).rank(), 1);
}

TEST(AnswerSpan, Validation) {
  const auto a = AnswerSpan::from_snippet("vremea caldă ajută", 7, 12, 0.4);
  EXPECT_EQ(a.text(), "caldă");
  EXPECT_FALSE(a.is_no_answer());
  EXPECT_THROW(AnswerSpan::from_snippet("abc", 2, 2, 0.4), ValidationError);
  EXPECT_THROW(AnswerSpan::from_snippet("abc", 1, 4, 0.4), ValidationError);
  EXPECT_THROW(AnswerSpan(0, 2, "abc", 0.5), ValidationError);
  EXPECT_THROW(AnswerSpan(0, 3, "abc", 1.5), ValidationError);
  EXPECT_THROW(AnswerSpan(0, 3, "abc", -0.1), ValidationError);

  const auto none = AnswerSpan::no_answer(0.7);
  EXPECT_TRUE(none.is_no_answer());
  EXPECT_EQ(none.start_char(), 0u);
  EXPECT_EQ(none.end_char(), 0u);
  EXPECT_EQ(none.text(), "");
}

TEST(CombinedConfidence, Examples) {
  EXPECT_EQ(combined_confidence(1.0, 0), 1.0);
  EXPECT_NEAR(combined_confidence(0.8, 3), 0.56, 1e-12);
  EXPECT_NEAR(combined_confidence(0.5, 9), 0.05, 1e-12);
  EXPECT_EQ(combined_confidence(0.0, 5), 0.0);
}

TEST(CombinedConfidence, DomainErrors) {
  EXPECT_THROW(combined_confidence(1.01, 0), DomainError);
  EXPECT_THROW(combined_confidence(-0.01, 0), DomainError);
  EXPECT_THROW(combined_confidence(0.5, 10), DomainError);
  EXPECT_THROW(combined_confidence(0.5, -1), DomainError);
  EXPECT_THROW(combined_confidence(std::nan(""), 0), DomainError);
}

TEST(CombinedConfidence, MonotoneOverTheGrid) {
  for (int ci = 0; ci <= 10; ++ci) {
    const double c = ci / 10.0;
    for (int r = 0; r < 10; ++r) {
      const double q = combined_confidence(c, r);
      EXPECT_EQ(q, c * (10 - r) / 10);
      EXPECT_GE(q, 0.0);
      EXPECT_LE(q, 1.0);
      if (c > 0 && r > 0) EXPECT_LT(q, combined_confidence(c, r - 1));
      if (ci > 0) EXPECT_GT(q, combined_confidence((ci - 1) / 10.0, r));
    }
  }
}

TEST(RankedAnswer, ComputesCombinedAndChecksSpan) {
  const SearchHit hit(2, "https://a.ro", "A", "vremea caldă");
  const RankedAnswer ra(hit, AnswerSpan::from_snippet(hit.snippet(), 7, 12, 0.5));
  EXPECT_EQ(ra.combined(), combined_confidence(0.5, 2));
  EXPECT_THROW(RankedAnswer(hit, AnswerSpan(0, 4, "abcd", 0.5)), ValidationError);
  EXPECT_THROW(RankedAnswer(hit, AnswerSpan(0, 30, std::string(30, 'x'), 0.5)),
               ValidationError);
}

TEST(Json, RoundTripsEveryType) {
  EXPECT_EQ(round_trip(PosTag::kAdv), PosTag::kAdv);
  const Question q("Covid?");
  EXPECT_EQ(round_trip(q), q);
  const Token t{"Covid", "covid", PosTag::kNoun, 0, 5};
  EXPECT_EQ(round_trip(t), t);
  const ProcessedQuestion pq(q, {t, {"?", "?", PosTag::kPunct, 5, 6}},
                             ProcessingSource::kRemote);
  EXPECT_EQ(round_trip(pq), pq);
  const SearchHit hit(4, "https://a.ro/x", "Titlu", "Înțepătură și vaccin");
  EXPECT_EQ(round_trip(hit), hit);
  const auto span = AnswerSpan::from_snippet(hit.snippet(), 0, 10, 0.25);
  EXPECT_EQ(round_trip(span), span);
  EXPECT_EQ(round_trip(AnswerSpan::no_answer(0.9)), AnswerSpan::no_answer(0.9));
  const RankedAnswer ra(hit, span);
  EXPECT_EQ(round_trip(ra), ra);
}

TEST(Json, RandomAnswerSpansRoundTrip) {
  testing::Gen gen(5);
  for (int k = 0; k < 500; ++k) {
    auto snippet = gen.text(30);
    snippet += "x";
    const auto n = utf8::length(snippet);
    const auto start = gen.index(0, n - 1);
    const auto end = gen.index(start + 1, n);
    const auto span = AnswerSpan::from_snippet(snippet, start, end, gen.uniform(0, 1));
    EXPECT_EQ(round_trip(span), span);
    const RankedAnswer ra(SearchHit(static_cast<int>(gen.index(0, 9)), "u", "t", snippet), span);
    EXPECT_EQ(round_trip(ra), ra);
  }
}

TEST(Json, InvalidDocumentsBecomeValidationErrors) {
  EXPECT_THROW(nlohmann::json::parse(R"({"rank": 12, "url": "u", "title": "t", "snippet": "s"})")
                   .get<SearchHit>(),
               ValidationError);
  EXPECT_THROW(nlohmann::json::parse(R"({"url": "u"})").get<SearchHit>(), ValidationError);
  EXPECT_THROW(nlohmann::json::parse(R"("ADVERB")").get<PosTag>(), ValidationError);
}

}  // namespace
}  // namespace odqa
