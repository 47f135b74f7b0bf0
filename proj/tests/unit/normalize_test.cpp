// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/normalize.hpp"

#include <gtest/gtest.h>

#include "odqa/errors.hpp"
#include "odqa/utf8.hpp"
#include "test_support.hpp"

namespace odqa {
namespace {

TEST(Utf8, DecodeEncodeRoundTrip) {
  const std::string s = "Înțepătură „citat” 2021";
  const auto u = utf8::decode(s);
  EXPECT_EQ(u.size(), 23u);
  EXPECT_EQ(utf8::encode(u), s);
  EXPECT_EQ(utf8::length(s), 23u);
}

TEST(Utf8, RejectsMalformedInput) {
  EXPECT_FALSE(utf8::is_valid("\xC3"));
  EXPECT_FALSE(utf8::is_valid("\xC0\xAF"));        // overlong
  EXPECT_FALSE(utf8::is_valid("\xED\xA0\x80"));    // surrogate
  EXPECT_TRUE(utf8::is_valid("ăâîșț"));
  EXPECT_THROW(utf8::decode("ab\xFF"), ValidationError);
}

TEST(Utf8, SliceUsesScalarOffsets) {
  EXPECT_EQ(utf8::slice("vremea caldă", 7, 12), "caldă");
  EXPECT_EQ(utf8::slice("ăâî", 1, 1), "");
  EXPECT_THROW(utf8::slice("abc", 2, 4), ValidationError);
  EXPECT_THROW(utf8::slice("abc", 2, 1), ValidationError);
}

TEST(Utf8, CharacterClasses) {
  EXPECT_TRUE(utf8::is_punct(U'?'));
  EXPECT_TRUE(utf8::is_punct(U'„'));
  EXPECT_TRUE(utf8::is_punct(U'–'));
  EXPECT_FALSE(utf8::is_punct(U'ă'));
  EXPECT_TRUE(utf8::is_alnum(U'ș'));
  EXPECT_TRUE(utf8::is_space(U' '));
  EXPECT_EQ(utf8::to_lower(U'Ș'), U'ș');
  EXPECT_EQ(utf8::to_lower(U'Ţ'), U'ţ');
  EXPECT_EQ(utf8::to_lower("ÎNȚEPĂTURĂ"), "înțepătură");
  EXPECT_EQ(utf8::trim("  \t x y \n"), "x y");
}

TEST(FoldDiacritics, Examples) {
  EXPECT_EQ(fold_diacritics("înțepătură"), "intepatura");
  EXPECT_EQ(fold_diacritics("COVID"), "COVID");
  EXPECT_EQ(fold_diacritics("ĂÂÎȘȚŞŢ ăâîșțşţ"), "AAISTST aaistst");
  EXPECT_EQ(fold_diacritics(""), "");
  EXPECT_EQ(fold_diacritics("café"), "café");
}

TEST(FoldDiacritics, MapsExactlyTheRomanianTable) {
  const std::u32string from = U"ăâîșşțţĂÂÎȘŞȚŢ";
  const std::u32string to = U"aaisstt" U"AAISSTT";
  for (std::size_t k = 0; k < from.size(); ++k) EXPECT_EQ(fold_diacritic(from[k]), to[k]);
  for (char32_t c = 0; c < 0x2000; ++c) {
    if (from.find(c) == std::u32string::npos) {
      EXPECT_EQ(fold_diacritic(c), c) << static_cast<std::uint32_t>(c);
    }
  }
}

TEST(FoldDiacritics, PropertiesOnRandomText) {
  testing::Gen gen(11);
  for (int k = 0; k < 2000; ++k) {
    const auto s = gen.text(40);
    const auto once = fold_diacritics(s);
    EXPECT_EQ(fold_diacritics(once), once);
    EXPECT_EQ(utf8::length(once), utf8::length(s));
    for (char32_t c : utf8::decode(once)) {
      EXPECT_EQ(std::u32string(U"ăâîșşțţĂÂÎȘŞȚŢ").find(c), std::u32string::npos);
    }
  }
}

TEST(FoldLower, CombinesCaseAndDiacritics) {
  EXPECT_EQ(fold_lower("În"), "in");
  EXPECT_EQ(fold_lower("ȘI"), "si");
}

TEST(CollapseWhitespace, TrimsAndSqueezes) {
  EXPECT_EQ(collapse_whitespace("  a \t\n b  c "), "a b c");
  EXPECT_EQ(collapse_whitespace("   "), "");
}

TEST(NormalizeUrl, CosmeticVariantsCompareEqual) {
  EXPECT_EQ(normalize_url("HTTPS://WWW.Example.ORG/Path/"), "https://www.example.org/Path");
  EXPECT_EQ(normalize_url("https://example.org/a#section"), "https://example.org/a");
  EXPECT_EQ(normalize_url("https://example.org/"), "https://example.org");
  EXPECT_EQ(normalize_url("https://example.org/a?q=1"), "https://example.org/a?q=1");
}

}  // namespace
}  // namespace odqa
