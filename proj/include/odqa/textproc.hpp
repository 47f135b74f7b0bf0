// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

// Question processing: a remote TEPROLIN-compatible annotator with a
// deterministic offline tagger as fallback.

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "odqa/model.hpp"

namespace odqa {

/// A set of words matched case- and diacritic-insensitively. Used both for
/// the function-word lexicon and for the excluded frequent-verb list.
class Lexicon {
 public:
  Lexicon() = default;

  /// One entry per line, '#' starts a comment, blank lines ignored.
  static Lexicon parse(std::string_view text);
  static Lexicon load(const std::filesystem::path& path);

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::unordered_set<std::string> entries_;
};

struct TextSpan {
  std::size_t start = 0;
  std::size_t end = 0;
};

/// Splits text into word and punctuation spans (scalar offsets). Words are
/// maximal alphanumeric runs; '-', '.', ',', '/' and apostrophes stay inside
/// a word when flanked by alphanumerics ("COVID-19", "1,5", "într-o").
/// Every other punctuation scalar is its own span.
std::vector<TextSpan> split_words(std::u32string_view text);

/// Offline tagger. POS is NUM for numerals, FUNCTION for lexicon hits,
/// PUNCT for punctuation and NOUN otherwise; lemma is the lowercased surface.
ProcessedQuestion process_fallback(const Question& question, const Lexicon& lexicon);

struct RemoteProcessorConfig {
  std::string endpoint;
  int timeout_ms = 3000;
  int retries = 1;
};

/// Maps a MULTEXT-East MSD tag (as produced by TEPROLIN) to the collapsed
/// tagset.
PosTag map_msd(std::string_view msd, std::string_view wordform);

/// Interprets a TEPROLIN response body, aligning word forms to the question
/// text to recover character offsets. Throws ProtocolError.
ProcessedQuestion parse_teprolin_response(const Question& question, std::string_view body);

/// Throws NetworkError after the configured retries, ProtocolError on an
/// unparseable response.
ProcessedQuestion process_remote(const Question& question, const RemoteProcessorConfig& cfg);

/// Remote-then-fallback question processor. Stateless after construction.
class TextProcessor {
 public:
  TextProcessor(Lexicon lexicon, std::optional<RemoteProcessorConfig> remote);

  ProcessedQuestion process(const Question& question) const;

  const Lexicon& lexicon() const noexcept { return lexicon_; }

 private:
  Lexicon lexicon_;
  std::optional<RemoteProcessorConfig> remote_;
};

}  // namespace odqa
