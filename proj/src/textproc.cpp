// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/textproc.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <spdlog/spdlog.h>

#include "http_util.hpp"
#include "odqa/errors.hpp"
#include "odqa/normalize.hpp"
#include "odqa/utf8.hpp"

namespace odqa {
namespace {

bool is_word_joiner(char32_t c) noexcept {
  return c == U'-' || c == U'.' || c == U',' || c == U'/' || c == U'\'' || c == 0x2019;
}

bool is_numeral(std::u32string_view word) {
  // [0-9]+([.,][0-9]+)*
  bool need_digit = true;
  for (char32_t c : word) {
    if (utf8::is_digit(c)) {
      need_digit = false;
    } else if ((c == U'.' || c == U',') && !need_digit) {
      need_digit = true;
    } else {
      return false;
    }
  }
  return !need_digit;
}

bool all_punct(std::string_view s) {
  const auto chars = utf8::decode(s);
  if (chars.empty()) return false;
  for (char32_t c : chars) {
    if (!utf8::is_punct(c)) return false;
  }
  return true;
}

}  // namespace

Lexicon Lexicon::parse(std::string_view text) {
  Lexicon lexicon;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto entry = utf8::trim(line);
    if (!entry.empty()) lexicon.entries_.insert(fold_lower(entry));
  }
  return lexicon;
}

Lexicon Lexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open lexicon " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool Lexicon::contains(std::string_view word) const {
  return entries_.contains(fold_lower(word));
}

std::vector<TextSpan> split_words(std::u32string_view text) {
  std::vector<TextSpan> spans;
  std::size_t i = 0;
  while (i < text.size()) {
    const char32_t c = text[i];
    if (utf8::is_space(c)) {
      ++i;
      continue;
    }
    if (!utf8::is_alnum(c)) {
      spans.push_back({i, i + 1});
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    while (j < text.size()) {
      if (utf8::is_alnum(text[j])) {
        ++j;
      } else if (is_word_joiner(text[j]) && j + 1 < text.size() &&
                 utf8::is_alnum(text[j + 1])) {
        j += 2;
      } else {
        break;
      }
    }
    spans.push_back({i, j});
    i = j;
  }
  return spans;
}

ProcessedQuestion process_fallback(const Question& question, const Lexicon& lexicon) {
  const auto chars = utf8::decode(question.text());
  std::vector<Token> tokens;
  for (const auto& span : split_words(chars)) {
    const auto word = std::u32string_view(chars).substr(span.start, span.end - span.start);
    Token token;
    token.surface = utf8::encode(word);
    token.lemma = utf8::to_lower(token.surface);
    token.start_char = span.start;
    token.end_char = span.end;
    if (word.size() == 1 && !utf8::is_alnum(word.front())) {
      token.pos = PosTag::kPunct;
    } else if (is_numeral(word)) {
      token.pos = PosTag::kNum;
    } else if (lexicon.contains(token.surface)) {
      token.pos = PosTag::kFunction;
    } else {
      token.pos = PosTag::kNoun;
    }
    tokens.push_back(std::move(token));
  }
  return ProcessedQuestion(question, std::move(tokens), ProcessingSource::kFallback);
}

PosTag map_msd(std::string_view msd, std::string_view wordform) {
  if (all_punct(wordform)) return PosTag::kPunct;
  if (msd.empty()) return PosTag::kOther;
  // Punctuation MSDs in the Romanian tagset are spelled-out names.
  static const std::unordered_set<std::string_view> kPunctMsds = {
      "COMMA", "PERIOD", "QUEST", "EXCL", "COLON", "SCOLON", "DASH", "HYPHEN",
      "LPAR", "RPAR", "DBLQ", "QUOT", "SLASH", "PLUSS", "EQUAL", "STAR", "BULLET",
      "LSQR", "RSQR", "LCURL", "RCURL", "ELLIPSIS"};
  if (kPunctMsds.contains(msd)) return PosTag::kPunct;
  switch (msd.front()) {
    case 'N': return PosTag::kNoun;
    case 'V': return PosTag::kVerb;
    case 'A': return PosTag::kAdj;
    case 'R': return PosTag::kAdv;
    case 'M': return PosTag::kNum;
    case 'P':  // pronoun
    case 'D':  // determiner
    case 'S':  // adposition
    case 'C':  // conjunction
    case 'T':  // article
    case 'Q':  // particle
      return PosTag::kFunction;
    default:
      return PosTag::kOther;
  }
}

ProcessedQuestion parse_teprolin_response(const Question& question, std::string_view body) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("TEPROLIN response is not JSON: ") + e.what());
  }
  const auto result = doc.find("teprolin-result");
  if (result == doc.end() || !result->is_object() || !result->contains("tokenized") ||
      !result->at("tokenized").is_array()) {
    throw ProtocolError("TEPROLIN response lacks teprolin-result.tokenized");
  }

  const auto chars = utf8::decode(question.text());
  std::vector<Token> tokens;
  std::size_t cursor = 0;
  try {
    for (const auto& sentence : result->at("tokenized")) {
      for (const auto& entry : sentence) {
        const auto wordform = entry.at("_wordform").get<std::string>();
        const auto lemma = entry.value("_lemma", wordform);
        const auto msd = entry.value("_msd", std::string());
        const auto form = utf8::decode(wordform);
        if (form.empty()) continue;
        const auto at = std::u32string_view(chars).find(form, cursor);
        if (at == std::u32string_view::npos) {
          throw ProtocolError("word form '" + wordform + "' not found in question");
        }
        tokens.push_back(Token{wordform, lemma, map_msd(msd, wordform), at, at + form.size()});
        cursor = at + form.size();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed TEPROLIN token: ") + e.what());
  }
  try {
    return ProcessedQuestion(question, std::move(tokens), ProcessingSource::kRemote);
  } catch (const ValidationError& e) {
    throw ProtocolError(std::string("TEPROLIN tokens do not align: ") + e.what());
  }
}

ProcessedQuestion process_remote(const Question& question, const RemoteProcessorConfig& cfg) {
  const auto endpoint = detail::parse_endpoint(cfg.endpoint);
  const httplib::Params form = {
      {"text", question.text()},
      {"exec", "tokenization,pos-tagging,lemmatization,dependency-parsing"},
  };
  std::string last_error;
  for (int attempt = 0; attempt <= cfg.retries; ++attempt) {
    auto client = detail::make_client(endpoint, cfg.timeout_ms);
    auto res = client->Post(endpoint.path, form);
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status != 200) {
      throw ProtocolError("TEPROLIN returned HTTP " + std::to_string(res->status));
    }
    return parse_teprolin_response(question, res->body);
  }
  throw NetworkError("TEPROLIN unreachable at " + cfg.endpoint + ": " + last_error);
}

TextProcessor::TextProcessor(Lexicon lexicon, std::optional<RemoteProcessorConfig> remote)
    : lexicon_(std::move(lexicon)), remote_(std::move(remote)) {}

ProcessedQuestion TextProcessor::process(const Question& question) const {
  if (remote_ && !remote_->endpoint.empty()) {
    try {
      return process_remote(question, *remote_);
    } catch (const NetworkError& e) {
      spdlog::warn("question processing falls back to offline tagger: {}", e.what());
    } catch (const ProtocolError& e) {
      spdlog::warn("question processing falls back to offline tagger: {}", e.what());
    }
  }
  return process_fallback(question, lexicon_);
}

}  // namespace odqa
