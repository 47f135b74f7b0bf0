// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/normalize.hpp"

#include <algorithm>
#include <cctype>

#include "odqa/utf8.hpp"

namespace odqa {

char32_t fold_diacritic(char32_t c) noexcept {
  switch (c) {
    case 0x0103:  // ă
    case 0x00E2:  // â
      return U'a';
    case 0x0102:  // Ă
    case 0x00C2:  // Â
      return U'A';
    case 0x00EE:  // î
      return U'i';
    case 0x00CE:  // Î
      return U'I';
    case 0x0219:  // ș
    case 0x015F:  // ş
      return U's';
    case 0x0218:  // Ș
    case 0x015E:  // Ş
      return U'S';
    case 0x021B:  // ț
    case 0x0163:  // ţ
      return U't';
    case 0x021A:  // Ț
    case 0x0162:  // Ţ
      return U'T';
    default:
      return c;
  }
}

std::string fold_diacritics(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : utf8::decode(s)) utf8::append(out, fold_diacritic(c));
  return out;
}

std::string fold_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : utf8::decode(s)) utf8::append(out, utf8::to_lower(fold_diacritic(c)));
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending_space = false;
  for (char32_t c : utf8::decode(s)) {
    if (utf8::is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    utf8::append(out, c);
  }
  return out;
}

std::string normalize_url(std::string_view url) {
  std::string out(url);
  if (const auto hash = out.find('#'); hash != std::string::npos) out.erase(hash);

  std::size_t host_begin = 0;
  if (const auto sep = out.find("://"); sep != std::string::npos) {
    std::transform(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(sep), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    host_begin = sep + 3;
  }
  auto host_end = out.find_first_of("/?", host_begin);
  if (host_end == std::string::npos) host_end = out.size();
  std::transform(out.begin() + static_cast<std::ptrdiff_t>(host_begin),
                 out.begin() + static_cast<std::ptrdiff_t>(host_end),
                 out.begin() + static_cast<std::ptrdiff_t>(host_begin),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });

  while (out.size() > host_begin && out.back() == '/') out.pop_back();
  return out;
}

}  // namespace odqa
