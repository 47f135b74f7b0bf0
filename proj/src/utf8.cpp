// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/utf8.hpp"

#include "odqa/errors.hpp"

namespace odqa::utf8 {
namespace {

// Returns the decoded scalar and advances `pos`; returns U+FFFFFFFF on error.
constexpr char32_t kBad = 0xFFFFFFFF;

char32_t next(std::string_view s, std::size_t& pos) noexcept {
  const auto b0 = static_cast<unsigned char>(s[pos]);
  if (b0 < 0x80) {
    ++pos;
    return b0;
  }
  int extra = 0;
  char32_t cp = 0;
  char32_t min = 0;
  if ((b0 & 0xE0) == 0xC0) {
    extra = 1;
    cp = b0 & 0x1F;
    min = 0x80;
  } else if ((b0 & 0xF0) == 0xE0) {
    extra = 2;
    cp = b0 & 0x0F;
    min = 0x800;
  } else if ((b0 & 0xF8) == 0xF0) {
    extra = 3;
    cp = b0 & 0x07;
    min = 0x10000;
  } else {
    return kBad;
  }
  if (pos + extra >= s.size()) return kBad;
  for (int k = 1; k <= extra; ++k) {
    const auto b = static_cast<unsigned char>(s[pos + k]);
    if ((b & 0xC0) != 0x80) return kBad;
    cp = (cp << 6) | (b & 0x3F);
  }
  if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return kBad;
  pos += extra + 1;
  return cp;
}

}  // namespace

std::u32string decode(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  std::size_t pos = 0;
  while (pos < s.size()) {
    const char32_t c = next(s, pos);
    if (c == kBad) {
      throw ValidationError("invalid UTF-8 at byte " + std::to_string(pos));
    }
    out.push_back(c);
  }
  return out;
}

void append(std::string& out, char32_t c) {
  if (c < 0x80) {
    out.push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (c >> 6)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (c >> 12)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (c >> 18)));
    out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

std::string encode(std::u32string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : s) append(out, c);
  return out;
}

std::size_t length(std::string_view s) { return decode(s).size(); }

std::string slice(std::string_view s, std::size_t start, std::size_t end) {
  const auto chars = decode(s);
  if (start > end || end > chars.size()) {
    throw ValidationError("slice [" + std::to_string(start) + ", " +
                          std::to_string(end) + ") out of bounds for length " +
                          std::to_string(chars.size()));
  }
  return encode(std::u32string_view(chars).substr(start, end - start));
}

bool is_valid(std::string_view s) noexcept {
  std::size_t pos = 0;
  while (pos < s.size()) {
    if (next(s, pos) == kBad) return false;
  }
  return true;
}

bool is_space(char32_t c) noexcept {
  switch (c) {
    case U' ': case U'\t': case U'\n': case U'\r': case U'\v': case U'\f':
    case 0x00A0: case 0x2000: case 0x2001: case 0x2002: case 0x2003:
    case 0x2004: case 0x2005: case 0x2006: case 0x2007: case 0x2008:
    case 0x2009: case 0x200A: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return false;
  }
}

bool is_punct(char32_t c) noexcept {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0x00A1: case 0x00AB: case 0x00B7: case 0x00BB: case 0x00BF:
    case 0x2010: case 0x2011: case 0x2012: case 0x2013: case 0x2014:
    case 0x2015: case 0x2018: case 0x2019: case 0x201A: case 0x201C:
    case 0x201D: case 0x201E: case 0x2022: case 0x2026: case 0x2039:
    case 0x203A:
      return true;
    default:
      return false;
  }
}

bool is_digit(char32_t c) noexcept { return c >= U'0' && c <= U'9'; }

bool is_alnum(char32_t c) noexcept {
  if (c < 0x80) {
    return is_digit(c) || (c >= U'a' && c <= U'z') || (c >= U'A' && c <= U'Z');
  }
  return !is_space(c) && !is_punct(c) && c != 0xE000 && c != 0xE001;
}

char32_t to_lower(char32_t c) noexcept {
  if (c >= U'A' && c <= U'Z') return c + 0x20;
  if (c < 0xC0) return c;
  if (c <= 0xDE) return c == 0xD7 ? c : c + 0x20;
  // Latin Extended-A: mostly even/odd case pairs.
  if (c >= 0x100 && c <= 0x137) return (c % 2 == 0) ? c + 1 : c;
  if (c >= 0x139 && c <= 0x148) return (c % 2 == 1) ? c + 1 : c;
  if (c >= 0x14A && c <= 0x177) return (c % 2 == 0) ? c + 1 : c;
  if (c == 0x178) return 0xFF;
  if (c >= 0x179 && c <= 0x17E) return (c % 2 == 1) ? c + 1 : c;
  // Comma-below S/T (U+0218..U+021B).
  if (c >= 0x218 && c <= 0x21B) return (c % 2 == 0) ? c + 1 : c;
  return c;
}

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char32_t c : decode(s)) append(out, to_lower(c));
  return out;
}

std::string trim(std::string_view s) {
  const auto chars = decode(s);
  std::size_t b = 0;
  std::size_t e = chars.size();
  while (b < e && is_space(chars[b])) ++b;
  while (e > b && is_space(chars[e - 1])) --e;
  return encode(std::u32string_view(chars).substr(b, e - b));
}

}  // namespace odqa::utf8
