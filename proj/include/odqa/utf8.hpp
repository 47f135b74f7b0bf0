// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace odqa::utf8 {

/// Decodes UTF-8 into Unicode scalar values. Throws ValidationError on
/// malformed input (overlongs, surrogates and truncated sequences included).
std::u32string decode(std::string_view s);

std::string encode(std::u32string_view s);
void append(std::string& out, char32_t c);

/// Number of Unicode scalar values in `s`.
std::size_t length(std::string_view s);

/// Substring by scalar-value offsets [start, end). Throws ValidationError
/// when the range is out of bounds.
std::string slice(std::string_view s, std::size_t start, std::size_t end);

bool is_valid(std::string_view s) noexcept;

bool is_space(char32_t c) noexcept;

/// ASCII and common Unicode punctuation (quotes, dashes, ellipsis).
bool is_punct(char32_t c) noexcept;

bool is_digit(char32_t c) noexcept;

/// Letters or digits; every non-ASCII scalar that is neither space nor
/// punctuation counts as a letter.
bool is_alnum(char32_t c) noexcept;

/// Simple lowercase mapping for ASCII, Latin-1 and the Latin Extended
/// ranges used by Romanian (including comma-below and cedilla forms).
char32_t to_lower(char32_t c) noexcept;
std::string to_lower(std::string_view s);

std::string trim(std::string_view s);

}  // namespace odqa::utf8
