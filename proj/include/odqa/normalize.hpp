// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

namespace odqa {

/// Maps Romanian diacritics to their base letters: ă/â→a, î→i, ș/ş→s,
/// ț/ţ→t and the uppercase forms. Every other scalar is left untouched, so
/// the scalar-value length is preserved.
char32_t fold_diacritic(char32_t c) noexcept;
std::string fold_diacritics(std::string_view s);

/// Diacritic-folded lowercase form used for lexicon and fixture lookups.
std::string fold_lower(std::string_view s);

/// Trims and collapses internal whitespace runs to one ASCII space.
std::string collapse_whitespace(std::string_view s);

/// Lowercases scheme and host, drops the fragment and trailing slashes.
std::string normalize_url(std::string_view url);

}  // namespace odqa
