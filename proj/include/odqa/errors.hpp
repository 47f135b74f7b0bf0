// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace odqa {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define ODQA_DEFINE_ERROR(Name)          \
  class Name : public Error {            \
   public:                               \
    using Error::Error;                  \
  }

// Construction-time invariant violations of domain types.
ODQA_DEFINE_ERROR(ValidationError);

ODQA_DEFINE_ERROR(NetworkError);
ODQA_DEFINE_ERROR(ProtocolError);
ODQA_DEFINE_ERROR(AuthError);
ODQA_DEFINE_ERROR(QuotaError);
ODQA_DEFINE_ERROR(FixtureFormatError);

ODQA_DEFINE_ERROR(NoContentWords);

ODQA_DEFINE_ERROR(NonFiniteInput);
ODQA_DEFINE_ERROR(NoContextTokens);
ODQA_DEFINE_ERROR(BackendError);

ODQA_DEFINE_ERROR(DomainError);
ODQA_DEFINE_ERROR(SearchFailed);
ODQA_DEFINE_ERROR(NoResults);

ODQA_DEFINE_ERROR(BracketError);
ODQA_DEFINE_ERROR(IoError);
ODQA_DEFINE_ERROR(ConfigError);

#undef ODQA_DEFINE_ERROR

/// Corpus parse failure; carries the 1-based line number of the offending
/// line (or of the block start when the whole block is malformed).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace odqa
