// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

// Extractive answer highlighting. A backend produces per-token start/end
// scores (the dot products of the start/end vectors with each contextual
// embedding); the decoder picks the highest-scoring admissible span.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "odqa/model.hpp"

namespace odqa {

struct TokenOffset {
  std::int64_t start = -1;
  std::int64_t end = -1;

  bool is_context() const noexcept { return !(start == -1 && end == -1); }
  bool operator==(const TokenOffset&) const = default;
};

inline constexpr TokenOffset kSpecialToken{-1, -1};

struct InferenceOutput {
  std::vector<std::string> tokens;
  std::vector<TokenOffset> offsets;
  std::vector<double> start_scores;
  std::vector<double> end_scores;
  double null_score = 0.0;

  /// Checks equal lengths, finite scores, and that context offsets are
  /// non-empty, inside [0, context_length] and non-decreasing. Throws
  /// ValidationError.
  void validate(std::size_t context_length) const;
};

struct DecoderConfig {
  int max_span_tokens = 30;
  double no_answer_threshold = 0.0;
  std::size_t max_context_chars = 2000;

  void validate() const;
};

/// exp(v_i - max v) / sum_j exp(v_j - max v). Throws NonFiniteInput on empty
/// or non-finite input.
std::vector<double> softmax(std::span<const double> v);

struct SpanChoice {
  std::size_t start_token = 0;
  std::size_t end_token = 0;
  double score = 0.0;

  bool operator==(const SpanChoice&) const = default;
};

/// Best (i, j) over context tokens maximizing start_scores[i] + end_scores[j]
/// with i <= j and j - i < max_span_tokens (token-index distance). Ties go to
/// the smallest i, then the smallest j. Throws NoContextTokens.
SpanChoice best_span(const InferenceOutput& out, int max_span_tokens);

/// Decodes the answer span. Confidence is P(start_i) * P(end_j) with both
/// softmaxes taken over context positions. When the best span score minus
/// the null score falls below the threshold the result is a no-answer whose
/// confidence is sigmoid(null_score - best span score).
AnswerSpan decode_span(const InferenceOutput& out, std::string_view context,
                       const DecoderConfig& cfg);

struct InferenceRequest {
  std::string question;
  std::string context;
  std::string model;
};

/// Extractive-QA inference contract. Implementations must tolerate
/// concurrent infer() calls.
class InferenceBackend {
 public:
  virtual ~InferenceBackend() = default;

  /// Throws BackendError on transport or protocol failures.
  virtual InferenceOutput infer(const InferenceRequest& request) const = 0;
};

nlohmann::json to_json(const InferenceRequest& request);
nlohmann::json to_json(const InferenceOutput& out);
/// Throws ProtocolError on a malformed /infer response document.
InferenceOutput inference_output_from_json(const nlohmann::json& j);

/// Speaks the JSON wire protocol: POST <endpoint>/infer with
/// {question, context, model}.
class RemoteInferenceBackend : public InferenceBackend {
 public:
  RemoteInferenceBackend(std::string endpoint, int timeout_ms = 10000);

  InferenceOutput infer(const InferenceRequest& request) const override;

 private:
  std::string endpoint_;
  int timeout_ms_;
};

/// Deterministic test backend. The context is tokenized into words and
/// punctuation, framed by [CLS] / [SEP] special tokens. A programmed
/// (question, context) pair yields start/end scores of 10 on the tokens
/// covering the programmed answer and 0 elsewhere, or a dominant null score
/// when programmed as unanswerable. Unprogrammed pairs get scores in [-2, 2]
/// derived from a hash of the question and each token.
class StubInferenceBackend : public InferenceBackend {
 public:
  StubInferenceBackend() = default;

  /// Reads {"answers": [{"question", "context", "answer": string|null}]}.
  static StubInferenceBackend load(const std::filesystem::path& path);

  /// `answer` must occur in `context`; an empty answer programs a
  /// no-answer.
  void program(std::string question, std::string context, std::string answer);
  void program_output(std::string question, std::string context, InferenceOutput out);

  InferenceOutput infer(const InferenceRequest& request) const override;

 private:
  using Key = std::pair<std::uint64_t, std::string>;

  static Key key(std::string_view question, std::string_view context);

  std::map<Key, std::string> answers_;
  std::map<Key, InferenceOutput> outputs_;
};

/// Truncates the context to cfg.max_context_chars, runs the backend and
/// decodes. Backend failures surface as BackendError, including malformed
/// outputs.
AnswerSpan extract(const Question& question, std::string_view snippet,
                   const InferenceBackend& backend, const DecoderConfig& cfg,
                   const std::string& model = {});

}  // namespace odqa
