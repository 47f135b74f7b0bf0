// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/extractor.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <limits>

#include "fnv.hpp"
#include "http_util.hpp"
#include "odqa/errors.hpp"
#include "odqa/normalize.hpp"
#include "odqa/textproc.hpp"
#include "odqa/utf8.hpp"

namespace odqa {
namespace {

constexpr double kProgrammedScore = 10.0;

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace

void InferenceOutput::validate(std::size_t context_length) const {
  const auto n = tokens.size();
  if (offsets.size() != n || start_scores.size() != n || end_scores.size() != n) {
    throw ValidationError("inference output vectors differ in length");
  }
  if (!std::isfinite(null_score)) throw ValidationError("null score is not finite");
  const auto len = static_cast<std::int64_t>(context_length);
  std::int64_t prev_start = 0;
  std::int64_t prev_end = 0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!std::isfinite(start_scores[k]) || !std::isfinite(end_scores[k])) {
      throw ValidationError("inference scores must be finite");
    }
    const auto& o = offsets[k];
    if (!o.is_context()) continue;
    if (o.start < 0 || o.start >= o.end || o.end > len) {
      throw ValidationError("token " + std::to_string(k) + " offset [" +
                            std::to_string(o.start) + ", " + std::to_string(o.end) +
                            ") outside context of length " + std::to_string(len));
    }
    if (o.start < prev_start || o.end < prev_end) {
      throw ValidationError("context offsets decrease at token " + std::to_string(k));
    }
    prev_start = o.start;
    prev_end = o.end;
  }
}

void DecoderConfig::validate() const {
  if (max_span_tokens < 1) throw ConfigError("max_span_tokens must be >= 1");
  if (max_context_chars < 1) throw ConfigError("max_context_chars must be >= 1");
  if (!std::isfinite(no_answer_threshold)) throw ConfigError("no_answer_threshold not finite");
}

std::vector<double> softmax(std::span<const double> v) {
  if (v.empty()) throw NonFiniteInput("softmax of an empty vector");
  double max = -std::numeric_limits<double>::infinity();
  for (double x : v) {
    if (!std::isfinite(x)) throw NonFiniteInput("softmax input is not finite");
    max = std::max(max, x);
  }
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out[k] = std::exp(v[k] - max);
    sum += out[k];
  }
  for (double& x : out) x /= sum;
  return out;
}

SpanChoice best_span(const InferenceOutput& out, int max_span_tokens) {
  // Sliding window over context tokens: for each end j the deque holds the
  // admissible starts with strictly decreasing start scores, so its front
  // is the leftmost maximal start within j - i < max_span_tokens.
  std::deque<std::size_t> window;
  bool found = false;
  SpanChoice best;
  const auto width = static_cast<std::size_t>(max_span_tokens);
  for (std::size_t j = 0; j < out.tokens.size(); ++j) {
    if (!out.offsets[j].is_context()) continue;
    while (!window.empty() && out.start_scores[window.back()] < out.start_scores[j]) {
      window.pop_back();
    }
    window.push_back(j);
    while (j - window.front() >= width) window.pop_front();

    const auto i = window.front();
    const double score = out.start_scores[i] + out.end_scores[j];
    if (!found || score > best.score ||
        (score == best.score && (i < best.start_token ||
                                 (i == best.start_token && j < best.end_token)))) {
      best = {i, j, score};
      found = true;
    }
  }
  if (!found) throw NoContextTokens("inference output has no context tokens");
  return best;
}

AnswerSpan decode_span(const InferenceOutput& out, std::string_view context,
                       const DecoderConfig& cfg) {
  cfg.validate();
  const auto choice = best_span(out, cfg.max_span_tokens);

  if (choice.score - out.null_score < cfg.no_answer_threshold) {
    return AnswerSpan::no_answer(sigmoid(out.null_score - choice.score));
  }

  std::vector<double> starts;
  std::vector<double> ends;
  std::size_t start_pos = 0;
  std::size_t end_pos = 0;
  for (std::size_t k = 0; k < out.tokens.size(); ++k) {
    if (!out.offsets[k].is_context()) continue;
    if (k == choice.start_token) start_pos = starts.size();
    if (k == choice.end_token) end_pos = ends.size();
    starts.push_back(out.start_scores[k]);
    ends.push_back(out.end_scores[k]);
  }
  const double c = std::min(1.0, softmax(starts)[start_pos] * softmax(ends)[end_pos]);

  const auto begin = static_cast<std::size_t>(out.offsets[choice.start_token].start);
  const auto end = static_cast<std::size_t>(out.offsets[choice.end_token].end);
  return AnswerSpan::from_snippet(context, begin, end, c);
}

nlohmann::json to_json(const InferenceRequest& request) {
  return {{"question", request.question},
          {"context", request.context},
          {"model", request.model}};
}

nlohmann::json to_json(const InferenceOutput& out) {
  nlohmann::json offsets = nlohmann::json::array();
  for (const auto& o : out.offsets) offsets.push_back({o.start, o.end});
  return {{"tokens", out.tokens},
          {"offsets", offsets},
          {"start_scores", out.start_scores},
          {"end_scores", out.end_scores},
          {"null_score", out.null_score}};
}

InferenceOutput inference_output_from_json(const nlohmann::json& j) {
  try {
    InferenceOutput out;
    out.tokens = j.at("tokens").get<std::vector<std::string>>();
    for (const auto& o : j.at("offsets")) {
      if (!o.is_array() || o.size() != 2) throw ProtocolError("offset must be a pair");
      out.offsets.push_back({o[0].get<std::int64_t>(), o[1].get<std::int64_t>()});
    }
    out.start_scores = j.at("start_scores").get<std::vector<double>>();
    out.end_scores = j.at("end_scores").get<std::vector<double>>();
    out.null_score = j.value("null_score", 0.0);
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed inference output: ") + e.what());
  }
}

RemoteInferenceBackend::RemoteInferenceBackend(std::string endpoint, int timeout_ms)
    : endpoint_(std::move(endpoint)), timeout_ms_(timeout_ms) {
  while (!endpoint_.empty() && endpoint_.back() == '/') endpoint_.pop_back();
  if (!endpoint_.ends_with("/infer")) endpoint_ += "/infer";
  detail::parse_endpoint(endpoint_);
}

InferenceOutput RemoteInferenceBackend::infer(const InferenceRequest& request) const {
  const auto endpoint = detail::parse_endpoint(endpoint_);
  auto client = detail::make_client(endpoint, timeout_ms_);
  auto res = client->Post(endpoint.path, to_json(request).dump(), "application/json");
  if (!res) {
    throw BackendError("inference backend unreachable: " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    throw BackendError("inference backend returned HTTP " + std::to_string(res->status));
  }
  try {
    return inference_output_from_json(nlohmann::json::parse(res->body));
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(std::string("inference response is not JSON: ") + e.what());
  } catch (const ProtocolError& e) {
    throw BackendError(e.what());
  }
}

StubInferenceBackend StubInferenceBackend::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open stub answers " + path.string());
  StubInferenceBackend stub;
  try {
    const auto doc = nlohmann::json::parse(in);
    for (const auto& entry : doc.at("answers")) {
      const auto& answer = entry.at("answer");
      stub.program(entry.at("question").get<std::string>(),
                   entry.at("context").get<std::string>(),
                   answer.is_null() ? std::string() : answer.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  } catch (const ValidationError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return stub;
}

StubInferenceBackend::Key StubInferenceBackend::key(std::string_view question,
                                                    std::string_view context) {
  return {detail::fnv1a(collapse_whitespace(question)), std::string(context)};
}

void StubInferenceBackend::program(std::string question, std::string context,
                                   std::string answer) {
  if (!answer.empty() && utf8::decode(context).find(utf8::decode(answer)) ==
                             std::u32string::npos) {
    throw ValidationError("programmed answer '" + answer + "' does not occur in its context");
  }
  answers_[key(question, context)] = std::move(answer);
}

void StubInferenceBackend::program_output(std::string question, std::string context,
                                          InferenceOutput out) {
  outputs_[key(question, context)] = std::move(out);
}

InferenceOutput StubInferenceBackend::infer(const InferenceRequest& request) const {
  const auto k = key(request.question, request.context);
  if (const auto it = outputs_.find(k); it != outputs_.end()) return it->second;

  const auto chars = utf8::decode(request.context);
  InferenceOutput out;
  out.tokens.push_back("[CLS]");
  out.offsets.push_back(kSpecialToken);
  for (const auto& span : split_words(chars)) {
    out.tokens.push_back(
        utf8::encode(std::u32string_view(chars).substr(span.start, span.end - span.start)));
    out.offsets.push_back(
        {static_cast<std::int64_t>(span.start), static_cast<std::int64_t>(span.end)});
  }
  out.tokens.push_back("[SEP]");
  out.offsets.push_back(kSpecialToken);
  out.start_scores.assign(out.tokens.size(), 0.0);
  out.end_scores.assign(out.tokens.size(), 0.0);

  if (const auto it = answers_.find(k); it != answers_.end()) {
    if (it->second.empty()) {
      out.null_score = kProgrammedScore;
      return out;
    }
    const auto answer = utf8::decode(it->second);
    const auto a_begin = static_cast<std::int64_t>(chars.find(answer));
    const auto a_end = a_begin + static_cast<std::int64_t>(answer.size());
    std::size_t first = 0;
    std::size_t last = 0;
    for (std::size_t t = 0; t < out.offsets.size(); ++t) {
      const auto& o = out.offsets[t];
      if (!o.is_context()) continue;
      if (first == 0 && o.end > a_begin) first = t;
      if (o.start < a_end) last = t;
    }
    out.start_scores[first] = kProgrammedScore;
    out.end_scores[last] = kProgrammedScore;
    out.null_score = 0.0;
    return out;
  }

  const auto qhash = k.first;
  for (std::size_t t = 0; t < out.tokens.size(); ++t) {
    const auto h = detail::fnv1a(out.tokens[t], detail::fnv1a(t, qhash));
    out.start_scores[t] = static_cast<double>(h % 4001) / 1000.0 - 2.0;
    out.end_scores[t] = static_cast<double>((h >> 32) % 4001) / 1000.0 - 2.0;
  }
  out.null_score = -10.0;
  return out;
}

AnswerSpan extract(const Question& question, std::string_view snippet,
                   const InferenceBackend& backend, const DecoderConfig& cfg,
                   const std::string& model) {
  cfg.validate();
  const auto chars = utf8::decode(snippet);
  const auto context =
      chars.size() > cfg.max_context_chars
          ? utf8::encode(std::u32string_view(chars).substr(0, cfg.max_context_chars))
          : std::string(snippet);
  const auto context_length = std::min(chars.size(), cfg.max_context_chars);

  auto out = backend.infer({question.text(), context, model});
  try {
    out.validate(context_length);
  } catch (const ValidationError& e) {
    throw BackendError(std::string("backend returned an invalid output: ") + e.what());
  }
  return decode_span(out, context, cfg);
}

}  // namespace odqa
