// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/evalharness.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "odqa/errors.hpp"
#include "odqa/normalize.hpp"
#include "odqa/utf8.hpp"

namespace odqa {
namespace {

std::vector<std::string> f1_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char32_t c : utf8::decode(text)) {
    if (utf8::is_space(c) || utf8::is_punct(c)) {
      if (!current.empty()) tokens.push_back(std::move(current));
      current.clear();
      continue;
    }
    utf8::append(current, utf8::to_lower(fold_diacritic(c)));
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

double f1_from_counts(double overlap, double pred_size, double gold_size) {
  if (overlap == 0.0) return 0.0;
  const double precision = overlap / pred_size;
  const double recall = overlap / gold_size;
  return 2.0 * precision * recall / (precision + recall);
}

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
  return buf;
}

}  // namespace

std::vector<GoldQuestion> parse_testset(const nlohmann::json& j) {
  if (!j.is_array()) throw ValidationError("test set must be a JSON array");
  std::vector<GoldQuestion> out;
  try {
    for (const auto& item : j) {
      GoldQuestion q;
      q.question = item.at("question").get<std::string>();
      for (const auto& d : item.value("gold_docs", nlohmann::json::array())) {
        GoldDoc doc;
        doc.url = d.at("url").get<std::string>();
        doc.snippet = d.at("snippet").get<std::string>();
        const auto length = utf8::length(doc.snippet);
        for (const auto& a : d.value("answers", nlohmann::json::array())) {
          CharRange r{a.at("start").get<std::size_t>(), a.at("end").get<std::size_t>()};
          if (r.start >= r.end || r.end > length) {
            throw ValidationError("gold range [" + std::to_string(r.start) + ", " +
                                  std::to_string(r.end) + ") invalid for snippet of " +
                                  doc.url);
          }
          doc.answers.push_back(r);
        }
        q.gold_docs.push_back(std::move(doc));
      }
      out.push_back(std::move(q));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed test set: ") + e.what());
  }
  return out;
}

std::vector<GoldQuestion> load_testset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open test set " + path.string());
  try {
    return parse_testset(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

double reciprocal_rank(const std::vector<RankedAnswer>& results,
                       const std::unordered_set<std::string>& gold_urls) {
  for (std::size_t k = 0; k < results.size(); ++k) {
    if (gold_urls.contains(normalize_url(results[k].hit().url()))) {
      return 1.0 / static_cast<double>(k + 1);
    }
  }
  return 0.0;
}

bool exact_match(const AnswerSpan& pred, const std::vector<CharRange>& golds) {
  if (pred.is_no_answer()) return false;
  const CharRange range{pred.start_char(), pred.end_char()};
  return std::find(golds.begin(), golds.end(), range) != golds.end();
}

double f1_char_overlap(CharRange pred, const std::vector<CharRange>& golds) {
  if (pred.size() == 0) throw DomainError("predicted range is empty");
  double best = 0.0;
  for (const auto& g : golds) {
    const auto lo = std::max(pred.start, g.start);
    const auto hi = std::min(pred.end, g.end);
    const double overlap = hi > lo ? static_cast<double>(hi - lo) : 0.0;
    best = std::max(best, f1_from_counts(overlap, static_cast<double>(pred.size()),
                                         static_cast<double>(g.size())));
  }
  return best;
}

double f1_token(std::string_view pred_text, std::string_view gold_text) {
  const auto pred = f1_tokens(pred_text);
  const auto gold = f1_tokens(gold_text);
  if (pred.empty() && gold.empty()) return 1.0;
  if (pred.empty() || gold.empty()) return 0.0;
  std::map<std::string, long> counts;
  for (const auto& t : gold) ++counts[t];
  double overlap = 0.0;
  for (const auto& t : pred) {
    if (auto it = counts.find(t); it != counts.end() && it->second > 0) {
      --it->second;
      overlap += 1.0;
    }
  }
  return f1_from_counts(overlap, static_cast<double>(pred.size()),
                        static_cast<double>(gold.size()));
}

EvalReport run_eval(const std::vector<GoldQuestion>& testset, const Answerer& answerer,
                    bool only_top1, std::string label) {
  EvalReport report;
  report.label = std::move(label);
  report.questions = testset.size();
  double mrr_sum = 0.0;
  double exact_sum = 0.0;
  double f1_sum = 0.0;
  std::size_t retrieved = 0;

  for (const auto& gq : testset) {
    QuestionEval qe;
    qe.question = gq.question;
    qe.gold_docs = gq.gold_docs.size();
    if (!gq.gold_docs.empty()) ++report.answerable;

    std::unordered_set<std::string> gold_urls;
    for (const auto& d : gq.gold_docs) gold_urls.insert(normalize_url(d.url));

    std::vector<RankedAnswer> results;
    try {
      results = answerer(Question(gq.question));
    } catch (const Error& e) {
      qe.error = e.what();
    }

    qe.reciprocal_rank = reciprocal_rank(results, gold_urls);
    qe.gold_retrieved = qe.reciprocal_rank > 0.0;
    if (qe.gold_retrieved) ++retrieved;

    const RankedAnswer* scored = nullptr;
    for (const auto& r : results) {
      if (gold_urls.contains(normalize_url(r.hit().url()))) {
        scored = &r;
        break;
      }
      if (only_top1) break;
    }

    if (scored != nullptr) {
      qe.scored_url = scored->hit().url();
      const auto& pred = scored->answer();
      const auto key = normalize_url(scored->hit().url());
      const auto doc = std::find_if(gq.gold_docs.begin(), gq.gold_docs.end(),
                                    [&](const GoldDoc& d) { return normalize_url(d.url) == key; });
      if (!pred.is_no_answer()) {
        qe.predicted = pred.text();
        std::optional<CharRange> range;
        if (doc->snippet == scored->hit().snippet()) {
          range = CharRange{pred.start_char(), pred.end_char()};
        } else {
          // Snippet differs from the annotated copy: locate the prediction text.
          const auto at = utf8::decode(doc->snippet).find(utf8::decode(pred.text()));
          if (at != std::u32string::npos) {
            range = CharRange{at, at + (pred.end_char() - pred.start_char())};
          }
        }
        if (range) {
          qe.exact = std::find(doc->answers.begin(), doc->answers.end(), *range) !=
                     doc->answers.end();
          qe.f1 = qe.exact ? 1.0 : f1_char_overlap(*range, doc->answers);
        }
      }
    }

    mrr_sum += qe.reciprocal_rank;
    exact_sum += qe.exact ? 1.0 : 0.0;
    f1_sum += qe.f1;
    report.per_question.push_back(std::move(qe));
  }

  if (report.questions > 0) {
    const auto n = static_cast<double>(report.questions);
    report.mrr = mrr_sum / n;
    report.exact_pct = exact_sum / n;
    report.f1_pct = f1_sum / n;
    report.coverage_pct = static_cast<double>(report.answerable) / n;
    report.retrieved_pct = static_cast<double>(retrieved) / n;
  }
  if (report.answerable > 0) {
    const auto n = static_cast<double>(report.answerable);
    report.exact_answerable_pct = exact_sum / n;
    report.f1_answerable_pct = f1_sum / n;
  }
  return report;
}

std::string EvalReport::render_table() const {
  char mrr_buf[32];
  std::snprintf(mrr_buf, sizeof(mrr_buf), "%.4f", mrr);
  const std::string name = label.empty() ? "QA system" : label;
  std::ostringstream out;
  out << "| Query gen. | MRR | Exact % | F1 % |\n"
      << "|---|---|---|---|\n"
      << "| " << name << " | " << mrr_buf << " | " << percent(exact_pct) << " | "
      << percent(f1_pct) << " |\n\n"
      << "questions: " << questions << ", with gold documents: " << answerable
      << " (coverage " << percent(coverage_pct) << "%), gold retrieved: "
      << percent(retrieved_pct) << "%\n"
      << "over questions with gold documents: Exact " << percent(exact_answerable_pct)
      << "%, F1 " << percent(f1_answerable_pct) << "%\n";
  return out.str();
}

nlohmann::ordered_json to_json(const EvalReport& report) {
  nlohmann::ordered_json per_question = nlohmann::ordered_json::array();
  for (const auto& q : report.per_question) {
    nlohmann::ordered_json item = {{"question", q.question},
                                   {"gold_docs", q.gold_docs},
                                   {"gold_retrieved", q.gold_retrieved},
                                   {"reciprocal_rank", q.reciprocal_rank},
                                   {"exact", q.exact},
                                   {"f1", q.f1}};
    item["scored_url"] = q.scored_url ? nlohmann::ordered_json(*q.scored_url) : nullptr;
    item["predicted"] = q.predicted ? nlohmann::ordered_json(*q.predicted) : nullptr;
    item["error"] = q.error ? nlohmann::ordered_json(*q.error) : nullptr;
    per_question.push_back(std::move(item));
  }
  return {{"label", report.label},
          {"questions", report.questions},
          {"answerable", report.answerable},
          {"mrr", report.mrr},
          {"exact_pct", report.exact_pct},
          {"f1_pct", report.f1_pct},
          {"coverage_pct", report.coverage_pct},
          {"retrieved_pct", report.retrieved_pct},
          {"exact_answerable_pct", report.exact_answerable_pct},
          {"f1_answerable_pct", report.f1_answerable_pct},
          {"per_question", per_question}};
}

}  // namespace odqa
