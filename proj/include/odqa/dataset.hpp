// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

// Bracketed question-answer corpus -> SQuAD 2.0.
//
// Corpus format (UTF-8, blocks separated by blank lines):
//
//   L: covid-spread
//   Q: Vremea caldă [previne/ne ferește de] infectarea cu Coronavirus?
//   Q: ...
//   A: Datele existente arată că [infecția poate fi dobândită ...].
//
// "[a/b/c]" in a question lists alternative phrasings; the single "[...]"
// in the answer paragraph marks the answer span.

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace odqa {

enum class Label {
  kSpread,
  kSymptoms,
  kTreatment,
  kVaccination,
  kLogistics,
  kPassport,
  kTesting,
  kOthers,
};

std::string_view to_string(Label label) noexcept;
/// Throws ValidationError for anything outside the eight labels.
Label label_from_string(std::string_view s);

/// Sizes of the bracket groups of a question template, left to right.
/// Throws BracketError on unbalanced or nested brackets and on empty
/// alternatives.
std::vector<std::size_t> bracket_group_sizes(std::string_view question_template);

/// Cartesian product over the template's bracket groups, substituted in
/// place; the first group varies slowest.
std::vector<std::string> expand_template(std::string_view question_template);

struct MarkedAnswer {
  std::string context;      // paragraph with the brackets removed
  std::string text;         // the marked span
  std::size_t start = 0;    // scalar offset of `text` in `context`
};

/// Throws BracketError unless the paragraph holds exactly one balanced,
/// non-empty "[...]" group.
MarkedAnswer parse_marked_answer(std::string_view paragraph);

class DatasetEntry {
 public:
  /// Throws ValidationError / BracketError when a template or the answer
  /// paragraph is malformed or there are no templates.
  DatasetEntry(Label label, std::vector<std::string> question_templates,
               std::string answer_paragraph);

  Label label() const noexcept { return label_; }
  const std::vector<std::string>& question_templates() const noexcept { return templates_; }
  const std::string& answer_paragraph() const noexcept { return answer_paragraph_; }

  bool operator==(const DatasetEntry&) const = default;

 private:
  Label label_;
  std::vector<std::string> templates_;
  std::string answer_paragraph_;
};

/// Throws ParseError carrying the line number.
std::vector<DatasetEntry> parse_entries(std::string_view src);
std::vector<DatasetEntry> load_entries(const std::filesystem::path& path);

/// Canonical text form; parse_entries(serialize_entries(e)) == e.
std::string serialize_entries(const std::vector<DatasetEntry>& entries);

struct Formulation {
  std::string question;
  std::size_t template_index = 0;
};

/// Every template expanded on its own, concatenated in template order.
std::vector<Formulation> expand_entry(const DatasetEntry& entry);

/// Product of all group sizes across all templates of the entry. Reported
/// next to the per-template count; not used for expansion.
std::size_t cross_template_product(const DatasetEntry& entry);

struct SquadAnswer {
  std::string text;
  std::size_t answer_start = 0;
};

struct SquadQa {
  std::string id;
  std::string question;
  bool is_impossible = false;
  std::vector<SquadAnswer> answers;
};

struct SquadParagraph {
  std::string context;
  std::vector<SquadQa> qas;
};

struct SquadArticle {
  std::string title;
  std::vector<SquadParagraph> paragraphs;
};

struct SquadFile {
  std::string version = "v2.0";
  std::vector<SquadArticle> data;

  std::size_t question_count() const;
};

nlohmann::ordered_json to_json(const SquadFile& file);
SquadFile squad_from_json(const nlohmann::json& j);

/// Offset-consistency violations (context[answer_start, +|text|) != text),
/// one message each; empty when the file is consistent.
std::vector<std::string> validate_offsets(const SquadFile& file);

/// Number of dev formulations for an entry with n formulations:
/// max(1, floor(n * dev_ratio)).
std::size_t dev_count(std::size_t n, double dev_ratio = 0.1);

/// Stable id for formulation `formulation` of entry `entry`.
std::string question_id(std::size_t entry, std::size_t formulation);

struct EntrySplit {
  std::size_t index = 0;
  Label label = Label::kOthers;
  std::vector<std::vector<std::size_t>> group_sizes;  // per template
  std::size_t formulations = 0;
  std::size_t cross_template_product = 0;
  std::size_t dev = 0;
};

struct SplitReport {
  std::size_t entries = 0;
  std::size_t total = 0;
  std::size_t train = 0;
  std::size_t dev = 0;
  std::vector<EntrySplit> per_entry;

  std::string render() const;
};

struct SplitResult {
  SquadFile train;
  SquadFile dev;
  SplitReport report;
};

/// Seeded per-entry split; deterministic for a given seed on every
/// platform. Throws ValidationError on an empty entry list or a ratio
/// outside [0, 1].
SplitResult split_entries(const std::vector<DatasetEntry>& entries, std::uint64_t seed,
                          double dev_ratio = 0.1);

/// split_entries + writes both files (2-space indented JSON, UTF-8).
/// Throws IoError, and ValidationError if an emitted answer fails the
/// offset check.
SplitReport split_and_emit(const std::vector<DatasetEntry>& entries, std::uint64_t seed,
                           const std::filesystem::path& out_train,
                           const std::filesystem::path& out_dev, double dev_ratio = 0.1);

}  // namespace odqa
