// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <utility>

#include "fnv.hpp"
#include "odqa/errors.hpp"
#include "odqa/utf8.hpp"

namespace odqa {
namespace {

constexpr std::array<std::pair<Label, std::string_view>, 8> kLabels{{
    {Label::kSpread, "covid-spread"},
    {Label::kSymptoms, "covid-symptoms"},
    {Label::kTreatment, "covid-treatment"},
    {Label::kVaccination, "covid-vaccination"},
    {Label::kLogistics, "covid-logistics"},
    {Label::kPassport, "covid-passport"},
    {Label::kTesting, "covid-testing"},
    {Label::kOthers, "covid-others"},
}};

struct Segment {
  std::string literal;
  std::vector<std::string> alternatives;  // empty for literal segments
};

std::vector<Segment> parse_template(std::string_view t) {
  std::vector<Segment> segments;
  std::string literal;
  std::string group;
  bool in_group = false;
  for (char ch : t) {
    if (ch == '[') {
      if (in_group) throw BracketError("nested '[' in '" + std::string(t) + "'");
      in_group = true;
      if (!literal.empty()) segments.push_back({std::move(literal), {}});
      literal.clear();
      group.clear();
    } else if (ch == ']') {
      if (!in_group) throw BracketError("unbalanced ']' in '" + std::string(t) + "'");
      in_group = false;
      Segment seg;
      std::size_t from = 0;
      while (true) {
        const auto slash = group.find('/', from);
        auto alt = utf8::trim(std::string_view(group).substr(
            from, slash == std::string::npos ? std::string::npos : slash - from));
        if (alt.empty()) {
          throw BracketError("empty alternative in '[" + group + "]'");
        }
        seg.alternatives.push_back(std::move(alt));
        if (slash == std::string::npos) break;
        from = slash + 1;
      }
      segments.push_back(std::move(seg));
    } else if (in_group) {
      group.push_back(ch);
    } else {
      literal.push_back(ch);
    }
  }
  if (in_group) throw BracketError("unbalanced '[' in '" + std::string(t) + "'");
  if (!literal.empty()) segments.push_back({std::move(literal), {}});
  return segments;
}

std::uint64_t bounded(std::mt19937_64& engine, std::uint64_t n) {
  // Rejection sampling keeps the draw unbiased and platform-independent.
  const std::uint64_t threshold = (0 - n) % n;
  while (true) {
    const std::uint64_t r = engine();
    if (r >= threshold) return r % n;
  }
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

}  // namespace

std::string_view to_string(Label label) noexcept {
  for (const auto& [l, name] : kLabels) {
    if (l == label) return name;
  }
  return "covid-others";
}

Label label_from_string(std::string_view s) {
  for (const auto& [l, name] : kLabels) {
    if (name == s) return l;
  }
  throw ValidationError("unknown label '" + std::string(s) + "'");
}

std::vector<std::size_t> bracket_group_sizes(std::string_view question_template) {
  std::vector<std::size_t> sizes;
  for (const auto& seg : parse_template(question_template)) {
    if (!seg.alternatives.empty()) sizes.push_back(seg.alternatives.size());
  }
  return sizes;
}

std::vector<std::string> expand_template(std::string_view question_template) {
  const auto segments = parse_template(question_template);
  std::vector<std::string> out{std::string()};
  for (const auto& seg : segments) {
    if (seg.alternatives.empty()) {
      for (auto& s : out) s += seg.literal;
      continue;
    }
    std::vector<std::string> next;
    next.reserve(out.size() * seg.alternatives.size());
    for (const auto& prefix : out) {
      for (const auto& alt : seg.alternatives) next.push_back(prefix + alt);
    }
    out = std::move(next);
  }
  return out;
}

MarkedAnswer parse_marked_answer(std::string_view paragraph) {
  const auto open = paragraph.find('[');
  const auto close = paragraph.find(']');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw BracketError("answer paragraph needs one '[...]' span");
  }
  const auto inner = paragraph.substr(open + 1, close - open - 1);
  if (inner.find('[') != std::string_view::npos) {
    throw BracketError("nested '[' in answer paragraph");
  }
  const auto rest = paragraph.substr(close + 1);
  if (rest.find_first_of("[]") != std::string_view::npos) {
    throw BracketError("answer paragraph has more than one bracket group");
  }
  MarkedAnswer marked;
  marked.text = utf8::trim(inner);
  if (marked.text.empty()) throw BracketError("answer span is empty");

  const auto before = paragraph.substr(0, open);
  marked.context = std::string(before) + std::string(inner) + std::string(rest);
  const auto leading = utf8::decode(inner).find(utf8::decode(marked.text));
  marked.start = utf8::length(before) + leading;
  return marked;
}

DatasetEntry::DatasetEntry(Label label, std::vector<std::string> question_templates,
                           std::string answer_paragraph)
    : label_(label),
      templates_(std::move(question_templates)),
      answer_paragraph_(std::move(answer_paragraph)) {
  if (templates_.empty()) throw ValidationError("entry has no question templates");
  for (const auto& t : templates_) {
    if (utf8::trim(t).empty()) throw ValidationError("blank question template");
    parse_template(t);
  }
  parse_marked_answer(answer_paragraph_);
}

std::vector<DatasetEntry> parse_entries(std::string_view src) {
  std::vector<DatasetEntry> entries;
  std::istringstream in{std::string(src)};

  struct Block {
    std::size_t first_line = 0;
    std::optional<std::string> label;
    std::vector<std::string> questions;
    std::optional<std::string> answer;
  };
  std::optional<Block> block;

  auto finish = [&](Block& b) {
    if (!b.label) throw ParseError(b.first_line, "block has no 'L:' line");
    if (b.questions.empty()) throw ParseError(b.first_line, "block has no 'Q:' lines");
    if (!b.answer) throw ParseError(b.first_line, "block has no 'A:' line");
    try {
      entries.emplace_back(label_from_string(*b.label), std::move(b.questions),
                           std::move(*b.answer));
    } catch (const Error& e) {
      throw ParseError(b.first_line, e.what());
    }
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto line = strip_cr(std::move(raw));
    if (utf8::trim(line).empty()) {
      if (block) finish(*block);
      block.reset();
      continue;
    }
    if (line.size() < 2 || line[1] != ':' ||
        (line[0] != 'L' && line[0] != 'Q' && line[0] != 'A')) {
      throw ParseError(line_no, "expected a line starting with 'L:', 'Q:' or 'A:'");
    }
    if (!block) block = Block{line_no, {}, {}, {}};
    auto value = utf8::trim(std::string_view(line).substr(2));
    switch (line[0]) {
      case 'L':
        if (block->label) throw ParseError(line_no, "duplicate 'L:' line");
        try {
          label_from_string(value);
        } catch (const ValidationError& e) {
          throw ParseError(line_no, e.what());
        }
        block->label = std::move(value);
        break;
      case 'Q':
        if (block->answer) throw ParseError(line_no, "'Q:' after 'A:'");
        try {
          parse_template(value);
        } catch (const BracketError& e) {
          throw ParseError(line_no, e.what());
        }
        block->questions.push_back(std::move(value));
        break;
      default:
        if (block->answer) throw ParseError(line_no, "duplicate 'A:' line");
        try {
          parse_marked_answer(value);
        } catch (const BracketError& e) {
          throw ParseError(line_no, e.what());
        }
        block->answer = std::move(value);
        break;
    }
  }
  if (block) finish(*block);
  return entries;
}

std::vector<DatasetEntry> load_entries(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open corpus " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_entries(buf.str());
}

std::string serialize_entries(const std::vector<DatasetEntry>& entries) {
  std::string out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (i > 0) out += "\n";
    out += "L: " + std::string(to_string(entries[i].label())) + "\n";
    for (const auto& t : entries[i].question_templates()) out += "Q: " + t + "\n";
    out += "A: " + entries[i].answer_paragraph() + "\n";
  }
  return out;
}

std::vector<Formulation> expand_entry(const DatasetEntry& entry) {
  std::vector<Formulation> out;
  const auto& templates = entry.question_templates();
  for (std::size_t t = 0; t < templates.size(); ++t) {
    for (auto& q : expand_template(templates[t])) out.push_back({std::move(q), t});
  }
  return out;
}

std::size_t cross_template_product(const DatasetEntry& entry) {
  std::size_t product = 1;
  for (const auto& t : entry.question_templates()) {
    for (auto n : bracket_group_sizes(t)) product *= n;
  }
  return product;
}

std::size_t SquadFile::question_count() const {
  std::size_t n = 0;
  for (const auto& article : data) {
    for (const auto& p : article.paragraphs) n += p.qas.size();
  }
  return n;
}

nlohmann::ordered_json to_json(const SquadFile& file) {
  nlohmann::ordered_json data = nlohmann::ordered_json::array();
  for (const auto& article : file.data) {
    nlohmann::ordered_json paragraphs = nlohmann::ordered_json::array();
    for (const auto& p : article.paragraphs) {
      nlohmann::ordered_json qas = nlohmann::ordered_json::array();
      for (const auto& qa : p.qas) {
        nlohmann::ordered_json answers = nlohmann::ordered_json::array();
        for (const auto& a : qa.answers) {
          answers.push_back({{"text", a.text}, {"answer_start", a.answer_start}});
        }
        qas.push_back({{"id", qa.id},
                       {"question", qa.question},
                       {"is_impossible", qa.is_impossible},
                       {"answers", answers}});
      }
      paragraphs.push_back({{"context", p.context}, {"qas", qas}});
    }
    data.push_back({{"title", article.title}, {"paragraphs", paragraphs}});
  }
  return {{"version", file.version}, {"data", data}};
}

SquadFile squad_from_json(const nlohmann::json& j) {
  try {
    SquadFile file;
    file.version = j.at("version").get<std::string>();
    for (const auto& a : j.at("data")) {
      SquadArticle article;
      article.title = a.value("title", std::string());
      for (const auto& p : a.at("paragraphs")) {
        SquadParagraph paragraph;
        paragraph.context = p.at("context").get<std::string>();
        for (const auto& q : p.at("qas")) {
          SquadQa qa;
          qa.id = q.at("id").get<std::string>();
          qa.question = q.at("question").get<std::string>();
          qa.is_impossible = q.value("is_impossible", false);
          for (const auto& ans : q.at("answers")) {
            qa.answers.push_back(
                {ans.at("text").get<std::string>(), ans.at("answer_start").get<std::size_t>()});
          }
          paragraph.qas.push_back(std::move(qa));
        }
        article.paragraphs.push_back(std::move(paragraph));
      }
      file.data.push_back(std::move(article));
    }
    return file;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed SQuAD file: ") + e.what());
  }
}

std::vector<std::string> validate_offsets(const SquadFile& file) {
  std::vector<std::string> violations;
  for (const auto& article : file.data) {
    for (const auto& p : article.paragraphs) {
      const auto context = utf8::decode(p.context);
      for (const auto& qa : p.qas) {
        for (const auto& a : qa.answers) {
          const auto text = utf8::decode(a.text);
          if (a.answer_start + text.size() > context.size() ||
              context.compare(a.answer_start, text.size(), text) != 0) {
            violations.push_back(qa.id + ": answer '" + a.text + "' not found at offset " +
                                 std::to_string(a.answer_start));
          }
        }
      }
    }
  }
  return violations;
}

std::size_t dev_count(std::size_t n, double dev_ratio) {
  if (n == 0) return 0;
  const auto scaled = static_cast<std::size_t>(std::floor(static_cast<double>(n) * dev_ratio + 1e-9));
  return std::min(n, std::max<std::size_t>(1, scaled));
}

std::string question_id(std::size_t entry, std::size_t formulation) {
  const auto h = detail::fnv1a(formulation, detail::fnv1a(entry, detail::kFnvOffset));
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

SplitResult split_entries(const std::vector<DatasetEntry>& entries, std::uint64_t seed,
                          double dev_ratio) {
  if (entries.empty()) throw ValidationError("no dataset entries to split");
  if (!(dev_ratio >= 0.0 && dev_ratio <= 1.0)) {
    throw ValidationError("dev ratio must be within [0, 1]");
  }
  std::mt19937_64 engine(seed);
  SplitResult result;
  result.report.entries = entries.size();

  for (std::size_t e = 0; e < entries.size(); ++e) {
    const auto& entry = entries[e];
    const auto formulations = expand_entry(entry);
    const auto answer = parse_marked_answer(entry.answer_paragraph());
    const auto n = formulations.size();
    const auto n_dev = dev_count(n, dev_ratio);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t k = 0; k < n_dev; ++k) {
      std::swap(order[k], order[k + bounded(engine, n - k)]);
    }
    std::vector<bool> in_dev(n, false);
    for (std::size_t k = 0; k < n_dev; ++k) in_dev[order[k]] = true;

    SquadParagraph train_p{answer.context, {}};
    SquadParagraph dev_p{answer.context, {}};
    for (std::size_t f = 0; f < n; ++f) {
      SquadQa qa{question_id(e, f), formulations[f].question, false,
                 {{answer.text, answer.start}}};
      (in_dev[f] ? dev_p : train_p).qas.push_back(std::move(qa));
    }

    const auto title = std::string(to_string(entry.label())) + "-" + std::to_string(e);
    if (!train_p.qas.empty()) result.train.data.push_back({title, {std::move(train_p)}});
    if (!dev_p.qas.empty()) result.dev.data.push_back({title, {std::move(dev_p)}});

    EntrySplit split;
    split.index = e;
    split.label = entry.label();
    for (const auto& t : entry.question_templates()) {
      split.group_sizes.push_back(bracket_group_sizes(t));
    }
    split.formulations = n;
    split.cross_template_product = cross_template_product(entry);
    split.dev = n_dev;
    result.report.per_entry.push_back(std::move(split));
    result.report.total += n;
    result.report.dev += n_dev;
    result.report.train += n - n_dev;
  }
  return result;
}

std::string SplitReport::render() const {
  std::ostringstream out;
  out << "entries: " << entries << "\n"
      << "question-answer pairs: " << total << " (train " << train << ", dev " << dev << ")\n";
  for (const auto& e : per_entry) {
    out << "entry " << e.index << " [" << to_string(e.label) << "]: groups ";
    for (std::size_t t = 0; t < e.group_sizes.size(); ++t) {
      if (t > 0) out << " ";
      out << "(";
      for (std::size_t g = 0; g < e.group_sizes[t].size(); ++g) {
        if (g > 0) out << ",";
        out << e.group_sizes[t][g];
      }
      out << ")";
    }
    out << "; " << e.formulations << " formulations (expanded per template)";
    if (e.cross_template_product != e.formulations) {
      out << "; multiplying group sizes across templates would give "
          << e.cross_template_product;
    }
    out << "; dev " << e.dev << "\n";
  }
  return out.str();
}

SplitReport split_and_emit(const std::vector<DatasetEntry>& entries, std::uint64_t seed,
                           const std::filesystem::path& out_train,
                           const std::filesystem::path& out_dev, double dev_ratio) {
  auto result = split_entries(entries, seed, dev_ratio);
  for (const auto* file : {&result.train, &result.dev}) {
    const auto violations = validate_offsets(*file);
    if (!violations.empty()) {
      throw ValidationError("emitted SQuAD answer fails offset check: " + violations.front());
    }
  }
  auto write = [](const std::filesystem::path& path, const SquadFile& file) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << to_json(file).dump(2, ' ', false) << "\n";
    if (!out) throw IoError("failed writing " + path.string());
  };
  write(out_train, result.train);
  write(out_dev, result.dev);
  return result.report;
}

}  // namespace odqa
