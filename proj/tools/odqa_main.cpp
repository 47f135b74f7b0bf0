// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

// odqa: command-line front end.
//
//   odqa ask "<question>" [--offline DIR] [--stub FILE] [--mode cw-union] [--json]
//   odqa expand --in corpus.txt --out-train train.json --out-dev dev.json --seed 7
//   odqa eval --testset gold.json (--offline DIR | --live) [--report out.json]
//   odqa serve [--port 8080]
//
// Exit codes: 0 success, 1 usage, 2 configuration, 3 runtime, 4 I/O.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include "odqa/config.hpp"
#include "odqa/dataset.hpp"
#include "odqa/errors.hpp"
#include "odqa/evalharness.hpp"
#include "odqa/service.hpp"
#include "odqa/utf8.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitIo = 4;

struct CommonOptions {
  std::optional<std::string> config_file;
  std::optional<std::string> offline_dir;
  std::optional<std::string> stub_file;
  std::optional<std::string> mode;
  std::vector<std::string> overrides;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_file, "key = value configuration file");
  cmd->add_option("--offline", opts.offline_dir, "Fixture directory (enables offline mode)");
  cmd->add_option("--stub", opts.stub_file, "Stub inference answers (offline mode)");
  cmd->add_option("--mode", opts.mode, "Query mode: baseline, cw or cw-union");
  cmd->add_option("--set", opts.overrides, "Override a configuration key (key=value)");
  cmd->add_flag("-v,--verbose", opts.verbose, "Log debug output");
}

odqa::AppConfig build_config(const CommonOptions& opts) {
  auto cfg = odqa::load_config(opts.config_file ? std::optional<std::filesystem::path>(
                                                      *opts.config_file)
                                                : std::nullopt);
  for (const auto& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw odqa::ConfigError("--set expects key=value: " + kv);
    cfg.set(odqa::utf8::trim(std::string_view(kv).substr(0, eq)),
            odqa::utf8::trim(std::string_view(kv).substr(eq + 1)));
  }
  if (opts.offline_dir) cfg.fixture_dir = *opts.offline_dir;
  if (opts.stub_file) cfg.stub_answers = *opts.stub_file;
  if (opts.mode) cfg.pipeline.mode = odqa::query_mode_from_string(*opts.mode);
  if (opts.offline_dir && !opts.stub_file && !cfg.stub_answers) {
    const auto stub = std::filesystem::path(*opts.offline_dir) / "stub_answers.json";
    if (std::filesystem::exists(stub)) cfg.stub_answers = stub;
  }
  cfg.validate();
  return cfg;
}

std::string highlight(const odqa::RankedAnswer& a) {
  const auto& snippet = a.hit().snippet();
  if (a.answer().is_no_answer()) return snippet;
  const auto n = odqa::utf8::length(snippet);
  return odqa::utf8::slice(snippet, 0, a.answer().start_char()) + "[[" + a.answer().text() +
         "]]" + odqa::utf8::slice(snippet, a.answer().end_char(), n);
}

int run_ask(const CommonOptions& opts, const std::string& text, bool json) {
  const auto cfg = build_config(opts);
  const odqa::Engine engine(cfg);
  const odqa::Question question(text);
  std::vector<odqa::Query> queries;
  std::vector<odqa::RankedAnswer> answers;
  try {
    auto result = engine.pipeline().answer_question(question);
    queries = std::move(result.queries);
    answers = std::move(result.answers);
  } catch (const odqa::NoResults&) {
    queries = engine.pipeline().queries_for(question, cfg.pipeline.mode);
  }

  if (json) {
    std::cout << odqa::ask_response(queries, answers, cfg.top_k).dump(2) << "\n";
    return 0;
  }
  for (const auto& q : queries) {
    std::cout << "query [" << odqa::to_string(q.kind()) << "]: " << q.text() << "\n";
  }
  if (answers.empty()) std::cout << "no results\n";
  for (std::size_t k = 0; k < answers.size() && k < cfg.top_k; ++k) {
    const auto& a = answers[k];
    std::cout << "\n#" << k + 1 << "  q=" << a.combined() << "  c=" << a.answer().confidence()
              << "  r=" << a.hit().rank() << "\n"
              << "   " << a.hit().title() << " <" << a.hit().url() << ">\n"
              << "   " << highlight(a) << "\n";
  }
  return 0;
}

struct ExpandOptions {
  std::string in;
  std::string out_train;
  std::string out_dev;
  std::uint64_t seed = 0;
  double dev_ratio = 0.1;
};

int run_expand(const ExpandOptions& opts) {
  const auto entries = odqa::load_entries(opts.in);
  const auto report =
      odqa::split_and_emit(entries, opts.seed, opts.out_train, opts.out_dev, opts.dev_ratio);
  std::cout << report.render();
  return 0;
}

struct EvalOptions {
  std::string testset;
  bool live = false;
  bool only_top1 = false;
  std::optional<std::string> report;
  std::string label;
};

int run_eval(const CommonOptions& common, const EvalOptions& opts) {
  if (opts.live == common.offline_dir.has_value()) {
    throw odqa::ConfigError("eval needs exactly one of --live or --offline DIR");
  }
  const auto cfg = build_config(common);
  const odqa::Engine engine(cfg);
  const auto testset = odqa::load_testset(opts.testset);
  const auto& pipeline = engine.pipeline();
  const auto label =
      opts.label.empty() ? std::string(odqa::to_string(cfg.pipeline.mode)) : opts.label;
  const auto report = odqa::run_eval(
      testset, [&](const odqa::Question& q) { return pipeline.answer_question(q).answers; },
      opts.only_top1, label);
  std::cout << report.render_table();
  if (opts.report) {
    std::ofstream out(*opts.report, std::ios::binary);
    if (!out) throw odqa::IoError("cannot write " + *opts.report);
    out << odqa::to_json(report).dump(2) << "\n";
  }
  return 0;
}

int run_serve(const CommonOptions& opts, std::optional<int> port_flag) {
  auto cfg = build_config(opts);
  if (port_flag) cfg.port = *port_flag;
  odqa::QaService service(cfg.cors_origin);
  const int port = service.bind(cfg.host, cfg.port);
  if (port < 0) throw odqa::IoError("cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
  spdlog::info("listening on {}:{}", cfg.host, port);
  service.attach(std::make_shared<const odqa::Engine>(cfg));
  if (!service.listen_after_bind()) throw odqa::IoError("server stopped unexpectedly");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-domain question answering over web search results"};
  app.require_subcommand(1);

  CommonOptions common;

  auto* ask = app.add_subcommand("ask", "Answer one question");
  std::string question;
  bool json = false;
  ask->add_option("question", question, "Question text")->required();
  ask->add_flag("--json", json, "Print the REST response body");
  add_common(ask, common);

  auto* expand = app.add_subcommand("expand", "Expand a template corpus into train/dev files");
  ExpandOptions expand_opts;
  expand->add_option("--in", expand_opts.in, "Corpus file")->required();
  expand->add_option("--out-train", expand_opts.out_train, "Training output")->required();
  expand->add_option("--out-dev", expand_opts.out_dev, "Development output")->required();
  expand->add_option("--seed", expand_opts.seed, "Split seed")->required();
  expand->add_option("--dev-ratio", expand_opts.dev_ratio, "Development share per entry")
      ->check(CLI::Range(0.0, 1.0));

  auto* eval = app.add_subcommand("eval", "Score the pipeline on an annotated test set");
  EvalOptions eval_opts;
  eval->add_option("--testset", eval_opts.testset, "Test set JSON")->required();
  eval->add_flag("--live", eval_opts.live, "Use the live search provider and backend");
  eval->add_flag("--only-top1", eval_opts.only_top1, "Score only the top result");
  eval->add_option("--report", eval_opts.report, "Write the full report as JSON");
  eval->add_option("--label", eval_opts.label, "Row label in the table");
  add_common(eval, common);

  auto* serve = app.add_subcommand("serve", "Run the REST service");
  std::optional<int> port;
  serve->add_option("--port", port, "Listen port (0 picks a free one)");
  add_common(serve, common);

  CLI11_PARSE(app, argc, argv);
  spdlog::set_level(common.verbose ? spdlog::level::debug : spdlog::level::warn);
  if (serve->parsed()) spdlog::set_level(common.verbose ? spdlog::level::debug
                                                          : spdlog::level::info);

  try {
    if (ask->parsed()) return run_ask(common, question, json);
    if (expand->parsed()) return run_expand(expand_opts);
    if (eval->parsed()) return run_eval(common, eval_opts);
    if (serve->parsed()) return run_serve(common, port);
  } catch (const odqa::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const odqa::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const odqa::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const odqa::FixtureFormatError& e) {
    std::cerr << "fixture error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
