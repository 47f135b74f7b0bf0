// Copyright 2026 The odqa Authors
// SPDX-License-Identifier: Apache-2.0

#include "odqa/service.hpp"

#include <sys/wait.h>

#include <cstdio>
#include <thread>

#include <gtest/gtest.h>
#include <httplib.h>

#include "odqa/errors.hpp"
#include "test_support.hpp"

namespace odqa {
namespace {

const char* const kGoldenQuestion = "Am nevoie de certificatul verde pentru intrarea în mall?";

AppConfig offline_config() {
  AppConfig cfg;
  cfg.fixture_dir = testing::data_dir() / "offline";
  cfg.stub_answers = testing::data_dir() / "offline" / "stub_answers.json";
  return cfg;
}

class ServiceTest : public ::testing::Test {
 protected:
  void SetUp() override {
    port_ = service_.bind("127.0.0.1", 0);
    ASSERT_GT(port_, 0);
    thread_ = std::thread([this] { service_.listen_after_bind(); });
    client_ = std::make_unique<httplib::Client>("127.0.0.1", port_);
    for (int k = 0; k < 200 && !client_->Get("/healthz"); ++k) {
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
  }

  void TearDown() override {
    service_.stop();
    if (thread_.joinable()) thread_.join();
  }

  void attach_offline() { service_.attach(std::make_shared<const Engine>(offline_config())); }

  httplib::Result ask(const std::string& body) {
    return client_->Post("/api/v1/ask", body, "application/json");
  }

  QaService service_{"https://ui.example"};
  int port_ = 0;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

TEST_F(ServiceTest, UnavailableUntilAttached) {
  auto res = client_->Get("/healthz");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(client_->Get("/api/v1/models")->status, 503);
  EXPECT_EQ(ask(R"({"question": "x?"})")->status, 503);
  EXPECT_EQ(client_->Get("/readyz")->status, 503);

  attach_offline();
  res = client_->Get("/api/v1/models");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(nlohmann::json::parse(res->body), nlohmann::json::array({"covid-ro-v1"}));
  EXPECT_EQ(client_->Get("/readyz")->status, 200);
}

TEST_F(ServiceTest, GoldenAskResponse) {
  attach_offline();
  const auto res = ask(nlohmann::json{{"question", kGoldenQuestion}}.dump());
  ASSERT_TRUE(res);
  ASSERT_EQ(res->status, 200) << res->body;
  EXPECT_EQ(res->get_header_value("Content-Type"), "application/json; charset=utf-8");
  const auto golden =
      testing::read_file(testing::data_dir() / "offline" / "golden" / "ask_certificat_verde.json");
  EXPECT_EQ(res->body, nlohmann::ordered_json::parse(golden).dump());
  EXPECT_EQ(nlohmann::ordered_json::parse(res->body).dump(2) + "\n", golden);
}

TEST_F(ServiceTest, AskOptions) {
  attach_offline();
  auto res = ask(nlohmann::json{{"question", kGoldenQuestion}, {"top_k", 1}}.dump());
  ASSERT_TRUE(res);
  EXPECT_EQ(nlohmann::json::parse(res->body)["results"].size(), 1u);

  res = ask(nlohmann::json{{"question", kGoldenQuestion},
                           {"query_mode", "baseline"},
                           {"model", "covid-ro-v1"}}
                .dump());
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  const auto body = nlohmann::json::parse(res->body);
  EXPECT_EQ(body["query_terms"], nlohmann::json::array({kGoldenQuestion}));
  // no fixture for the raw question
  EXPECT_TRUE(body["results"].empty());
}

TEST_F(ServiceTest, BadRequests) {
  attach_offline();
  for (const std::string body :
       {"{not json", "[]", R"({"question": 3})", R"({"question": "   "})",
        R"({"question": "x?", "top_k": 0})", R"({"question": "x?", "top_k": "3"})",
        R"({"question": "x?", "query_mode": "fancy"})", R"({"question": "x?", "model": "gpt"})"}) {
    const auto res = ask(body);
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400) << body;
    EXPECT_TRUE(nlohmann::json::parse(res->body).contains("error"));
  }
}

TEST_F(ServiceTest, CorsHeadersAndPreflight) {
  const auto res = client_->Options("/api/v1/ask");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 204);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "https://ui.example");
  EXPECT_EQ(client_->Get("/healthz")->get_header_value("Access-Control-Allow-Origin"),
            "https://ui.example");
}

TEST(Engine, LiveModeNeedsAnInferenceEndpoint) {
  AppConfig cfg;
  EXPECT_THROW(Engine{cfg}, ConfigError);
}

TEST(Engine, ProbeReportsUnreachableDependencies) {
  AppConfig cfg;
  cfg.infer_endpoint = testing::dead_endpoint();
  cfg.search.endpoint = testing::dead_endpoint();
  const Engine engine(cfg);
  EXPECT_FALSE(engine.probe().empty());
  EXPECT_TRUE(Engine(offline_config()).probe().empty());
}

TEST(AskResponse, Shape) {
  const SearchHit hit(3, "https://a.ro", "A", "vremea caldă");
  const std::vector<RankedAnswer> answers = {
      RankedAnswer(hit, AnswerSpan::from_snippet(hit.snippet(), 7, 12, 0.5)),
      RankedAnswer(hit.with_rank(4), AnswerSpan::no_answer(0.9))};
  const auto j = ask_response({Query({"vremea", "caldă"}, QueryKind::kContentWords)}, answers, 5);
  EXPECT_EQ(j["query_terms"], nlohmann::json::array({"vremea caldă"}));
  ASSERT_EQ(j["results"].size(), 2u);
  EXPECT_EQ(j["results"][0]["position"], 1);
  EXPECT_EQ(j["results"][0]["answer"]["text"], "caldă");
  EXPECT_EQ(j["results"][0]["q"].get<double>(), combined_confidence(0.5, 3));
  EXPECT_TRUE(j["results"][1]["answer"].is_null());
  EXPECT_EQ(ask_response({}, answers, 1)["results"].size(), 1u);
}

struct CliRun {
  int exit_code;
  std::string out;
};

CliRun run_cli(const std::string& args) {
  const std::string cmd = std::string(ODQA_TEST_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw std::runtime_error("popen failed");
  std::string out;
  char buf[4096];
  while (const auto n = std::fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string offline_flag() { return "--offline '" + (testing::data_dir() / "offline").string() + "'"; }

TEST(Cli, AskMatchesGoldenOutput) {
  const auto golden = testing::data_dir() / "offline" / "golden";
  auto run = run_cli("ask " + offline_flag() + " '" + kGoldenQuestion + "'");
  EXPECT_EQ(run.exit_code, 0);
  EXPECT_EQ(run.out, testing::read_file(golden / "ask_certificat_verde.txt"));
  run = run_cli("ask --json " + offline_flag() + " '" + kGoldenQuestion + "'");
  EXPECT_EQ(run.exit_code, 0);
  EXPECT_EQ(run.out, testing::read_file(golden / "ask_certificat_verde.json"));
}

TEST(Cli, EvalMatchesGoldenReport) {
  testing::TempDir dir;
  const auto testset = testing::data_dir() / "offline" / "testset.json";
  const auto run = run_cli("eval " + offline_flag() + " --testset '" + testset.string() +
                           "' --report '" + (dir / "report.json").string() + "'");
  EXPECT_EQ(run.exit_code, 0);
  EXPECT_NE(run.out.find("| cw-union | 0.6000 | 60.00 | 76.31 |"), std::string::npos) << run.out;
  EXPECT_EQ(testing::read_file(dir / "report.json"),
            testing::read_file(testing::data_dir() / "offline" / "golden" / "eval_report.json"));
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("ask --mode fancy " + offline_flag() + " 'x?'").exit_code, 2);
  EXPECT_EQ(run_cli("eval --testset /nonexistent.json").exit_code, 2);
  EXPECT_EQ(run_cli("eval " + offline_flag() + " --testset /nonexistent/testset.json").exit_code,
            4);
  EXPECT_EQ(run_cli("ask --set no.such=1 " + offline_flag() + " 'x?'").exit_code, 2);
  EXPECT_NE(run_cli("frobnicate").exit_code, 0);
  EXPECT_EQ(run_cli("ask " + offline_flag() + " '   '").exit_code, 3);
}

TEST(Cli, ExpandIsDeterministic) {
  testing::TempDir dir;
  const auto corpus = (testing::data_dir() / "corpus" / "sample_covid_qa.txt").string();
  auto expand = [&](const std::string& tag) {
    return run_cli("expand --in '" + corpus + "' --seed 42 --out-train '" +
                   (dir / (tag + "_train.json")).string() + "' --out-dev '" +
                   (dir / (tag + "_dev.json")).string() + "'");
  };
  const auto a = expand("a");
  const auto b = expand("b");
  EXPECT_EQ(a.exit_code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_NE(a.out.find("24"), std::string::npos);
  EXPECT_EQ(testing::read_file(dir / "a_train.json"), testing::read_file(dir / "b_train.json"));
  EXPECT_EQ(testing::read_file(dir / "a_dev.json"), testing::read_file(dir / "b_dev.json"));
}

}  // namespace
}  // namespace odqa
