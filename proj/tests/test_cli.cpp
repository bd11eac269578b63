#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support/stub_server.hpp"
#include "tablescope/cli.hpp"
#include "tablescope/datasetgen.hpp"
#include "tablescope/parser.hpp"

using namespace tablescope;
namespace fs = std::filesystem;

namespace {

const fs::path kSample = fs::path(TABLESCOPE_FIXTURES_DIR) / "sample_document.json";

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("tablescope-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const std::string& content) const {
    std::ofstream(path(name), std::ios::binary) << content;
    return path(name);
  }

  static std::string read(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, HelpExitsZero) {
  const auto r = run_cli({"--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("parse"), std::string::npos);
  EXPECT_EQ(run_cli({"parse", "--help"}).status, 0);
}

TEST_F(CliTest, UsageErrorsExitThree) {
  EXPECT_EQ(run_cli({}).status, cli::kUsageError);
  EXPECT_EQ(run_cli({"frobnicate"}).status, cli::kUsageError);
  EXPECT_EQ(run_cli({"parse"}).status, cli::kUsageError);
  EXPECT_EQ(run_cli({"parse", "--doc", kSample.string(), "--theta", "2"}).status, cli::kUsageError);
  EXPECT_EQ(run_cli({"parse", "--doc", kSample.string(), "--scorer", "gpt"}).status, cli::kUsageError);
  EXPECT_EQ(run_cli({"build-training", "--doc", kSample.string(), "--triplets", "x"}).status,
            cli::kUsageError);
}

TEST_F(CliTest, IngestCanonicalizes) {
  const auto r = run_cli({"ingest", "--doc", kSample.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto again = write("canon.json", r.out);
  EXPECT_EQ(run_cli({"ingest", "--doc", again}).out, r.out);
}

TEST_F(CliTest, InvalidDocumentExitsOne) {
  const auto bad = write("bad.json", R"({"doc_id":"x","source":"s","pages":[{"page_id":0,"width_px":10,"height_px":10,"blocks":[{"block_id":"a","type":"Text","bbox":[0,0,20,5],"text":"t"}]}]})");
  const auto r = run_cli({"validate", "--doc", bad});
  EXPECT_EQ(r.status, cli::kValidationFailure);
  EXPECT_NE(r.err.find("GeometryError"), std::string::npos);
  EXPECT_EQ(run_cli({"validate", "--doc", kSample.string()}).out, "ok sample-0001\n");
}

TEST_F(CliTest, ParseIsDeterministic) {
  const auto a = run_cli({"parse", "--doc", kSample.string()});
  ASSERT_EQ(a.status, 0) << a.err;
  const auto b = run_cli({"parse", "--doc", kSample.string(), "--jobs", "4"});
  EXPECT_EQ(a.out, b.out);
  const auto parsed = import_parse(a.out);
  ASSERT_EQ(parsed.entries.size(), 2u);
  EXPECT_EQ(parsed.entries[0].related, (std::vector<std::string>{"b02"}));
  EXPECT_EQ(parsed.entries[1].related, (std::vector<std::string>{"b07"}));
}

TEST_F(CliTest, LlmPromptRoundTrip) {
  const auto prompts = path("prompts.jsonl");
  EXPECT_EQ(run_cli({"parse", "--doc", kSample.string(), "--scorer", "llm-prompt"}).status,
            cli::kUsageError);
  ASSERT_EQ(run_cli({"parse", "--doc", kSample.string(), "--scorer", "llm-prompt", "--emit-prompts",
                     prompts})
                .status,
            0);
  const auto rows = read_jsonl(read(prompts), "prompts");
  ASSERT_EQ(rows.size(), 8u);
  std::string replies;
  for (const auto& row : rows) {
    const bool yes = row["table_block_id"] == "b03" && row["text_block_id"] == "b05";
    replies += canonical_dump({{"table_block_id", row["table_block_id"]},
                               {"text_block_id", row["text_block_id"]},
                               {"reply", yes ? "1" : "0"}}) + "\n";
  }
  const auto r = run_cli({"parse", "--doc", kSample.string(), "--scorer", "llm-prompt", "--replies",
                          write("replies.jsonl", replies)});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(import_parse(r.out).entries[0].related, (std::vector<std::string>{"b05"}));
  const auto broken = run_cli({"parse", "--doc", kSample.string(), "--scorer", "llm-prompt",
                               "--replies", write("broken.jsonl", "")});
  EXPECT_EQ(broken.status, cli::kScorerFailure);
}

TEST_F(CliTest, RemoteScorerFailureExitsTwo) {
  tablescope::testing::StubModelServer stub([](const std::string&, const json& body) {
    return json{{"scores", std::vector<double>(body["pairs"].size(), 7.0)}};
  });
  const auto r = run_cli({"parse", "--doc", kSample.string(), "--scorer", "remote", "--endpoint",
                          stub.endpoint()});
  EXPECT_EQ(r.status, cli::kScorerFailure);
  EXPECT_NE(r.err.find("ProtocolError"), std::string::npos);
}

TEST_F(CliTest, RemoteScorerParse) {
  tablescope::testing::StubModelServer stub([](const std::string&, const json& body) {
    std::vector<double> scores;
    for (const auto& p : body["pairs"]) {
      scores.push_back(p["text_text"].get<std::string>().find("Annotators") != std::string::npos ? 0.8 : 0.1);
    }
    return json{{"scores", scores}};
  });
  const auto r = run_cli({"parse", "--doc", kSample.string(), "--scorer", "remote", "--endpoint",
                          stub.endpoint(), "--batch-size", "3"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto parsed = import_parse(r.out);
  EXPECT_EQ(parsed.entries[0].related, (std::vector<std::string>{"b08"}));
  EXPECT_EQ(parsed.entries[1].related, (std::vector<std::string>{"b08"}));
}

TEST_F(CliTest, RetrieveSingleQuery) {
  const auto r = run_cli({"retrieve", "--doc", kSample.string(), "--query", "arXiv PubMed corpus sources",
                          "--k", "1"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = json::parse(r.out);
  ASSERT_EQ(j["ranked"].size(), 1u);
  EXPECT_EQ(j["ranked"][0]["table_block_id"], "b06");
  EXPECT_EQ(j["ranked"][0]["related_text"], json({"b07"}));
  EXPECT_EQ(run_cli({"retrieve", "--doc", kSample.string()}).status, cli::kUsageError);
  EXPECT_EQ(run_cli({"retrieve", "--doc", kSample.string(), "--query", "x", "--k", "0"}).status,
            cli::kValidationFailure);
}

TEST_F(CliTest, RetrievalEvaluation) {
  const auto queries = write("queries.jsonl",
                             "{\"query_id\":\"q1\",\"text\":\"precision recall of encoder models\","
                             "\"gold_table_id\":\"b03\"}\n"
                             "{\"query_id\":\"q2\",\"text\":\"pages per source\",\"gold_table_id\":\"b06\"}\n");
  const auto rankings = path("rankings.jsonl");
  ASSERT_EQ(run_cli({"retrieve", "--doc", kSample.string(), "--queries", queries, "--k", "2", "--out",
                     rankings})
                .status,
            0);
  const auto r = run_cli({"evaluate-retrieval", "--rankings", rankings, "--queries", queries, "--k", "1", "2"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["n_queries"], 2);
  EXPECT_EQ(j["recall_at_k"][1]["recall"], "100.00");
}

TEST_F(CliTest, EvaluatePairsFromParseResult) {
  const auto parse_out = path("parse.json");
  ASSERT_EQ(run_cli({"parse", "--doc", kSample.string(), "--out", parse_out}).status, 0);
  std::string gold;
  for (const auto* table : {"b03", "b06"}) {
    for (const auto* text : {"b02", "b05", "b07", "b08"}) {
      const int label = (std::string(table) == "b03" && std::string(text) == "b02") ||
                        (std::string(table) == "b06" && std::string(text) == "b07") ||
                        (std::string(table) == "b03" && std::string(text) == "b05");
      gold += canonical_dump({{"doc_id", "sample-0001"}, {"table_block_id", table},
                              {"text_block_id", text}, {"label", label}}) + "\n";
    }
  }
  const auto gold_path = write("gold.jsonl", gold);
  const auto r = run_cli({"evaluate-pairs", "--pred", parse_out, "--gold", gold_path});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = json::parse(r.out);
  EXPECT_EQ(j["tp"], 2);
  EXPECT_EQ(j["fn"], 1);
  EXPECT_EQ(j["fp"], 0);
  EXPECT_EQ(j["tn"], 5);
  EXPECT_EQ(j["precision"], "100.00");
  EXPECT_EQ(j["recall"], "66.67");
  EXPECT_EQ(j["f1"], "80.00");

  const auto docs = run_cli({"evaluate-docs", "--pred", parse_out, "--gold", gold_path});
  ASSERT_EQ(docs.status, 0) << docs.err;
  const auto d = json::parse(docs.out);
  EXPECT_EQ(d["all_correct"], 0);
  EXPECT_EQ(d["neg_correct"], 1);
  EXPECT_EQ(d["n_docs"], 1);

  const auto missing = write("missing.jsonl", "{\"doc_id\":\"sample-0001\",\"table_block_id\":\"b03\",\"text_block_id\":\"zz\",\"label\":1}\n");
  EXPECT_EQ(run_cli({"evaluate-pairs", "--pred", parse_out, "--gold", missing}).status,
            cli::kValidationFailure);
}

TEST_F(CliTest, TrainingPipelineIsReproducible) {
  const auto triplets = write("triplets.jsonl",
                              "{\"annotator_id\":\"consensus\",\"doc_id\":\"sample-0001\",\"page_id\":0,"
                              "\"related_paragraphs\":[\"b02\"],\"table_id\":\"b03\"}\n"
                              "{\"annotator_id\":\"consensus\",\"doc_id\":\"sample-0001\",\"page_id\":1,"
                              "\"related_paragraphs\":[\"b07\",\"b08\"],\"table_id\":\"b06\"}\n");
  const auto a = run_cli({"build-training", "--doc", kSample.string(), "--triplets", triplets, "--seed", "13"});
  ASSERT_EQ(a.status, 0) << a.err;
  EXPECT_EQ(run_cli({"build-training", "--doc", kSample.string(), "--triplets", triplets, "--seed", "13"}).out,
            a.out);
  const auto rows = read_jsonl(a.out, "pairs");
  EXPECT_EQ(rows.size(), 6u);

  const auto samples = write("pairs.jsonl", a.out);
  ASSERT_EQ(run_cli({"split", "--samples", samples, "--seed", "1", "--train-out", path("train.jsonl"),
                     "--test-out", path("test.jsonl")})
                .status,
            0);
  EXPECT_EQ(read_jsonl(read(path("train.jsonl")), "train").size(), 4u);
  EXPECT_EQ(read_jsonl(read(path("test.jsonl")), "test").size(), 2u);
  EXPECT_EQ(run_cli({"split", "--samples", samples, "--seed", "1", "--ratio", "7-3", "--train-out",
                     path("a"), "--test-out", path("b")})
                .status,
            cli::kUsageError);
}

TEST_F(CliTest, StatsAndBench) {
  const auto r = run_cli({"stats", "--doc", kSample.string()});
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["total"]["n_text_block"], 4);

  std::string durations;
  for (int i = 0; i < 975; ++i) durations += std::to_string(0.1 + 0.001 * (i % 50)) + "\n";
  const auto dpath = write("durations.txt", durations);
  const auto plot = path("plot.csv");
  const auto b = run_cli({"bench", "--durations", dpath, "--batches", "10", "--seed", "0",
                          "--emit-plot-data", plot});
  ASSERT_EQ(b.status, 0) << b.err;
  const auto j = json::parse(b.out);
  EXPECT_EQ(j["batches"].size(), 10u);
  EXPECT_EQ(j["n_samples"], 975);
  const auto csv = read(plot);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 11);
  EXPECT_EQ(run_cli({"bench", "--durations", dpath, "--batches", "0", "--seed", "0"}).status,
            cli::kValidationFailure);

  const auto timed = run_cli({"bench", "--doc", kSample.string(), "--batches", "2", "--seed", "4"});
  ASSERT_EQ(timed.status, 0) << timed.err;
  EXPECT_EQ(json::parse(timed.out)["n_samples"], 8);
}
