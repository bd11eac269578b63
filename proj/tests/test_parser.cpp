#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "tablescope/error.hpp"
#include "tablescope/parser.hpp"

using namespace tablescope;
using namespace tablescope::testing;

namespace {

Document results_doc() {
  return make_document("d1",
                       {make_block("t1", BlockType::Table, "Table 1: error rate by model", 0),
                        make_block("t2", BlockType::Table, "Table 2: dataset sizes", 1),
                        make_block("s1", BlockType::Text, "Table 1 shows the error rate.", 0),
                        make_block("s2", BlockType::List, "dataset sizes are in Table 2", 1),
                        make_block("s3", BlockType::Text, "unrelated prose about trials", 1),
                        make_block("h", BlockType::Title, "Table 1", 0)},
                       2);
}

}  // namespace

TEST(Parser, CandidatePairsCoverEveryTableTextCombination) {
  const auto doc = results_doc();
  const auto pairs = candidate_pairs(doc);
  ASSERT_EQ(pairs.size(), 6u);
  EXPECT_EQ(pairs[0].table->block_id, "t1");
  EXPECT_EQ(pairs[0].text->block_id, "s1");
  EXPECT_EQ(pairs[1].text->block_id, "s2");
  EXPECT_EQ(pairs[5].table->block_id, "t2");

  ParseOptions near;
  near.page_window = 0;
  EXPECT_EQ(candidate_pairs(doc, near).size(), 3u);
}

TEST(Parser, NumberMatchedParagraphsAreRelated) {
  const auto doc = results_doc();
  ScorerConfig cfg;
  HeuristicScorer scorer(cfg);
  const auto parsed = parse_semantics(doc, scorer, cfg);
  ASSERT_EQ(parsed.entries.size(), 2u);
  EXPECT_EQ(parsed.doc_id, "d1");
  EXPECT_EQ(parsed.entries[0].table_block_id, "t1");
  EXPECT_EQ(parsed.entries[0].related, (std::vector<std::string>{"s1"}));
  EXPECT_EQ(parsed.entries[1].related, (std::vector<std::string>{"s2"}));
  EXPECT_EQ(parsed.entries[1].page_id, 1);
  EXPECT_EQ(parsed.entries[0].scores.size(), 3u);
  EXPECT_EQ(parsed.entries[0].scores.at("s1"), 1.0);
}

TEST(Parser, DocumentWithoutTablesHasNoEntries) {
  const auto doc = make_document("empty", {make_block("s", BlockType::Text, "prose only")});
  ScorerConfig cfg;
  HeuristicScorer scorer(cfg);
  const auto parsed = parse_semantics(doc, scorer, cfg);
  EXPECT_TRUE(parsed.entries.empty());
  EXPECT_EQ(export_parse(parsed), "{\"doc_id\":\"empty\",\"entries\":[]}\n");
}

TEST(Parser, TableWithoutCandidatesHasEmptyRelated) {
  const auto doc = make_document("d", {make_block("t", BlockType::Table, "Table 1")});
  ScorerConfig cfg;
  HeuristicScorer scorer(cfg);
  const auto parsed = parse_semantics(doc, scorer, cfg);
  ASSERT_EQ(parsed.entries.size(), 1u);
  EXPECT_TRUE(parsed.entries[0].related.empty());
}

TEST(Parser, MatchesExhaustiveEnumeration) {
  std::mt19937_64 rng(2024);
  for (int d = 0; d < 30; ++d) {
    const auto doc = random_document(rng, "doc" + std::to_string(d));
    MatrixScorer scorer(random_matrix(doc, rng));
    for (double theta : {0.0, 0.3, 0.5, 0.7, 1.0}) {
      ScorerConfig cfg;
      cfg.theta = theta;
      EXPECT_EQ(related_map(parse_semantics(doc, scorer, cfg)),
                enumerate_related(doc, scorer, theta));
    }
  }
}

TEST(Parser, ScoresEachPairExactlyOnce) {
  std::mt19937_64 rng(5);
  const auto doc = random_document(rng, "once", 5, 30);
  MatrixScorer scorer(random_matrix(doc, rng));
  ScorerConfig cfg;
  parse_semantics(doc, scorer, cfg);
  EXPECT_EQ(scorer.scored_pairs(), candidate_pairs(doc).size());
}

TEST(Parser, OutputIndependentOfJobs) {
  std::mt19937_64 rng(99);
  for (int d = 0; d < 10; ++d) {
    const auto doc = random_document(rng, "j" + std::to_string(d));
    ScorerConfig cfg;
    HeuristicScorer scorer(cfg);
    const auto serial = export_parse(parse_semantics(doc, scorer, cfg));
    for (std::size_t jobs : {2u, 3u, 8u}) {
      ParseOptions opts;
      opts.jobs = jobs;
      EXPECT_EQ(export_parse(parse_semantics(doc, scorer, cfg, opts)), serial);
    }
  }
}

TEST(Parser, HigherThresholdNeverAddsPairs) {
  std::mt19937_64 rng(17);
  for (int d = 0; d < 20; ++d) {
    const auto doc = random_document(rng, "m" + std::to_string(d));
    MatrixScorer scorer(random_matrix(doc, rng));
    ScorerConfig low, high;
    low.theta = 0.35;
    high.theta = 0.65;
    const auto a = related_map(parse_semantics(doc, scorer, low));
    const auto b = related_map(parse_semantics(doc, scorer, high));
    for (const auto& [table, related] : b) {
      for (const auto& id : related) {
        EXPECT_NE(std::find(a.at(table).begin(), a.at(table).end(), id), a.at(table).end());
      }
    }
  }
}

TEST(Parser, RethresholdAgreesWithFreshParse) {
  std::mt19937_64 rng(8);
  const auto doc = random_document(rng, "r", 5, 30);
  MatrixScorer scorer(random_matrix(doc, rng));
  ScorerConfig zero;
  zero.theta = 0.0;
  const auto all = parse_semantics(doc, scorer, zero);
  for (double theta : {0.2, 0.5, 0.9}) {
    ScorerConfig cfg;
    cfg.theta = theta;
    const auto fresh = parse_semantics(doc, scorer, cfg);
    for (std::size_t i = 0; i < all.entries.size(); ++i) {
      auto expected = fresh.entries[i].related;
      std::sort(expected.begin(), expected.end());
      EXPECT_EQ(rethreshold(all.entries[i], theta), expected);
    }
  }
}

TEST(Parser, ExportRoundTripsByteIdentically) {
  const auto doc = results_doc();
  ScorerConfig cfg;
  HeuristicScorer scorer(cfg);
  const auto parsed = parse_semantics(doc, scorer, cfg);
  const auto bytes = export_parse(parsed);
  EXPECT_EQ(import_parse(bytes), parsed);
  EXPECT_EQ(export_parse(import_parse(bytes)), bytes);
  EXPECT_EQ(bytes.find("theta"), std::string::npos);
  EXPECT_THROW(import_parse("{\"doc_id\":1}"), SchemaError);
}

TEST(Parser, RejectsScorerReturningWrongCount) {
  class ShortScorer final : public PairScorer {
   public:
    std::vector<double> score_pairs(const Document&, std::span<const PairRef>) override {
      return {};
    }
  } scorer;
  ScorerConfig cfg;
  EXPECT_THROW(parse_semantics(results_doc(), scorer, cfg), ProtocolError);
}
