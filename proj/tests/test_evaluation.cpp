#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "support/reference_rows.hpp"
#include "tablescope/error.hpp"
#include "tablescope/evaluation.hpp"

using namespace tablescope;
using namespace tablescope::testing;

namespace {

std::vector<RetrievalRanking> rankings_with_gold_at(const std::vector<int>& positions) {
  std::vector<RetrievalRanking> out;
  for (std::size_t q = 0; q < positions.size(); ++q) {
    RetrievalRanking r{"q" + std::to_string(q), {}, 3};
    for (int i = 0; i < 3; ++i) {
      r.ranked.push_back({i + 1 == positions[q] ? "gold" : "t" + std::to_string(i), 0, 0.0, {}});
    }
    out.push_back(r);
  }
  return out;
}

}  // namespace

TEST(Prf, ReproducesReferenceRows) {
  for (const auto& row : reference_prf()) {
    const auto r = prf(row.counts);
    EXPECT_NEAR(r.precision.value(), row.precision, 0.01) << row.scheme;
    EXPECT_NEAR(r.recall.value(), row.recall, 0.01) << row.scheme;
    EXPECT_NEAR(r.f1.value(), row.f1, 0.01) << row.scheme;
  }
  const auto roberta = prf(reference_prf().back().counts);
  EXPECT_EQ(roberta.precision.to_string(), "90.10");
  EXPECT_EQ(roberta.recall.to_string(), "89.92");
  EXPECT_EQ(roberta.f1.to_string(), "90.01");
}

TEST(Prf, ZeroDenominatorsReadAsZero) {
  const auto r = prf({0, 0, 10, 0});
  EXPECT_EQ(r.precision.value(), 0.0);
  EXPECT_EQ(r.recall.value(), 0.0);
  EXPECT_EQ(r.f1.value(), 0.0);
  EXPECT_EQ(r.f1.to_string(), "0.00");
}

TEST(Prf, HarmonicMeanIdentity) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> d(0, 500);
  for (int i = 0; i < 1000; ++i) {
    const ConfusionCounts c{std::uint64_t(d(rng)) + 1, std::uint64_t(d(rng)), std::uint64_t(d(rng)),
                            std::uint64_t(d(rng))};
    const auto r = prf(c);
    const double p = r.precision.value(), q = r.recall.value();
    EXPECT_NEAR(r.f1.value(), 2 * p * q / (p + q), 1e-9);
  }
}

TEST(Percentage, RoundsHalfUpExactly) {
  EXPECT_EQ((Percentage{1, 8}).to_string(), "12.50");
  EXPECT_EQ((Percentage{1, 3}).to_string(), "33.33");
  EXPECT_EQ((Percentage{2, 3}).to_string(), "66.67");
  EXPECT_EQ((Percentage{1, 80000}).to_string(), "0.00");
  EXPECT_EQ((Percentage{1, 40000}).to_string(), "0.00");
  EXPECT_EQ((Percentage{1, 20000}).to_string(), "0.01");
  EXPECT_EQ((Percentage{5, 5}).to_string(), "100.00");
}

TEST(Confusion, TalliesAndChecksLength) {
  const std::vector<int> pred{1, 1, 0, 0, 1}, gold{1, 0, 0, 1, 1};
  EXPECT_EQ(confusion(pred, gold), (ConfusionCounts{2, 1, 1, 1}));
  EXPECT_THROW(confusion(pred, std::vector<int>{1}), LengthMismatch);
}

TEST(RecallAtK, ReproducesReferenceValues) {
  std::vector<int> positions(38, 1);
  positions.insert(positions.end(), 7, 2);
  positions.insert(positions.end(), 2, 3);
  positions.insert(positions.end(), 6, 0);
  const auto rankings = rankings_with_gold_at(positions);
  std::map<std::string, std::string> gold;
  for (const auto& r : rankings) gold[r.query_id] = "gold";
  for (int k = 1; k <= 3; ++k) {
    const auto r = recall_at_k(rankings, gold, k);
    EXPECT_EQ(r.num, kRecallHits[k - 1]);
    EXPECT_EQ(r.den, kRecallQueries);
    EXPECT_NEAR(r.value(), kRecallPercent[k - 1], 0.01);
  }
  EXPECT_EQ(recall_at_k(rankings, gold, 3).to_string(), "88.68");
}

TEST(RecallAtK, ShortRankingsAndErrors) {
  RetrievalRanking r{"q", {{"gold", 0, 1.0, {}}}, 5};
  EXPECT_EQ(recall_at_k({r}, {{"q", "gold"}}, 5).num, 1u);
  EXPECT_THROW(recall_at_k({r}, {}, 1), MissingGoldError);
  EXPECT_THROW(recall_at_k({r}, {{"q", "gold"}}, 0), InvalidK);
}

TEST(DocLevel, CountsEachDocumentOnce) {
  DocGroups groups{{"a", {{1, 1}, {0, 0}}},
                   {"b", {{0, 1}, {0, 0}}},
                   {"c", {{1, 1}, {1, 0}}},
                   {"d", {{0, 0}}}};
  EXPECT_EQ(doc_level(groups), (DocLevelResult{2, 3, 3, 4}));
  EXPECT_THROW(doc_level({{"e", {}}}), EmptyGroupError);
}

TEST(DocLevel, MatchesBruteForceOnRandomGroups) {
  std::mt19937_64 rng(193);
  std::uniform_int_distribution<int> len(1, 15), bit(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    DocGroups groups;
    for (int d = 0; d < 193; ++d) {
      auto& pairs = groups["doc" + std::to_string(d)];
      const int n = len(rng);
      for (int i = 0; i < n; ++i) pairs.emplace_back(bit(rng), bit(rng));
    }
    DocLevelResult expected;
    for (const auto& [id, pairs] : groups) {
      std::vector<std::pair<int, int>> pos, neg;
      std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(pos), [](auto p) { return p.second == 1; });
      std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(neg), [](auto p) { return p.second == 0; });
      auto all_match = [](const auto& v) {
        return std::all_of(v.begin(), v.end(), [](auto p) { return p.first == p.second; });
      };
      expected.pos_correct += all_match(pos);
      expected.neg_correct += all_match(neg);
      expected.all_correct += all_match(pairs);
      ++expected.n_docs;
    }
    const auto got = doc_level(groups);
    EXPECT_EQ(got, expected);
    EXPECT_LE(got.all_correct, std::min(got.pos_correct, got.neg_correct));
  }
}

TEST(DocLevel, ReferenceRowsAreConsistent) {
  for (const auto& [scheme, row] : reference_doc_level()) {
    EXPECT_LE(row.all_correct, std::min(row.pos_correct, row.neg_correct)) << scheme;
    EXPECT_LE(row.pos_correct, row.n_docs);
    EXPECT_LE(row.neg_correct, row.n_docs);
  }
}

TEST(Latency, BatchSizesDifferByAtMostOne) {
  std::vector<double> durations(975);
  for (std::size_t i = 0; i < durations.size(); ++i) durations[i] = 0.001 * double(i % 37) + 0.25;
  const auto r = latency_batches(durations, 10, 7);
  std::vector<std::size_t> sizes;
  for (const auto& b : r.batches) sizes.push_back(b.size());
  std::sort(sizes.begin(), sizes.end());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{97, 97, 97, 97, 97, 98, 98, 98, 98, 98}));
  std::vector<std::size_t> all;
  for (const auto& b : r.batches) all.insert(all.end(), b.begin(), b.end());
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) EXPECT_EQ(all[i], i);

  double weighted = 0;
  for (std::size_t b = 0; b < r.batches.size(); ++b) weighted += r.batch_means[b] * double(r.batches[b].size());
  EXPECT_NEAR(weighted / 975.0, r.mean, 1e-12);
}

TEST(Latency, SeedControlsAssignment) {
  std::vector<double> durations(40);
  std::iota(durations.begin(), durations.end(), 1.0);
  EXPECT_EQ(latency_batches(durations, 4, 1).batches, latency_batches(durations, 4, 1).batches);
  EXPECT_NE(latency_batches(durations, 4, 1).batches, latency_batches(durations, 4, 2).batches);
  EXPECT_THROW(latency_batches(durations, 0, 1), InvalidBatchCount);
  EXPECT_THROW(latency_batches(durations, 41, 1), InvalidBatchCount);
  EXPECT_EQ(latency_batches(durations, 1, 1).mean, 20.5);
}

TEST(Latency, MedianConvention) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
}

TEST(Reports, TextTablesAndCsv) {
  const auto table = prf_table({{"RoBERTa", reference_prf().back().counts}});
  EXPECT_NE(table.find("90.10"), std::string::npos);
  EXPECT_NE(table.find("RoBERTa"), std::string::npos);
  const auto j = prf_to_json(reference_prf().back().counts);
  EXPECT_EQ(j["f1"], "90.01");
  std::vector<double> d{1.0, 2.0, 3.0, 4.0};
  const auto csv = latency_plot_csv(latency_batches(d, 2, 0));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "batch_id,mean_s,median_s");
}
