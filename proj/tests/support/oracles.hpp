#pragma once

#include <algorithm>
#include <atomic>
#include <map>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "tablescope/association.hpp"
#include "tablescope/datasetgen.hpp"
#include "tablescope/parser.hpp"
#include "tablescope/retrieval.hpp"

namespace tablescope::testing {

/// Pair scorer backed by a fixed (table_id, text_id) -> p table.
class MatrixScorer final : public PairScorer {
 public:
  explicit MatrixScorer(std::map<std::pair<std::string, std::string>, double> p)
      : p_(std::move(p)) {}

  std::vector<double> score_pairs(const Document&, std::span<const PairRef> pairs) override {
    calls_ += pairs.size();
    std::vector<double> out;
    for (const auto& pr : pairs) out.push_back(p_.at({pr.table->block_id, pr.text->block_id}));
    return out;
  }

  std::size_t scored_pairs() const { return calls_; }

 private:
  std::map<std::pair<std::string, std::string>, double> p_;
  std::atomic<std::size_t> calls_{0};
};

/// Uniform random p for every table/text pair of `doc`, with a share of
/// values drawn from a small grid so that ties with theta occur.
inline std::map<std::pair<std::string, std::string>, double> random_matrix(const Document& doc,
                                                                          std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> grid(0, 10);
  std::map<std::pair<std::string, std::string>, double> p;
  for (const auto& page : doc.pages) {
    for (const auto& t : page.blocks) {
      if (t.kind != BlockType::Table) continue;
      for (const auto& page2 : doc.pages) {
        for (const auto& s : page2.blocks) {
          if (s.kind != BlockType::Text && s.kind != BlockType::List) continue;
          p[{t.block_id, s.block_id}] = grid(rng) < 3 ? grid(rng) / 10.0 : u(rng);
        }
      }
    }
  }
  return p;
}

/// Exhaustive enumeration: every table against every Text/List block, one
/// scorer call per pair, kept iff p >= theta. Result as table -> related ids
/// in (page, id) order.
inline std::map<std::string, std::vector<std::string>> enumerate_related(const Document& doc,
                                                                         PairScorer& scorer,
                                                                         double theta) {
  std::vector<const Block*> tables, texts;
  for (const auto& page : doc.pages) {
    for (const auto& b : page.blocks) {
      if (b.kind == BlockType::Table) tables.push_back(&b);
      if (b.kind == BlockType::Text || b.kind == BlockType::List) texts.push_back(&b);
    }
  }
  auto by_position = [](const Block* a, const Block* b) {
    return std::tie(a->page_id, a->block_id) < std::tie(b->page_id, b->block_id);
  };
  std::sort(texts.begin(), texts.end(), by_position);
  std::map<std::string, std::vector<std::string>> out;
  for (const auto* t : tables) {
    auto& related = out[t->block_id];
    for (const auto* s : texts) {
      const PairRef pair{t, s};
      const double p = scorer.score_pairs(doc, std::span<const PairRef>(&pair, 1)).at(0);
      if (p >= theta) related.push_back(s->block_id);
    }
  }
  return out;
}

inline std::map<std::string, std::vector<std::string>> related_map(const ParsedDocument& parsed) {
  std::map<std::string, std::vector<std::string>> out;
  for (const auto& e : parsed.entries) out[e.table_block_id] = e.related;
  return out;
}

/// Full sort then truncate, with the documented order written out long-hand.
inline std::vector<ScoredTable> sort_truncate(std::vector<ScoredTable> items, int k) {
  std::stable_sort(items.begin(), items.end(), [](const ScoredTable& a, const ScoredTable& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.page_id != b.page_id) return a.page_id < b.page_id;
    return a.table_block_id < b.table_block_id;
  });
  items.resize(std::min<std::size_t>(items.size(), static_cast<std::size_t>(k)));
  return items;
}

/// Random scored tables with unique ids; scores come from a coarse grid so
/// exact ties are common.
inline std::vector<ScoredTable> random_scored_tables(std::mt19937_64& rng, int max_n) {
  std::uniform_int_distribution<int> n_d(0, max_n), grid(0, 6), page(0, 3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  const int n = n_d(rng);
  std::vector<ScoredTable> items;
  for (int i = 0; i < n; ++i) {
    const double score = grid(rng) < 4 ? grid(rng) * 0.5 : u(rng);
    items.push_back({"t" + std::to_string(i), page(rng), score});
  }
  return items;
}

/// One triplet per table with a random subset of the Text/List blocks as
/// related paragraphs. Roughly a quarter of the tables get none.
inline std::vector<AnnotationTriplet> random_triplets(const Document& doc, std::mt19937_64& rng,
                                                      const std::string& annotator = "a1") {
  std::vector<const Block*> texts;
  for (const auto& page : doc.pages) {
    for (const auto& b : page.blocks) {
      if (b.kind == BlockType::Text || b.kind == BlockType::List) texts.push_back(&b);
    }
  }
  std::uniform_int_distribution<int> coin(0, 3);
  std::uniform_real_distribution<double> density(0.0, 0.9);
  std::vector<AnnotationTriplet> out;
  for (const auto& page : doc.pages) {
    for (const auto& b : page.blocks) {
      if (b.kind != BlockType::Table) continue;
      AnnotationTriplet t{doc.doc_id, b.block_id, b.page_id, {}, annotator};
      if (coin(rng) != 0) {
        const double d = density(rng);
        std::bernoulli_distribution keep(d);
        for (const auto* s : texts) {
          if (keep(rng)) t.related_paragraphs.insert(s->block_id);
        }
      }
      out.push_back(std::move(t));
    }
  }
  return out;
}

}  // namespace tablescope::testing
