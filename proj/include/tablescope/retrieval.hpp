#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tablescope/parser.hpp"

namespace tablescope {

struct Query {
  std::string query_id;
  std::string text;
  std::optional<std::string> gold_table_id;
  std::optional<std::string> doc_id;

  bool operator==(const Query&) const = default;
};

struct ScoredTable {
  std::string table_block_id;
  int page_id = 0;
  double score = 0;
};

struct RankedTable {
  std::string table_block_id;
  int page_id = 0;
  double score = 0;
  std::vector<std::string> related_text;

  bool operator==(const RankedTable&) const = default;
};

struct RetrievalRanking {
  std::string query_id;
  std::vector<RankedTable> ranked;
  int k = 0;

  bool operator==(const RetrievalRanking&) const = default;
};

struct RetrievalOptions {
  /// Feed "table text + related text" to the scorer instead of the table text
  /// alone. Experimental; off by default.
  bool append_related_text = false;
};

/// Orders by score descending, then page_id ascending, then block_id.
bool ranks_before(const ScoredTable& a, const ScoredTable& b);

/// One score per table, aligned with `tables`. Throws EmptyQueryError on a
/// blank query and ProtocolError on non-finite scores.
std::vector<double> score_query_tables(const Document& doc, const Query& q,
                                       std::span<const Block* const> tables, QueryScorer& scorer,
                                       const ParsedDocument* related_from = nullptr);

/// The min(k, N) best tables; output is independent of input order.
/// Throws InvalidK when k <= 0.
RetrievalRanking top_k(std::vector<ScoredTable> scored, int k, std::string query_id = {});

/// Scores the query against every table of `doc` and returns the top k, each
/// carrying its related text from `parsed`. Throws MismatchError when
/// `parsed` was produced for a different document.
RetrievalRanking retrieve(const ParsedDocument& parsed, const Document& doc, const Query& q, int k,
                          QueryScorer& scorer, const RetrievalOptions& opts = {});

json ranking_to_json(const RetrievalRanking& ranking);
RetrievalRanking ranking_from_json(const json& j);

json query_to_json(const Query& q);
Query query_from_json(const json& j);
/// One query object per non-blank line.
std::vector<Query> read_queries_jsonl(std::string_view text);

}  // namespace tablescope
