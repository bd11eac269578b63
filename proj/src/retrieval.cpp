#include "tablescope/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "tablescope/error.hpp"

namespace tablescope {
namespace {

bool is_blank(std::string_view s) {
  return s.find_first_not_of(" \t\r\n\f\v") == std::string_view::npos;
}

}  // namespace

bool ranks_before(const ScoredTable& a, const ScoredTable& b) {
  if (a.score != b.score) return a.score > b.score;
  if (a.page_id != b.page_id) return a.page_id < b.page_id;
  return a.table_block_id < b.table_block_id;
}

std::vector<double> score_query_tables(const Document& doc, const Query& q,
                                       std::span<const Block* const> tables, QueryScorer& scorer,
                                       const ParsedDocument* related_from) {
  if (is_blank(q.text)) throw EmptyQueryError("query '" + q.query_id + "' has no text");
  if (tables.empty()) return {};

  std::vector<std::string> inputs;
  inputs.reserve(tables.size());
  for (const Block* t : tables) {
    std::string input = t->text;
    if (related_from) {
      if (const auto* entry = related_from->find(t->block_id)) {
        for (const auto& id : entry->related) {
          if (const Block* s = doc.find_block(id)) input += "\n" + s->text;
        }
      }
    }
    inputs.push_back(std::move(input));
  }

  auto scores = scorer.score_query(doc, q.text, inputs);
  if (scores.size() != tables.size()) {
    throw ProtocolError("query scorer returned " + std::to_string(scores.size()) +
                        " scores for " + std::to_string(tables.size()) + " tables");
  }
  for (double s : scores) {
    if (!std::isfinite(s)) throw ProtocolError("query scorer produced a non-finite score");
  }
  return scores;
}

RetrievalRanking top_k(std::vector<ScoredTable> scored, int k, std::string query_id) {
  if (k <= 0) throw InvalidK("K must be positive, got " + std::to_string(k));
  const auto keep = std::min<std::size_t>(static_cast<std::size_t>(k), scored.size());
  std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(keep),
                    scored.end(), ranks_before);
  RetrievalRanking ranking;
  ranking.query_id = std::move(query_id);
  ranking.k = k;
  ranking.ranked.reserve(keep);
  for (std::size_t i = 0; i < keep; ++i) {
    ranking.ranked.push_back({std::move(scored[i].table_block_id), scored[i].page_id,
                              scored[i].score, {}});
  }
  return ranking;
}

RetrievalRanking retrieve(const ParsedDocument& parsed, const Document& doc, const Query& q, int k,
                          QueryScorer& scorer, const RetrievalOptions& opts) {
  if (parsed.doc_id != doc.doc_id) {
    throw MismatchError("parse result is for '" + parsed.doc_id + "', document is '" +
                        doc.doc_id + "'");
  }
  if (k <= 0) throw InvalidK("K must be positive, got " + std::to_string(k));
  const auto tables = select_blocks(doc, kTableKinds);
  const auto scores =
      score_query_tables(doc, q, tables, scorer, opts.append_related_text ? &parsed : nullptr);

  std::vector<ScoredTable> scored;
  scored.reserve(tables.size());
  for (std::size_t i = 0; i < tables.size(); ++i) {
    scored.push_back({tables[i]->block_id, tables[i]->page_id, scores[i]});
  }
  auto ranking = top_k(std::move(scored), k, q.query_id);
  for (auto& item : ranking.ranked) {
    if (const auto* entry = parsed.find(item.table_block_id)) item.related_text = entry->related;
  }
  return ranking;
}

json ranking_to_json(const RetrievalRanking& ranking) {
  json ranked = json::array();
  for (const auto& r : ranking.ranked) {
    ranked.push_back({{"table_block_id", r.table_block_id},
                      {"page_id", r.page_id},
                      {"score", r.score},
                      {"related_text", r.related_text}});
  }
  return {{"query_id", ranking.query_id}, {"k", ranking.k}, {"ranked", std::move(ranked)}};
}

RetrievalRanking ranking_from_json(const json& j) {
  try {
    RetrievalRanking ranking;
    ranking.query_id = j.at("query_id").get<std::string>();
    ranking.k = j.at("k").get<int>();
    for (const auto& jr : j.at("ranked")) {
      RankedTable r;
      r.table_block_id = jr.at("table_block_id").get<std::string>();
      r.page_id = jr.value("page_id", 0);
      r.score = jr.value("score", 0.0);
      if (jr.contains("related_text")) {
        r.related_text = jr.at("related_text").get<std::vector<std::string>>();
      }
      ranking.ranked.push_back(std::move(r));
    }
    return ranking;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("ranking: ") + e.what());
  }
}

json query_to_json(const Query& q) {
  return {{"query_id", q.query_id},
          {"text", q.text},
          {"gold_table_id", q.gold_table_id ? json(*q.gold_table_id) : json(nullptr)},
          {"doc_id", q.doc_id ? json(*q.doc_id) : json(nullptr)}};
}

Query query_from_json(const json& j) {
  try {
    Query q;
    q.query_id = j.at("query_id").get<std::string>();
    q.text = j.at("text").get<std::string>();
    if (j.contains("gold_table_id") && !j["gold_table_id"].is_null()) {
      q.gold_table_id = j["gold_table_id"].get<std::string>();
    }
    if (j.contains("doc_id") && !j["doc_id"].is_null()) q.doc_id = j["doc_id"].get<std::string>();
    return q;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("query: ") + e.what());
  }
}

std::vector<Query> read_queries_jsonl(std::string_view text) {
  std::vector<Query> queries;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (is_blank(line)) continue;
    queries.push_back(query_from_json(parse_json(line, "query line")));
  }
  return queries;
}

}  // namespace tablescope
