#include "tablescope/parser.hpp"

#include <cmath>
#include <cstdlib>
#include <future>

#include "tablescope/error.hpp"

namespace tablescope {

const ParseEntry* ParsedDocument::find(std::string_view table_block_id) const {
  for (const auto& e : entries) {
    if (e.table_block_id == table_block_id) return &e;
  }
  return nullptr;
}

std::vector<PairRef> candidate_pairs(const Document& doc, const ParseOptions& opts) {
  const auto tables = select_blocks(doc, kTableKinds);
  const auto texts = select_blocks(doc, kTextKinds);
  std::vector<PairRef> pairs;
  pairs.reserve(tables.size() * texts.size());
  for (const Block* t : tables) {
    for (const Block* s : texts) {
      if (opts.page_window && std::abs(t->page_id - s->page_id) > *opts.page_window) continue;
      pairs.push_back({t, s});
    }
  }
  return pairs;
}

ParsedDocument parse_semantics(const Document& doc, PairScorer& scorer, const ScorerConfig& cfg,
                               const ParseOptions& opts) {
  cfg.validate();
  if (opts.page_window && *opts.page_window < 0) throw ConfigError("page window must be >= 0");

  const auto tables = select_blocks(doc, kTableKinds);
  const auto pairs = candidate_pairs(doc, opts);

  // Contiguous pair range per table; pairs are grouped by table.
  std::vector<std::size_t> table_begin(tables.size() + 1, pairs.size());
  {
    std::size_t p = 0;
    for (std::size_t t = 0; t < tables.size(); ++t) {
      table_begin[t] = p;
      while (p < pairs.size() && pairs[p].table == tables[t]) ++p;
    }
  }

  std::vector<double> scores(pairs.size());
  const std::size_t jobs = std::max<std::size_t>(1, std::min(opts.jobs, tables.size()));
  auto score_tables = [&](std::size_t t_begin, std::size_t t_end) {
    const auto begin = table_begin[t_begin];
    const auto end = table_begin[t_end];
    if (begin == end) return;
    std::span<const PairRef> slice(pairs.data() + begin, end - begin);
    const auto out = scorer.score_pairs(doc, slice);
    if (out.size() != slice.size()) {
      throw ProtocolError("scorer returned " + std::to_string(out.size()) + " scores for " +
                          std::to_string(slice.size()) + " pairs");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!(out[i] >= 0.0 && out[i] <= 1.0)) {
        throw ProtocolError("scorer produced a score outside [0, 1]");
      }
      scores[begin + i] = out[i];
    }
  };

  if (jobs <= 1) {
    score_tables(0, tables.size());
  } else {
    std::vector<std::future<void>> workers;
    const std::size_t per_job = (tables.size() + jobs - 1) / jobs;
    for (std::size_t t = 0; t < tables.size(); t += per_job) {
      workers.push_back(std::async(std::launch::async, score_tables, t,
                                   std::min(tables.size(), t + per_job)));
    }
    std::exception_ptr failure;
    for (auto& w : workers) {
      try {
        w.get();
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  ParsedDocument parsed;
  parsed.doc_id = doc.doc_id;
  parsed.entries.reserve(tables.size());
  for (std::size_t t = 0; t < tables.size(); ++t) {
    ParseEntry entry;
    entry.table_block_id = tables[t]->block_id;
    entry.page_id = tables[t]->page_id;
    for (std::size_t i = table_begin[t]; i < table_begin[t + 1]; ++i) {
      const auto& id = pairs[i].text->block_id;
      entry.scores[id] = scores[i];
      if (decide(scores[i], cfg) == 1) entry.related.push_back(id);
    }
    parsed.entries.push_back(std::move(entry));
  }
  return parsed;
}

std::vector<std::string> rethreshold(const ParseEntry& entry, double theta) {
  std::vector<std::string> related;
  for (const auto& [id, p] : entry.scores) {
    if (p >= theta) related.push_back(id);
  }
  return related;
}

json parse_to_json(const ParsedDocument& parsed) {
  json entries = json::array();
  for (const auto& e : parsed.entries) {
    entries.push_back({{"table_block_id", e.table_block_id},
                       {"page_id", e.page_id},
                       {"related", e.related},
                       {"scores", e.scores}});
  }
  return {{"doc_id", parsed.doc_id}, {"entries", std::move(entries)}};
}

ParsedDocument parse_from_json(const json& j) {
  try {
    ParsedDocument parsed;
    parsed.doc_id = j.at("doc_id").get<std::string>();
    for (const auto& je : j.at("entries")) {
      ParseEntry e;
      e.table_block_id = je.at("table_block_id").get<std::string>();
      e.page_id = je.at("page_id").get<int>();
      e.related = je.at("related").get<std::vector<std::string>>();
      for (const auto& [id, p] : je.at("scores").items()) e.scores[id] = p.get<double>();
      parsed.entries.push_back(std::move(e));
    }
    return parsed;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("parse result: ") + e.what());
  }
}

std::string export_parse(const ParsedDocument& parsed) {
  return canonical_dump(parse_to_json(parsed)) + "\n";
}

ParsedDocument import_parse(std::string_view raw) {
  return parse_from_json(parse_json(raw, "parse result"));
}

}  // namespace tablescope
