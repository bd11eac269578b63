#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tablescope/association.hpp"

namespace tablescope {

/// One table anchor and the text blocks judged to describe it.
struct ParseEntry {
  std::string table_block_id;
  int page_id = 0;
  std::vector<std::string> related;  // candidate order: (page_id, block_id)
  std::map<std::string, double> scores;

  bool operator==(const ParseEntry&) const = default;
};

struct ParsedDocument {
  std::string doc_id;
  std::vector<ParseEntry> entries;  // table order: (page_id, block_id)

  bool operator==(const ParsedDocument&) const = default;

  const ParseEntry* find(std::string_view table_block_id) const;
};

struct ParseOptions {
  /// Worker threads for per-table scoring; output is identical for any value.
  std::size_t jobs = 1;
  /// When set, only text blocks within this many pages of the table are
  /// candidates. Off by default: the whole document is searched.
  std::optional<int> page_window;
};

/// All (table, text) candidate pairs, grouped by table in anchor order.
std::vector<PairRef> candidate_pairs(const Document& doc, const ParseOptions& opts = {});

/// Scores every table against every candidate text block once and keeps the
/// pairs with p >= theta. All-or-nothing: a scorer failure propagates and no
/// partial result is returned.
ParsedDocument parse_semantics(const Document& doc, PairScorer& scorer, const ScorerConfig& cfg,
                               const ParseOptions& opts = {});

/// Related ids of `entry` re-thresholded at `theta`, in key order.
std::vector<std::string> rethreshold(const ParseEntry& entry, double theta);

json parse_to_json(const ParsedDocument& parsed);
ParsedDocument parse_from_json(const json& j);

/// Canonical JSON with trailing LF.
std::string export_parse(const ParsedDocument& parsed);
ParsedDocument import_parse(std::string_view raw);

}  // namespace tablescope
