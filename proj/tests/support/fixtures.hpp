#pragma once

#include <random>
#include <string>
#include <vector>

#include "tablescope/core_model.hpp"

namespace tablescope::testing {

inline Block make_block(std::string id, BlockType kind, std::string text, int page = 0,
                        BBox bbox = {10, 10, 200, 60}) {
  Block b;
  b.block_id = std::move(id);
  b.page_id = page;
  b.kind = kind;
  b.bbox = bbox;
  b.text = kind == BlockType::Figure ? "" : std::move(text);
  return b;
}

/// Validated document; blocks land on the page named by their page_id.
inline Document make_document(std::string doc_id, const std::vector<Block>& blocks,
                              int n_pages = 1, std::string source = "synthetic") {
  Document doc;
  doc.doc_id = std::move(doc_id);
  doc.source = std::move(source);
  for (int p = 0; p < n_pages; ++p) doc.pages.push_back({p, 1240, 1754, {}});
  for (const auto& b : blocks) doc.pages.at(static_cast<std::size_t>(b.page_id)).blocks.push_back(b);
  return validated(std::move(doc));
}

inline const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> words{
      "accuracy", "baseline", "model",  "dataset", "error",    "rate",   "latency", "precision",
      "recall",   "cohort",   "dose",   "patients", "survival", "trial", "protein", "expression",
      "gene",     "sample",   "method", "results", "improves", "shown",  "mean",    "median"};
  return words;
}

inline std::string random_words(std::mt19937_64& rng, int n) {
  const auto& words = filler_words();
  std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
  std::string out;
  for (int i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += words[pick(rng)];
  }
  return out;
}

/// Random document with up to `max_tables` numbered tables and up to
/// `max_texts` Text/List blocks, plus some Title and Figure noise. Some
/// paragraphs cite tables by number.
inline Document random_document(std::mt19937_64& rng, const std::string& doc_id, int max_tables = 5,
                                int max_texts = 30) {
  std::uniform_int_distribution<int> n_pages_d(1, 4);
  const int n_pages = n_pages_d(rng);
  std::uniform_int_distribution<int> page_d(0, n_pages - 1);
  std::uniform_int_distribution<int> n_tables_d(0, max_tables);
  std::uniform_int_distribution<int> n_texts_d(0, max_texts);
  std::uniform_int_distribution<int> len_d(1, 12);
  std::uniform_int_distribution<int> coin(0, 3);

  std::vector<Block> blocks;
  const int n_tables = n_tables_d(rng);
  for (int t = 0; t < n_tables; ++t) {
    const std::string text = coin(rng) == 0 ? random_words(rng, len_d(rng))
                                            : "Table " + std::to_string(t + 1) + ": " +
                                                  random_words(rng, len_d(rng));
    blocks.push_back(make_block("t" + std::to_string(t), BlockType::Table, text, page_d(rng)));
  }
  const int n_texts = n_texts_d(rng);
  for (int s = 0; s < n_texts; ++s) {
    std::string text = random_words(rng, len_d(rng));
    if (n_tables > 0 && coin(rng) == 0) {
      std::uniform_int_distribution<int> ref(1, n_tables);
      text += " as shown in Table " + std::to_string(ref(rng)) + ".";
    }
    blocks.push_back(make_block("s" + std::to_string(s),
                                coin(rng) == 0 ? BlockType::List : BlockType::Text, text,
                                page_d(rng)));
  }
  blocks.push_back(make_block("title", BlockType::Title, random_words(rng, 3), 0));
  blocks.push_back(make_block("fig", BlockType::Figure, "", page_d(rng)));
  return make_document(doc_id, blocks, n_pages);
}

}  // namespace tablescope::testing
