#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tablescope/core_model.hpp"

namespace tablescope {

enum class ScorerKind { Heuristic, Remote, LlmBaseline };

std::string_view to_string(ScorerKind kind);
/// Accepts "heuristic", "remote", "llm-prompt".
std::optional<ScorerKind> scorer_kind_from_string(std::string_view name);

struct ScorerConfig {
  double theta = 0.5;
  ScorerKind scorer_kind = ScorerKind::Heuristic;
  /// Scale applied to lexical similarity so it stays strictly below a
  /// number match.
  double lexical_weight = 0.9;
  std::string remote_endpoint;
  std::size_t batch_size = 32;
  std::size_t max_in_flight = 4;
  std::chrono::milliseconds timeout{30000};

  /// Throws ConfigError on out-of-range fields.
  void validate() const;
};

/// Thresholded association decision: related iff p >= theta.
int decide(double p, const ScorerConfig& cfg);

struct ScoredPair {
  std::string table_block_id;
  std::string text_block_id;
  double score = 0;
  int label = 0;
};

ScoredPair make_scored_pair(const Block& table, const Block& text, double score,
                            const ScorerConfig& cfg);

// --- Number matching -------------------------------------------------------

struct TableNumberRefs {
  std::set<int> numbers;

  bool contains(int n) const { return numbers.contains(n); }
  bool operator==(const TableNumberRefs&) const = default;
};

/// Integers n such that the text contains "Table <n>" or "Tab. <n>"
/// (case-insensitive). n is arabic 1-999 or a roman numeral I-XX.
TableNumberRefs extract_table_numbers(std::string_view text);

/// The first numbered reference in the text, in reading order.
std::optional<int> first_table_number(std::string_view text);

// --- Lexical similarity ----------------------------------------------------

/// Lowercased runs of ASCII letters and digits; every other byte separates.
std::vector<std::string> tokenize(std::string_view text);

/// Document frequencies with each block of one document treated as a
/// separate "document".
class DocumentVocabulary {
 public:
  DocumentVocabulary() = default;
  static DocumentVocabulary from_document(const Document& doc);
  static DocumentVocabulary from_texts(std::span<const std::string> texts);

  std::size_t n_docs() const { return n_docs_; }
  std::size_t document_frequency(const std::string& term) const;
  /// ln(1 + N / (1 + df))
  double idf(const std::string& term) const;

 private:
  std::size_t n_docs_ = 0;
  std::unordered_map<std::string, std::size_t> df_;
};

/// TF-IDF cosine of two texts under `vocab`, clamped to [0, 1]. Zero when
/// either side has no tokens.
double lexical_score(std::string_view a, std::string_view b, const DocumentVocabulary& vocab);
double lexical_score(const Block& table, const Block& text, const DocumentVocabulary& vocab);

/// 1.0 on an explicit number match, otherwise lexical_weight * lexical_score.
double heuristic_score(const Block& table, std::optional<int> table_number, const Block& text,
                       const DocumentVocabulary& vocab, const ScorerConfig& cfg);

// --- Scorer interfaces -----------------------------------------------------

struct PairRef {
  const Block* table = nullptr;
  const Block* text = nullptr;
};

/// Produces p in [0, 1] for (table, text) pairs. Implementations must be
/// safe to call concurrently.
class PairScorer {
 public:
  virtual ~PairScorer() = default;
  virtual std::vector<double> score_pairs(const Document& doc, std::span<const PairRef> pairs) = 0;
};

/// Produces one real-valued relevance score per table input for a query.
class QueryScorer {
 public:
  virtual ~QueryScorer() = default;
  virtual std::vector<double> score_query(const Document& doc, std::string_view query,
                                          std::span<const std::string> table_inputs) = 0;
};

/// Number matching plus weighted TF-IDF cosine. Needs no model.
class HeuristicScorer final : public PairScorer, public QueryScorer {
 public:
  explicit HeuristicScorer(ScorerConfig cfg);

  std::vector<double> score_pairs(const Document& doc, std::span<const PairRef> pairs) override;
  /// Plain lexical_score(query, table input) under the document vocabulary.
  std::vector<double> score_query(const Document& doc, std::string_view query,
                                  std::span<const std::string> table_inputs) override;

 private:
  ScorerConfig cfg_;
};

}  // namespace tablescope
