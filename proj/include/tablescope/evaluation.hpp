#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tablescope/retrieval.hpp"

namespace tablescope {

/// An exact percentage 100 * num / den, kept as a rational so display
/// rounding never compounds. A zero denominator reads as 0.
struct Percentage {
  std::uint64_t num = 0;
  std::uint64_t den = 0;

  double value() const;
  /// Value in hundredths of a percent point, rounded half-up.
  std::int64_t hundredths() const;
  /// Two-decimal display form, e.g. "90.10".
  std::string to_string() const;
};

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  bool operator==(const ConfusionCounts&) const = default;
};

/// Standard 2x2 tally; labels are 0/1. Throws LengthMismatch.
ConfusionCounts confusion(std::span<const int> pred, std::span<const int> gold);

struct PrfResult {
  Percentage precision;
  Percentage recall;
  Percentage f1;
};

/// Precision, recall and F1 in percent; each is 0 when its denominator is.
PrfResult prf(const ConfusionCounts& c);

struct DocLevelResult {
  std::uint64_t all_correct = 0;
  std::uint64_t pos_correct = 0;
  std::uint64_t neg_correct = 0;
  std::uint64_t n_docs = 0;

  bool operator==(const DocLevelResult&) const = default;
};

/// (pred, gold) label pairs per document.
using DocGroups = std::map<std::string, std::vector<std::pair<int, int>>>;

/// Documents fully correct / correct on every gold positive / correct on
/// every gold negative. A document without gold positives counts toward
/// pos_correct vacuously, and likewise for negatives. Throws EmptyGroupError.
DocLevelResult doc_level(const DocGroups& groups);

/// Share of queries whose gold table is among the first k ranked items.
/// Throws MissingGoldError if a ranked query has no gold table, InvalidK if
/// k <= 0.
Percentage recall_at_k(const std::vector<RetrievalRanking>& rankings,
                       const std::map<std::string, std::string>& gold, int k);

struct LatencyReport {
  double mean = 0;
  double median = 0;
  std::vector<double> batch_means;
  std::vector<double> batch_medians;
  /// Indices into the input durations, per batch.
  std::vector<std::vector<std::size_t>> batches;
  std::uint64_t seed = 0;
};

/// Median with the even-length convention (mean of the two central values).
double median(std::vector<double> values);

/// Seeded shuffle, then round-robin assignment into n_batches groups whose
/// sizes differ by at most one. Throws InvalidBatchCount unless
/// 1 <= n_batches <= durations.size().
LatencyReport latency_batches(std::span<const double> durations, int n_batches,
                              std::uint64_t seed);

json prf_to_json(const ConfusionCounts& c);
json doc_level_to_json(const DocLevelResult& r);
json recall_to_json(const std::vector<std::pair<int, Percentage>>& by_k, std::size_t n_queries);
json latency_to_json(const LatencyReport& r);

/// Aligned plain-text tables for terminal output.
std::string prf_table(const std::vector<std::pair<std::string, ConfusionCounts>>& rows);
std::string doc_level_table(const std::vector<std::pair<std::string, DocLevelResult>>& rows);
std::string recall_table(const std::string& scheme,
                         const std::vector<std::pair<int, Percentage>>& by_k);
std::string latency_table(const std::vector<std::pair<std::string, LatencyReport>>& rows);

/// "batch_id,mean_s,median_s" rows for external plotting.
std::string latency_plot_csv(const LatencyReport& r);

}  // namespace tablescope
