#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tablescope/evaluation.hpp"

namespace tablescope::testing {

/// Known pair-level confusion counts with their expected percentages.
struct ReferencePrf {
  std::string scheme;
  ConfusionCounts counts;
  double precision;
  double recall;
  double f1;
};

inline const std::vector<ReferencePrf>& reference_prf() {
  static const std::vector<ReferencePrf> rows{
      {"GPT-4o", {168, 19, 450, 338}, 89.84, 33.20, 48.48},
      {"Gemini", {373, 59, 410, 133}, 86.34, 73.72, 79.53},
      {"Claude", {316, 31, 438, 190}, 91.07, 62.45, 74.09},
      {"BERT", {426, 35, 434, 80}, 92.41, 84.19, 88.11},
      {"BART", {444, 50, 419, 62}, 89.88, 87.75, 88.80},
      {"RoBERTa", {455, 50, 419, 51}, 90.10, 89.92, 90.01},
  };
  return rows;
}

/// Known document-level rows over 193 test documents.
inline const std::vector<std::pair<std::string, DocLevelResult>>& reference_doc_level() {
  static const std::vector<std::pair<std::string, DocLevelResult>> rows{
      {"GPT-4o", {109, 119, 183, 193}},
      {"Gemini", {113, 147, 159, 193}},
      {"Claude", {114, 137, 170, 193}},
      {"TableScope", {128, 166, 155, 193}},
  };
  return rows;
}

/// Known retrieval hits out of 53 queries at K = 1, 2, 3.
inline constexpr std::uint64_t kRecallQueries = 53;
inline constexpr std::uint64_t kRecallHits[] = {38, 45, 47};
inline constexpr double kRecallPercent[] = {71.70, 84.91, 88.68};

}  // namespace tablescope::testing
