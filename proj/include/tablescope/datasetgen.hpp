#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "tablescope/core_model.hpp"

namespace tablescope {

/// <Table-ID, Page-ID, (Related Paragraphs)> from one annotator.
struct AnnotationTriplet {
  std::string doc_id;
  std::string table_id;
  int page_id = 0;
  std::set<std::string> related_paragraphs;
  std::string annotator_id;

  bool operator==(const AnnotationTriplet&) const = default;
};

inline constexpr std::string_view kConsensusAnnotator = "consensus";

struct ConflictRecord {
  std::string table_id;
  std::string text_block_id;
  std::map<std::string, int> labels;  // annotator_id -> 0/1
  std::optional<int> resolution;
  std::string resolver_note;

  bool operator==(const ConflictRecord&) const = default;
};

struct MergeResult {
  std::vector<AnnotationTriplet> consensus;  // one per table, sorted by table_id
  std::vector<ConflictRecord> conflicts;     // sorted by (table_id, text_block_id)
};

/// Splits two annotators' triplets into unanimous decisions and conflicts.
/// A paragraph listed by one annotator and omitted by the other is a
/// conflict. Throws DocumentMismatchError when the sets reference different
/// documents.
MergeResult merge_annotations(const std::vector<AnnotationTriplet>& a1,
                              const std::vector<AnnotationTriplet>& a2);

/// Folds resolved conflicts into the consensus. Throws ValidationError if any
/// conflict is still unresolved.
std::vector<AnnotationTriplet> apply_resolutions(const MergeResult& merged);

/// Throws ValidationError when a triplet names an unknown table, the wrong
/// page, or a paragraph that is not a Text/List block of `doc`.
void validate_triplets(const Document& doc, const std::vector<AnnotationTriplet>& triplets);

struct CompletenessWarning {
  std::string table_id;
  int page_id = 0;
  std::string message;

  bool operator==(const CompletenessWarning&) const = default;
};

/// One warning per Table block without any related paragraph.
std::vector<CompletenessWarning> completeness_check(const Document& doc,
                                                    const std::vector<AnnotationTriplet>& triplets);

struct TrainingSample {
  std::string doc_id;
  std::string table_block_id;
  std::string text_block_id;
  int label = 0;
  std::string table_text;
  std::string text_text;

  bool operator==(const TrainingSample&) const = default;
};

/// Per table: every related paragraph as a positive, plus
/// min(#positives, #unrelated candidates) negatives drawn uniformly without
/// replacement from the document's other Text/List blocks.
std::vector<TrainingSample> build_training_pairs(const Document& doc,
                                                 const std::vector<AnnotationTriplet>& triplets,
                                                 std::uint64_t seed);

enum class SplitMode { Pair, Document };

struct TrainTestSplit {
  std::vector<TrainingSample> train;
  std::vector<TrainingSample> test;
};

/// Seeded shuffle then prefix split with |train| = floor(n * r1 / (r1 + r2)).
/// Document mode keeps each doc_id on one side: documents are shuffled and
/// taken whole while the running count stays within the train target.
TrainTestSplit split_train_test(const std::vector<TrainingSample>& samples,
                                std::pair<int, int> ratio, std::uint64_t seed,
                                SplitMode mode = SplitMode::Pair);

json triplet_to_json(const AnnotationTriplet& t);
AnnotationTriplet triplet_from_json(const json& j);
json sample_to_json(const TrainingSample& s);
TrainingSample sample_from_json(const json& j);
json conflict_to_json(const ConflictRecord& c);

/// Reads one JSON object per non-blank line.
std::vector<json> read_jsonl(std::string_view text, std::string_view what);
/// Canonical JSON, one object per LF-terminated line.
std::string write_jsonl(const std::vector<json>& rows);

}  // namespace tablescope
