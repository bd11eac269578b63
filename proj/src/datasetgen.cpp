#include "tablescope/datasetgen.hpp"

#include <algorithm>
#include <sstream>

#include "tablescope/error.hpp"
#include "tablescope/rng.hpp"

namespace tablescope {
namespace {

struct TableAnnotation {
  int page_id = 0;
  std::set<std::string> related;
};

// Collapses one annotator's triplets to table_id -> annotation.
std::map<std::string, TableAnnotation> by_table(const std::vector<AnnotationTriplet>& triplets) {
  std::map<std::string, TableAnnotation> out;
  for (const auto& t : triplets) {
    auto [it, inserted] = out.try_emplace(t.table_id, TableAnnotation{t.page_id, {}});
    if (!inserted && it->second.page_id != t.page_id) {
      throw ValidationError("table '" + t.table_id + "' annotated on two different pages");
    }
    it->second.related.insert(t.related_paragraphs.begin(), t.related_paragraphs.end());
  }
  return out;
}

std::string annotator_of(const std::vector<AnnotationTriplet>& triplets, std::string fallback) {
  return triplets.empty() ? std::move(fallback) : triplets.front().annotator_id;
}

std::optional<std::string> doc_of(const std::vector<AnnotationTriplet>& triplets) {
  std::optional<std::string> doc;
  for (const auto& t : triplets) {
    if (doc && *doc != t.doc_id) {
      throw DocumentMismatchError("annotation set spans documents '" + *doc + "' and '" +
                                  t.doc_id + "'");
    }
    doc = t.doc_id;
  }
  return doc;
}

}  // namespace

MergeResult merge_annotations(const std::vector<AnnotationTriplet>& a1,
                              const std::vector<AnnotationTriplet>& a2) {
  const auto doc1 = doc_of(a1);
  const auto doc2 = doc_of(a2);
  if (doc1 && doc2 && *doc1 != *doc2) {
    throw DocumentMismatchError("annotators labeled different documents: '" + *doc1 + "' vs '" +
                                *doc2 + "'");
  }
  const std::string doc_id = doc1 ? *doc1 : doc2.value_or("");
  const auto name1 = annotator_of(a1, "annotator-1");
  auto name2 = annotator_of(a2, "annotator-2");
  if (name2 == name1) name2 += "#2";

  const auto t1 = by_table(a1);
  const auto t2 = by_table(a2);
  std::set<std::string> table_ids;
  for (const auto& [id, _] : t1) table_ids.insert(id);
  for (const auto& [id, _] : t2) table_ids.insert(id);

  MergeResult result;
  for (const auto& table_id : table_ids) {
    const auto it1 = t1.find(table_id);
    const auto it2 = t2.find(table_id);
    static const TableAnnotation kNone;
    const auto& ann1 = it1 != t1.end() ? it1->second : kNone;
    const auto& ann2 = it2 != t2.end() ? it2->second : kNone;
    if (it1 != t1.end() && it2 != t2.end() && ann1.page_id != ann2.page_id) {
      throw DocumentMismatchError("annotators disagree on the page of table '" + table_id + "'");
    }

    AnnotationTriplet consensus;
    consensus.doc_id = doc_id;
    consensus.table_id = table_id;
    consensus.page_id = it1 != t1.end() ? ann1.page_id : ann2.page_id;
    consensus.annotator_id = std::string(kConsensusAnnotator);
    std::set_intersection(ann1.related.begin(), ann1.related.end(), ann2.related.begin(),
                          ann2.related.end(),
                          std::inserter(consensus.related_paragraphs,
                                        consensus.related_paragraphs.end()));
    result.consensus.push_back(std::move(consensus));

    std::vector<std::string> disputed;
    std::set_symmetric_difference(ann1.related.begin(), ann1.related.end(), ann2.related.begin(),
                                  ann2.related.end(), std::back_inserter(disputed));
    for (auto& text_id : disputed) {
      ConflictRecord c;
      c.table_id = table_id;
      c.labels[name1] = ann1.related.contains(text_id) ? 1 : 0;
      c.labels[name2] = ann2.related.contains(text_id) ? 1 : 0;
      c.text_block_id = std::move(text_id);
      result.conflicts.push_back(std::move(c));
    }
  }
  return result;
}

std::vector<AnnotationTriplet> apply_resolutions(const MergeResult& merged) {
  auto final_set = merged.consensus;
  for (const auto& c : merged.conflicts) {
    if (!c.resolution) {
      throw ValidationError("conflict (" + c.table_id + ", " + c.text_block_id +
                            ") is unresolved");
    }
    if (*c.resolution != 1) continue;
    auto it = std::find_if(final_set.begin(), final_set.end(),
                           [&](const AnnotationTriplet& t) { return t.table_id == c.table_id; });
    if (it != final_set.end()) it->related_paragraphs.insert(c.text_block_id);
  }
  return final_set;
}

void validate_triplets(const Document& doc, const std::vector<AnnotationTriplet>& triplets) {
  for (const auto& t : triplets) {
    if (t.doc_id != doc.doc_id) {
      throw DocumentMismatchError("triplet for '" + t.doc_id + "' applied to '" + doc.doc_id + "'");
    }
    const Block* table = doc.find_block(t.table_id);
    if (!table || table->kind != BlockType::Table) {
      throw ValidationError("'" + t.table_id + "' is not a Table block of '" + doc.doc_id + "'");
    }
    if (table->page_id != t.page_id) {
      throw ValidationError("table '" + t.table_id + "' is on page " +
                            std::to_string(table->page_id) + ", triplet says " +
                            std::to_string(t.page_id));
    }
    for (const auto& p : t.related_paragraphs) {
      const Block* block = doc.find_block(p);
      if (!block || !kTextKinds.contains(block->kind)) {
        throw ValidationError("related paragraph '" + p + "' is not a Text/List block");
      }
    }
  }
}

std::vector<CompletenessWarning> completeness_check(
    const Document& doc, const std::vector<AnnotationTriplet>& triplets) {
  std::set<std::string> covered;
  for (const auto& t : triplets) {
    if (!t.related_paragraphs.empty()) covered.insert(t.table_id);
  }
  std::vector<CompletenessWarning> warnings;
  for (const Block* table : select_blocks(doc, kTableKinds)) {
    if (covered.contains(table->block_id)) continue;
    warnings.push_back({table->block_id, table->page_id,
                        "table '" + table->block_id + "' on page " +
                            std::to_string(table->page_id) +
                            " has no associated text block; confirm oversight or genuine "
                            "absence of a textual reference"});
  }
  return warnings;
}

std::vector<TrainingSample> build_training_pairs(const Document& doc,
                                                 const std::vector<AnnotationTriplet>& triplets,
                                                 std::uint64_t seed) {
  validate_triplets(doc, triplets);
  const auto annotations = by_table(triplets);
  const auto texts = select_blocks(doc, kTextKinds);
  SeededRng rng(seed);

  std::vector<TrainingSample> samples;
  auto emit = [&](const Block& table, const Block& text, int label) {
    samples.push_back({doc.doc_id, table.block_id, text.block_id, label, table.text, text.text});
  };

  for (const Block* table : select_blocks(doc, kTableKinds)) {
    const auto it = annotations.find(table->block_id);
    if (it == annotations.end() || it->second.related.empty()) continue;
    const auto& related = it->second.related;

    std::vector<const Block*> positives;
    std::vector<std::size_t> unrelated;  // indices into `texts`, candidate order
    for (std::size_t i = 0; i < texts.size(); ++i) {
      if (related.contains(texts[i]->block_id)) {
        positives.push_back(texts[i]);
      } else {
        unrelated.push_back(i);
      }
    }
    auto negatives = rng.sample(unrelated, positives.size());
    std::sort(negatives.begin(), negatives.end());

    for (const Block* p : positives) emit(*table, *p, 1);
    for (auto idx : negatives) emit(*table, *texts[idx], 0);
  }
  return samples;
}

TrainTestSplit split_train_test(const std::vector<TrainingSample>& samples,
                                std::pair<int, int> ratio, std::uint64_t seed, SplitMode mode) {
  if (ratio.first <= 0 || ratio.second <= 0) {
    throw ConfigError("split ratio components must be positive");
  }
  const auto n = static_cast<std::uint64_t>(samples.size());
  const auto r1 = static_cast<std::uint64_t>(ratio.first);
  const auto r2 = static_cast<std::uint64_t>(ratio.second);
  const std::size_t target = static_cast<std::size_t>(n * r1 / (r1 + r2));
  SeededRng rng(seed);
  TrainTestSplit split;

  if (mode == SplitMode::Pair) {
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    rng.shuffle(order);
    for (std::size_t i = 0; i < order.size(); ++i) {
      (i < target ? split.train : split.test).push_back(samples[order[i]]);
    }
    return split;
  }

  std::vector<std::string> doc_order;
  std::map<std::string, std::vector<std::size_t>> members;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto& list = members[samples[i].doc_id];
    if (list.empty()) doc_order.push_back(samples[i].doc_id);
    list.push_back(i);
  }
  rng.shuffle(doc_order);
  for (const auto& doc_id : doc_order) {
    const auto& idx = members[doc_id];
    auto& side = split.train.size() + idx.size() <= target ? split.train : split.test;
    for (auto i : idx) side.push_back(samples[i]);
  }
  return split;
}

json triplet_to_json(const AnnotationTriplet& t) {
  return {{"doc_id", t.doc_id},
          {"table_id", t.table_id},
          {"page_id", t.page_id},
          {"related_paragraphs", t.related_paragraphs},
          {"annotator_id", t.annotator_id}};
}

AnnotationTriplet triplet_from_json(const json& j) {
  try {
    AnnotationTriplet t;
    t.doc_id = j.at("doc_id").get<std::string>();
    t.table_id = j.at("table_id").get<std::string>();
    t.page_id = j.at("page_id").get<int>();
    const auto related = j.at("related_paragraphs").get<std::vector<std::string>>();
    t.related_paragraphs.insert(related.begin(), related.end());
    t.annotator_id = j.at("annotator_id").get<std::string>();
    return t;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("triplet: ") + e.what());
  }
}

json sample_to_json(const TrainingSample& s) {
  return {{"doc_id", s.doc_id},         {"table_block_id", s.table_block_id},
          {"text_block_id", s.text_block_id}, {"label", s.label},
          {"table_text", s.table_text}, {"text_text", s.text_text}};
}

TrainingSample sample_from_json(const json& j) {
  try {
    TrainingSample s;
    s.doc_id = j.at("doc_id").get<std::string>();
    s.table_block_id = j.at("table_block_id").get<std::string>();
    s.text_block_id = j.at("text_block_id").get<std::string>();
    s.label = j.at("label").get<int>();
    if (s.label != 0 && s.label != 1) throw SchemaError("sample label must be 0 or 1");
    s.table_text = j.value("table_text", "");
    s.text_text = j.value("text_text", "");
    return s;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("training sample: ") + e.what());
  }
}

json conflict_to_json(const ConflictRecord& c) {
  return {{"table_id", c.table_id},
          {"text_block_id", c.text_block_id},
          {"labels", c.labels},
          {"resolution", c.resolution ? json(*c.resolution) : json(nullptr)},
          {"resolver_note", c.resolver_note}};
}

std::vector<json> read_jsonl(std::string_view text, std::string_view what) {
  std::vector<json> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(parse_json(line, std::string(what) + " line " + std::to_string(line_no)));
  }
  return rows;
}

std::string write_jsonl(const std::vector<json>& rows) {
  std::string out;
  for (const auto& row : rows) {
    out += canonical_dump(row);
    out += '\n';
  }
  return out;
}

}  // namespace tablescope
