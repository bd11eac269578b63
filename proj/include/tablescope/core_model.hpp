#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "tablescope/canonical_json.hpp"

namespace tablescope {

/// Layout classes produced by the upstream detector.
enum class BlockType { Text, List, Table, Title, Figure };

inline constexpr BlockType kAllBlockTypes[] = {BlockType::Text, BlockType::List, BlockType::Table,
                                               BlockType::Title, BlockType::Figure};

std::string_view to_string(BlockType kind);
std::optional<BlockType> block_type_from_string(std::string_view name);

using KindSet = std::set<BlockType>;

/// Anchor set: the Table blocks.
inline const KindSet kTableKinds{BlockType::Table};
/// Descriptive-text candidates: Text and List blocks together.
inline const KindSet kTextKinds{BlockType::Text, BlockType::List};

/// Axis-aligned box in rendered-page pixel coordinates.
struct BBox {
  double x0 = 0;
  double y0 = 0;
  double x1 = 0;
  double y1 = 0;

  bool operator==(const BBox&) const = default;
};

struct Block {
  std::string block_id;
  int page_id = 0;
  BlockType kind = BlockType::Text;
  BBox bbox;
  std::string text;

  bool operator==(const Block&) const = default;
};

struct Page {
  int page_id = 0;
  double width_px = 0;
  double height_px = 0;
  std::vector<Block> blocks;

  bool operator==(const Page&) const = default;
};

/// A layout-analyzed document. Instances returned by `validated()` or
/// `parse_document_json()` are in canonical order: pages by page_id, blocks
/// within a page by block_id.
struct Document {
  std::string doc_id;
  std::string source;
  std::vector<Page> pages;

  bool operator==(const Document&) const = default;

  /// Linear lookup; nullptr when absent.
  const Block* find_block(std::string_view block_id) const;
  std::size_t block_count() const;
};

/// Checks every schema and geometry invariant, fills Block::page_id from its
/// page, and returns the document in canonical order.
/// Throws SchemaError, GeometryError or DuplicateIdError.
Document validated(Document doc);

Document document_from_json(const json& j);
json document_to_json(const Document& doc);

/// Parses and validates a document in the block-JSON ingestion format.
Document parse_document_json(std::string_view raw);

/// Canonical bytes: sorted keys, canonical block order, shortest numbers,
/// terminated by a single LF.
std::string canonicalize(const Document& doc);

/// Blocks whose kind is in `kinds`, in (page_id, block_id) order. The pointers
/// borrow from `doc`.
std::vector<const Block*> select_blocks(const Document& doc, const KindSet& kinds);

struct SourceCounts {
  std::int64_t n_pdf = 0;
  std::int64_t n_page = 0;
  std::int64_t n_table_block = 0;
  std::int64_t n_text_block = 0;  // Text + List

  SourceCounts& operator+=(const SourceCounts& other);
  bool operator==(const SourceCounts&) const = default;
};

struct CorpusStats {
  std::map<std::string, SourceCounts> per_source;
  SourceCounts total;

  bool operator==(const CorpusStats&) const = default;
};

CorpusStats corpus_stats(const std::vector<Document>& docs);
json corpus_stats_to_json(const CorpusStats& stats);

}  // namespace tablescope
