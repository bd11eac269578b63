#include "tablescope/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "tablescope/error.hpp"

namespace tablescope {
namespace {

constexpr std::string_view kTypeNames[] = {"Text", "List", "Table", "Title", "Figure"};

void require_keys(const json& obj, std::initializer_list<std::string_view> keys,
                  std::string_view where) {
  if (!obj.is_object()) throw SchemaError(std::string(where) + ": expected an object");
  for (auto key : keys) {
    if (!obj.contains(key)) {
      throw SchemaError(std::string(where) + ": missing field '" + std::string(key) + "'");
    }
  }
  for (const auto& [key, _] : obj.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw SchemaError(std::string(where) + ": unexpected field '" + key + "'");
    }
  }
}

std::string get_string(const json& obj, const char* key, std::string_view where) {
  const auto& v = obj.at(key);
  if (!v.is_string()) {
    throw SchemaError(std::string(where) + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

double get_number(const json& v, std::string_view where) {
  if (!v.is_number()) throw SchemaError(std::string(where) + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw SchemaError(std::string(where) + ": number must be finite");
  return x;
}

int get_page_id(const json& v, std::string_view where) {
  if (!v.is_number_integer()) throw SchemaError(std::string(where) + ": page_id must be an integer");
  const auto id = v.get<std::int64_t>();
  if (id < 0 || id > INT32_MAX) {
    throw SchemaError(std::string(where) + ": page_id out of range");
  }
  return static_cast<int>(id);
}

bool block_less(const Block& a, const Block& b) { return a.block_id < b.block_id; }

}  // namespace

std::string_view to_string(BlockType kind) { return kTypeNames[static_cast<int>(kind)]; }

std::optional<BlockType> block_type_from_string(std::string_view name) {
  for (auto kind : kAllBlockTypes) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

const Block* Document::find_block(std::string_view block_id) const {
  for (const auto& page : pages) {
    for (const auto& block : page.blocks) {
      if (block.block_id == block_id) return &block;
    }
  }
  return nullptr;
}

std::size_t Document::block_count() const {
  std::size_t n = 0;
  for (const auto& page : pages) n += page.blocks.size();
  return n;
}

Document validated(Document doc) {
  std::sort(doc.pages.begin(), doc.pages.end(),
            [](const Page& a, const Page& b) { return a.page_id < b.page_id; });
  std::unordered_set<std::string> seen_ids;
  for (std::size_t i = 0; i < doc.pages.size(); ++i) {
    auto& page = doc.pages[i];
    if (page.page_id != static_cast<int>(i)) {
      throw SchemaError("page ids must be contiguous from 0; expected " + std::to_string(i) +
                        ", found " + std::to_string(page.page_id));
    }
    if (!(page.width_px > 0) || !(page.height_px > 0) || !std::isfinite(page.width_px) ||
        !std::isfinite(page.height_px)) {
      throw GeometryError("page " + std::to_string(i) + " must have positive finite size");
    }
    for (auto& block : page.blocks) {
      block.page_id = page.page_id;
      if (block.block_id.empty()) throw SchemaError("block_id must be non-empty");
      if (!seen_ids.insert(block.block_id).second) {
        throw DuplicateIdError("duplicate block_id '" + block.block_id + "'");
      }
      const auto& b = block.bbox;
      const std::string where = "block '" + block.block_id + "'";
      for (double c : {b.x0, b.y0, b.x1, b.y1}) {
        if (!std::isfinite(c)) throw GeometryError(where + ": non-finite coordinate");
        if (c < 0) throw GeometryError(where + ": negative coordinate");
      }
      if (b.x0 > b.x1 || b.y0 > b.y1) throw GeometryError(where + ": inverted bbox");
      if (b.x1 > page.width_px || b.y1 > page.height_px) {
        throw GeometryError(where + ": bbox exceeds page bounds");
      }
      if (block.kind == BlockType::Figure && !block.text.empty()) {
        throw SchemaError(where + ": Figure blocks carry no text");
      }
    }
    std::sort(page.blocks.begin(), page.blocks.end(), block_less);
  }
  return doc;
}

Document document_from_json(const json& j) {
  require_keys(j, {"doc_id", "source", "pages"}, "document");
  Document doc;
  doc.doc_id = get_string(j, "doc_id", "document");
  doc.source = get_string(j, "source", "document");
  if (!j.at("pages").is_array()) throw SchemaError("document: 'pages' must be an array");

  std::set<int> page_ids;
  for (const auto& jp : j.at("pages")) {
    require_keys(jp, {"page_id", "width_px", "height_px", "blocks"}, "page");
    Page page;
    page.page_id = get_page_id(jp.at("page_id"), "page");
    if (!page_ids.insert(page.page_id).second) {
      throw SchemaError("duplicate page_id " + std::to_string(page.page_id));
    }
    page.width_px = get_number(jp.at("width_px"), "page width_px");
    page.height_px = get_number(jp.at("height_px"), "page height_px");
    if (!jp.at("blocks").is_array()) throw SchemaError("page: 'blocks' must be an array");
    for (const auto& jb : jp.at("blocks")) {
      require_keys(jb, {"block_id", "type", "bbox", "text"}, "block");
      Block block;
      block.block_id = get_string(jb, "block_id", "block");
      const auto type_name = get_string(jb, "type", "block");
      const auto kind = block_type_from_string(type_name);
      if (!kind) throw SchemaError("block '" + block.block_id + "': unknown type '" + type_name + "'");
      block.kind = *kind;
      const auto& jbox = jb.at("bbox");
      if (!jbox.is_array() || jbox.size() != 4) {
        throw SchemaError("block '" + block.block_id + "': bbox must be four numbers");
      }
      block.bbox = {get_number(jbox[0], "bbox"), get_number(jbox[1], "bbox"),
                    get_number(jbox[2], "bbox"), get_number(jbox[3], "bbox")};
      block.text = get_string(jb, "text", "block");
      block.page_id = page.page_id;
      page.blocks.push_back(std::move(block));
    }
    doc.pages.push_back(std::move(page));
  }
  return validated(std::move(doc));
}

json document_to_json(const Document& doc) {
  json pages = json::array();
  for (const auto& page : doc.pages) {
    json blocks = json::array();
    for (const auto& block : page.blocks) {
      blocks.push_back({{"block_id", block.block_id},
                        {"type", std::string(to_string(block.kind))},
                        {"bbox", {block.bbox.x0, block.bbox.y0, block.bbox.x1, block.bbox.y1}},
                        {"text", block.text}});
    }
    pages.push_back({{"page_id", page.page_id},
                     {"width_px", page.width_px},
                     {"height_px", page.height_px},
                     {"blocks", std::move(blocks)}});
  }
  return {{"doc_id", doc.doc_id}, {"source", doc.source}, {"pages", std::move(pages)}};
}

Document parse_document_json(std::string_view raw) {
  return document_from_json(parse_json(raw, "document"));
}

std::string canonicalize(const Document& doc) {
  // Sorting is idempotent, so re-normalize defensively for hand-built values.
  Document ordered = doc;
  std::sort(ordered.pages.begin(), ordered.pages.end(),
            [](const Page& a, const Page& b) { return a.page_id < b.page_id; });
  for (auto& page : ordered.pages) {
    std::sort(page.blocks.begin(), page.blocks.end(), block_less);
  }
  return canonical_dump(document_to_json(ordered)) + "\n";
}

std::vector<const Block*> select_blocks(const Document& doc, const KindSet& kinds) {
  std::vector<const Block*> out;
  for (const auto& page : doc.pages) {
    for (const auto& block : page.blocks) {
      if (kinds.contains(block.kind)) out.push_back(&block);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Block* a, const Block* b) {
    if (a->page_id != b->page_id) return a->page_id < b->page_id;
    return a->block_id < b->block_id;
  });
  return out;
}

SourceCounts& SourceCounts::operator+=(const SourceCounts& other) {
  n_pdf += other.n_pdf;
  n_page += other.n_page;
  n_table_block += other.n_table_block;
  n_text_block += other.n_text_block;
  return *this;
}

CorpusStats corpus_stats(const std::vector<Document>& docs) {
  CorpusStats stats;
  for (const auto& doc : docs) {
    SourceCounts counts;
    counts.n_pdf = 1;
    counts.n_page = static_cast<std::int64_t>(doc.pages.size());
    counts.n_table_block = static_cast<std::int64_t>(select_blocks(doc, kTableKinds).size());
    counts.n_text_block = static_cast<std::int64_t>(select_blocks(doc, kTextKinds).size());
    stats.per_source[doc.source] += counts;
    stats.total += counts;
  }
  return stats;
}

json corpus_stats_to_json(const CorpusStats& stats) {
  auto row = [](const SourceCounts& c) {
    return json{{"n_pdf", c.n_pdf},
                {"n_page", c.n_page},
                {"n_table_block", c.n_table_block},
                {"n_text_block", c.n_text_block}};
  };
  json sources = json::object();
  for (const auto& [name, counts] : stats.per_source) sources[name] = row(counts);
  return {{"per_source", std::move(sources)}, {"total", row(stats.total)}};
}

}  // namespace tablescope
