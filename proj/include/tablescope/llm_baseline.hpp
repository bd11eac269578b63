#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>

#include "tablescope/association.hpp"

namespace tablescope {

/// The baseline instruction with table and text content substituted.
/// Throws EmptyContentError if either content is blank.
std::string build_llm_prompt(std::string_view table_text, std::string_view text_text);

/// "1" -> true (related), "0" -> false, after trimming whitespace.
/// Anything else throws ParseFailure.
bool parse_llm_reply(std::string_view reply);

/// True when both sides have content, i.e. a prompt can be built.
bool promptable(const Block& table, const Block& text);

/// Replays recorded baseline replies as scores (1.0 related, 0.0 unrelated).
/// Replies are keyed by (table_block_id, text_block_id); a missing reply is a
/// ParseFailure. Pairs with a blank side score 0 without a reply.
class LlmReplyScorer final : public PairScorer {
 public:
  using Key = std::pair<std::string, std::string>;

  explicit LlmReplyScorer(std::map<Key, std::string> replies);

  std::vector<double> score_pairs(const Document& doc, std::span<const PairRef> pairs) override;

 private:
  std::map<Key, std::string> replies_;
};

}  // namespace tablescope
