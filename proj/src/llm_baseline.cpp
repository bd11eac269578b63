#include "tablescope/llm_baseline.hpp"

#include "tablescope/error.hpp"

namespace tablescope {
namespace {

constexpr std::string_view kPromptHead =
    "You are an expert in document analysis. Your task is to determine whether the provided "
    "text block is a descriptive explanation of the given table block.\n"
    "Please reply with only a single number:\n"
    "\n"
    "Reply `1' if the text block describes or explains the table block.\n"
    "\n"
    "Reply `0' if the text block is unrelated to the table block.\n"
    "\n"
    "Here is the content:\n"
    "\n"
    "- Table Block:\n"
    "  ";
constexpr std::string_view kPromptMiddle =
    "\n"
    "\n"
    "- Text Block:\n"
    "  ";

std::string_view trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n\f\v";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string build_llm_prompt(std::string_view table_text, std::string_view text_text) {
  if (trim(table_text).empty()) throw EmptyContentError("table content is empty");
  if (trim(text_text).empty()) throw EmptyContentError("text content is empty");
  std::string prompt;
  prompt.reserve(kPromptHead.size() + kPromptMiddle.size() + table_text.size() + text_text.size());
  prompt += kPromptHead;
  prompt += table_text;
  prompt += kPromptMiddle;
  prompt += text_text;
  return prompt;
}

bool parse_llm_reply(std::string_view reply) {
  const auto t = trim(reply);
  if (t == "1") return true;
  if (t == "0") return false;
  throw ParseFailure("reply is not a single 0/1 digit: '" + std::string(t.substr(0, 80)) + "'");
}

bool promptable(const Block& table, const Block& text) {
  return !trim(table.text).empty() && !trim(text.text).empty();
}

LlmReplyScorer::LlmReplyScorer(std::map<Key, std::string> replies) : replies_(std::move(replies)) {}

std::vector<double> LlmReplyScorer::score_pairs(const Document&, std::span<const PairRef> pairs) {
  std::vector<double> scores;
  scores.reserve(pairs.size());
  for (const auto& p : pairs) {
    // A blank block cannot describe anything and never got a prompt.
    if (!promptable(*p.table, *p.text)) {
      scores.push_back(0.0);
      continue;
    }
    auto it = replies_.find({p.table->block_id, p.text->block_id});
    if (it == replies_.end()) {
      throw ParseFailure("no reply recorded for (" + p.table->block_id + ", " +
                         p.text->block_id + ")");
    }
    scores.push_back(parse_llm_reply(it->second) ? 1.0 : 0.0);
  }
  return scores;
}

}  // namespace tablescope
