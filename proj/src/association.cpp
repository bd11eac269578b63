#include "tablescope/association.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <unordered_set>

#include "tablescope/error.hpp"

namespace tablescope {
namespace {

bool is_alnum(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}
bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
char lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

bool starts_with_ci(std::string_view text, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > text.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (lower(text[pos + k]) != prefix[k]) return false;
  }
  return true;
}

// Length of the whitespace run at pos; U+00A0 counts as whitespace since OCR
// output often contains it between "Table" and the number.
std::size_t skip_space(std::string_view text, std::size_t pos) {
  std::size_t j = pos;
  while (j < text.size()) {
    const char c = text[j];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
      ++j;
    } else if (static_cast<unsigned char>(c) == 0xC2 && j + 1 < text.size() &&
               static_cast<unsigned char>(text[j + 1]) == 0xA0) {
      j += 2;
    } else {
      break;
    }
  }
  return j - pos;
}

constexpr std::array<std::string_view, 20> kRoman = {
    "i",  "ii",  "iii",  "iv",  "v",  "vi",  "vii",  "viii",  "ix",  "x",
    "xi", "xii", "xiii", "xiv", "xv", "xvi", "xvii", "xviii", "xix", "xx"};

std::optional<int> parse_reference_number(std::string_view token) {
  if (token.empty()) return std::nullopt;
  bool digits = true;
  bool letters = true;
  for (char c : token) {
    digits = digits && is_digit(c);
    letters = letters && is_alpha(c);
  }
  if (digits) {
    if (token.size() > 3) return std::nullopt;
    int value = 0;
    for (char c : token) value = value * 10 + (c - '0');
    if (value < 1) return std::nullopt;
    return value;
  }
  if (letters && token.size() <= 5) {
    std::string folded;
    for (char c : token) folded += lower(c);
    for (std::size_t k = 0; k < kRoman.size(); ++k) {
      if (kRoman[k] == folded) return static_cast<int>(k + 1);
    }
  }
  return std::nullopt;
}

// Calls `sink(n)` for every reference in reading order; stops early when the
// sink returns false.
template <typename Sink>
void scan_references(std::string_view text, Sink&& sink) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (i > 0 && is_alnum(text[i - 1])) continue;
    std::size_t j;
    if (starts_with_ci(text, i, "table")) {
      j = i + 5;
      const auto gap = skip_space(text, j);
      if (gap == 0) continue;
      j += gap;
    } else if (starts_with_ci(text, i, "tab.")) {
      j = i + 4;
      j += skip_space(text, j);
    } else {
      continue;
    }
    std::size_t end = j;
    while (end < text.size() && is_alnum(text[end])) ++end;
    if (auto n = parse_reference_number(text.substr(j, end - j))) {
      if (!sink(*n)) return;
    }
  }
}

}  // namespace

std::string_view to_string(ScorerKind kind) {
  switch (kind) {
    case ScorerKind::Heuristic:
      return "heuristic";
    case ScorerKind::Remote:
      return "remote";
    case ScorerKind::LlmBaseline:
      return "llm-prompt";
  }
  return "heuristic";
}

std::optional<ScorerKind> scorer_kind_from_string(std::string_view name) {
  for (auto kind : {ScorerKind::Heuristic, ScorerKind::Remote, ScorerKind::LlmBaseline}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

void ScorerConfig::validate() const {
  if (!(theta >= 0.0 && theta <= 1.0)) throw ConfigError("theta must lie in [0, 1]");
  if (!(lexical_weight >= 0.0 && lexical_weight <= 1.0)) {
    throw ConfigError("lexical_weight must lie in [0, 1]");
  }
  if (batch_size == 0) throw ConfigError("batch_size must be positive");
  if (max_in_flight == 0) throw ConfigError("max_in_flight must be positive");
  if (scorer_kind == ScorerKind::Remote && remote_endpoint.empty()) {
    throw ConfigError("remote scorer requires an endpoint");
  }
}

int decide(double p, const ScorerConfig& cfg) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("association score outside [0, 1]");
  return p >= cfg.theta ? 1 : 0;
}

ScoredPair make_scored_pair(const Block& table, const Block& text, double score,
                            const ScorerConfig& cfg) {
  return {table.block_id, text.block_id, score, decide(score, cfg)};
}

TableNumberRefs extract_table_numbers(std::string_view text) {
  TableNumberRefs refs;
  scan_references(text, [&](int n) {
    refs.numbers.insert(n);
    return true;
  });
  return refs;
}

std::optional<int> first_table_number(std::string_view text) {
  std::optional<int> first;
  scan_references(text, [&](int n) {
    first = n;
    return false;
  });
  return first;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (is_alnum(c)) {
      current += lower(c);
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

DocumentVocabulary DocumentVocabulary::from_texts(std::span<const std::string> texts) {
  DocumentVocabulary vocab;
  vocab.n_docs_ = texts.size();
  for (const auto& text : texts) {
    const auto tokens = tokenize(text);
    std::unordered_set<std::string> unique(tokens.begin(), tokens.end());
    for (const auto& term : unique) ++vocab.df_[term];
  }
  return vocab;
}

DocumentVocabulary DocumentVocabulary::from_document(const Document& doc) {
  std::vector<std::string> texts;
  texts.reserve(doc.block_count());
  for (const auto& page : doc.pages) {
    for (const auto& block : page.blocks) texts.push_back(block.text);
  }
  return from_texts(texts);
}

std::size_t DocumentVocabulary::document_frequency(const std::string& term) const {
  auto it = df_.find(term);
  return it == df_.end() ? 0 : it->second;
}

double DocumentVocabulary::idf(const std::string& term) const {
  const double n = static_cast<double>(n_docs_);
  const double df = static_cast<double>(document_frequency(term));
  return std::log(1.0 + n / (1.0 + df));
}

double lexical_score(std::string_view a, std::string_view b, const DocumentVocabulary& vocab) {
  auto weights = [&](std::string_view text) {
    std::map<std::string, double> w;
    for (auto& token : tokenize(text)) w[std::move(token)] += 1.0;
    for (auto& [term, value] : w) value *= vocab.idf(term);
    return w;
  };
  const auto wa = weights(a);
  const auto wb = weights(b);
  if (wa.empty() || wb.empty()) return 0.0;

  auto squared_norm = [](const std::map<std::string, double>& w) {
    double s = 0;
    for (const auto& [_, v] : w) s += v * v;
    return s;
  };
  double dot = 0;
  // Both maps iterate in term order, so the sum is the same for (a, b) and (b, a).
  auto ia = wa.begin();
  auto ib = wb.begin();
  while (ia != wa.end() && ib != wb.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      dot += ia->second * ib->second;
      ++ia;
      ++ib;
    }
  }
  const double denom = std::sqrt(squared_norm(wa) * squared_norm(wb));
  if (!(denom > 0)) return 0.0;
  return std::clamp(dot / denom, 0.0, 1.0);
}

double lexical_score(const Block& table, const Block& text, const DocumentVocabulary& vocab) {
  return lexical_score(table.text, text.text, vocab);
}

double heuristic_score(const Block& table, std::optional<int> table_number, const Block& text,
                       const DocumentVocabulary& vocab, const ScorerConfig& cfg) {
  if (table_number && extract_table_numbers(text.text).contains(*table_number)) return 1.0;
  return cfg.lexical_weight * lexical_score(table, text, vocab);
}

HeuristicScorer::HeuristicScorer(ScorerConfig cfg) : cfg_(std::move(cfg)) {}

std::vector<double> HeuristicScorer::score_pairs(const Document& doc,
                                                 std::span<const PairRef> pairs) {
  const auto vocab = DocumentVocabulary::from_document(doc);
  std::vector<double> scores;
  scores.reserve(pairs.size());
  const Block* last_table = nullptr;
  std::optional<int> number;
  for (const auto& pair : pairs) {
    if (pair.table != last_table) {
      last_table = pair.table;
      number = first_table_number(pair.table->text);
    }
    scores.push_back(heuristic_score(*pair.table, number, *pair.text, vocab, cfg_));
  }
  return scores;
}

std::vector<double> HeuristicScorer::score_query(const Document& doc, std::string_view query,
                                                 std::span<const std::string> table_inputs) {
  const auto vocab = DocumentVocabulary::from_document(doc);
  std::vector<double> scores;
  scores.reserve(table_inputs.size());
  for (const auto& input : table_inputs) scores.push_back(lexical_score(query, input, vocab));
  return scores;
}

}  // namespace tablescope
