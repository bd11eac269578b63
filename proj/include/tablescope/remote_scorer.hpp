#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tablescope/association.hpp"

namespace tablescope {

/// (table_text, text_text)
using TextPair = std::pair<std::string, std::string>;

/// POSTs pairs to `{endpoint}/score` in chunks of cfg.batch_size, with at
/// most cfg.max_in_flight requests outstanding. The result is aligned with
/// the input. Throws TransportError when the endpoint cannot be reached and
/// ProtocolError for malformed, short, or out-of-range replies.
std::vector<double> remote_score_batch(const std::vector<TextPair>& pairs, const ScorerConfig& cfg);

/// POSTs to `{endpoint}/score_query`. Scores are unbounded but must be finite.
std::vector<double> remote_score_query(const std::string& query,
                                       const std::vector<std::string>& tables,
                                       const ScorerConfig& cfg);

/// Client for a model server speaking the scoring wire protocol.
class RemoteScorer final : public PairScorer, public QueryScorer {
 public:
  explicit RemoteScorer(ScorerConfig cfg);

  std::vector<double> score_pairs(const Document& doc, std::span<const PairRef> pairs) override;
  std::vector<double> score_query(const Document& doc, std::string_view query,
                                  std::span<const std::string> table_inputs) override;

 private:
  ScorerConfig cfg_;
};

}  // namespace tablescope
