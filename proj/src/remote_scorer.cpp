#include "tablescope/remote_scorer.hpp"

#include <cmath>
#include <future>

#include <httplib.h>

#include "tablescope/canonical_json.hpp"
#include "tablescope/error.hpp"

namespace tablescope {
namespace {

struct Endpoint {
  std::string base;    // scheme://host:port
  std::string prefix;  // path prefix without trailing slash
};

Endpoint split_endpoint(const std::string& url) {
  constexpr std::string_view kScheme = "http://";
  if (url.rfind(kScheme, 0) != 0) {
    throw ConfigError("endpoint must be an http:// URL: '" + url + "'");
  }
  const auto slash = url.find('/', kScheme.size());
  Endpoint ep;
  ep.base = url.substr(0, slash);
  if (slash != std::string::npos) {
    ep.prefix = url.substr(slash);
    while (!ep.prefix.empty() && ep.prefix.back() == '/') ep.prefix.pop_back();
  }
  return ep;
}

std::vector<double> post_scores(const ScorerConfig& cfg, const std::string& route,
                                const json& body, std::size_t expected, bool probabilities) {
  const auto ep = split_endpoint(cfg.remote_endpoint);
  httplib::Client client(ep.base);
  const auto secs = std::chrono::duration_cast<std::chrono::seconds>(cfg.timeout);
  const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(cfg.timeout - secs);
  client.set_connection_timeout(secs.count(), usecs.count());
  client.set_read_timeout(secs.count(), usecs.count());
  client.set_write_timeout(secs.count(), usecs.count());

  const auto res = client.Post(ep.prefix + route, canonical_dump(body), "application/json");
  if (!res) {
    throw TransportError(cfg.remote_endpoint + route + ": " + httplib::to_string(res.error()));
  }
  if (res->status != 200) {
    std::string detail = res->body;
    try {
      const auto err = json::parse(res->body);
      if (err.is_object() && err.contains("error") && err["error"].is_string()) {
        detail = err["error"].get<std::string>();
      }
    } catch (const json::exception&) {
    }
    throw ProtocolError(route + " returned HTTP " + std::to_string(res->status) + ": " + detail);
  }

  json reply;
  try {
    reply = json::parse(res->body);
  } catch (const json::exception& e) {
    throw ProtocolError(route + ": reply is not JSON: " + e.what());
  }
  if (!reply.is_object() || !reply.contains("scores") || !reply["scores"].is_array()) {
    throw ProtocolError(route + ": reply lacks a 'scores' array");
  }
  const auto& scores = reply["scores"];
  if (scores.size() != expected) {
    throw ProtocolError(route + ": expected " + std::to_string(expected) + " scores, got " +
                        std::to_string(scores.size()));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& s : scores) {
    if (!s.is_number()) throw ProtocolError(route + ": non-numeric score");
    const double v = s.get<double>();
    if (!std::isfinite(v)) throw ProtocolError(route + ": non-finite score");
    if (probabilities && (v < 0.0 || v > 1.0)) {
      throw ProtocolError(route + ": score " + format_number(v) + " outside [0, 1]");
    }
    out.push_back(v);
  }
  return out;
}

// Runs `request(begin, end)` over consecutive chunks with bounded concurrency
// and concatenates the results in input order.
template <typename Request>
std::vector<double> chunked(std::size_t n, const ScorerConfig& cfg, Request&& request) {
  cfg.validate();
  std::vector<double> out(n);
  std::vector<std::pair<std::size_t, std::size_t>> chunks;
  for (std::size_t begin = 0; begin < n; begin += cfg.batch_size) {
    chunks.emplace_back(begin, std::min(n, begin + cfg.batch_size));
  }
  for (std::size_t wave = 0; wave < chunks.size(); wave += cfg.max_in_flight) {
    const auto wave_end = std::min(chunks.size(), wave + cfg.max_in_flight);
    std::vector<std::future<std::vector<double>>> pending;
    for (std::size_t c = wave; c < wave_end; ++c) {
      pending.push_back(std::async(std::launch::async, [&, c] {
        return request(chunks[c].first, chunks[c].second);
      }));
    }
    // get() on every future before rethrowing so no request outlives `out`.
    std::exception_ptr failure;
    for (std::size_t k = 0; k < pending.size(); ++k) {
      try {
        auto scores = pending[k].get();
        std::copy(scores.begin(), scores.end(),
                  out.begin() + static_cast<std::ptrdiff_t>(chunks[wave + k].first));
      } catch (...) {
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
  }
  return out;
}

}  // namespace

std::vector<double> remote_score_batch(const std::vector<TextPair>& pairs, const ScorerConfig& cfg) {
  return chunked(pairs.size(), cfg, [&](std::size_t begin, std::size_t end) {
    json items = json::array();
    for (std::size_t i = begin; i < end; ++i) {
      items.push_back({{"table_text", pairs[i].first}, {"text_text", pairs[i].second}});
    }
    return post_scores(cfg, "/score", json{{"pairs", std::move(items)}}, end - begin, true);
  });
}

std::vector<double> remote_score_query(const std::string& query,
                                       const std::vector<std::string>& tables,
                                       const ScorerConfig& cfg) {
  return chunked(tables.size(), cfg, [&](std::size_t begin, std::size_t end) {
    json items = json::array();
    for (std::size_t i = begin; i < end; ++i) items.push_back(tables[i]);
    return post_scores(cfg, "/score_query", json{{"query", query}, {"tables", std::move(items)}},
                       end - begin, false);
  });
}

RemoteScorer::RemoteScorer(ScorerConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.scorer_kind = ScorerKind::Remote;
  cfg_.validate();
}

std::vector<double> RemoteScorer::score_pairs(const Document&, std::span<const PairRef> pairs) {
  std::vector<TextPair> texts;
  texts.reserve(pairs.size());
  for (const auto& p : pairs) texts.emplace_back(p.table->text, p.text->text);
  return remote_score_batch(texts, cfg_);
}

std::vector<double> RemoteScorer::score_query(const Document&, std::string_view query,
                                              std::span<const std::string> table_inputs) {
  return remote_score_query(std::string(query),
                            std::vector<std::string>(table_inputs.begin(), table_inputs.end()),
                            cfg_);
}

}  // namespace tablescope
