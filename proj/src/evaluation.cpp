#include "tablescope/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <numeric>
#include <set>
#include <sstream>

#include "tablescope/error.hpp"
#include "tablescope/rng.hpp"

namespace tablescope {
namespace {

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

// Right-aligned columns separated by two spaces, with a rule under the header.
std::string render(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows) {
    widths.resize(std::max(widths.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  }
  std::ostringstream out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) {
      if (c) out << "  ";
      out << pad(rows[r][c], widths[c]);
    }
    out << '\n';
    if (r == 0) {
      const auto total = std::accumulate(widths.begin(), widths.end(), std::size_t{0}) +
                         2 * (widths.empty() ? 0 : widths.size() - 1);
      out << std::string(total, '-') << '\n';
    }
  }
  return out.str();
}

std::string seconds(double s) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << s;
  return out.str();
}

}  // namespace

double Percentage::value() const {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

std::int64_t Percentage::hundredths() const {
  if (den == 0) return 0;
  // floor(10000 * num / den + 1/2) in exact integer arithmetic.
  return static_cast<std::int64_t>((20000 * num + den) / (2 * den));
}

std::string Percentage::to_string() const {
  const auto h = hundredths();
  std::ostringstream out;
  out << h / 100 << '.' << std::setw(2) << std::setfill('0') << h % 100;
  return out.str();
}

ConfusionCounts confusion(std::span<const int> pred, std::span<const int> gold) {
  if (pred.size() != gold.size()) {
    throw LengthMismatch("prediction and gold lengths differ: " + std::to_string(pred.size()) +
                         " vs " + std::to_string(gold.size()));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] != 0;
    const bool g = gold[i] != 0;
    if (p && g) ++c.tp;
    else if (p && !g) ++c.fp;
    else if (!p && !g) ++c.tn;
    else ++c.fn;
  }
  return c;
}

PrfResult prf(const ConfusionCounts& c) {
  PrfResult r;
  r.precision = {c.tp, c.tp + c.fp};
  r.recall = {c.tp, c.tp + c.fn};
  // 2PR / (P + R) reduces to 2tp / (2tp + fp + fn); zero whenever tp is.
  r.f1 = c.tp == 0 ? Percentage{0, 0} : Percentage{2 * c.tp, 2 * c.tp + c.fp + c.fn};
  return r;
}

DocLevelResult doc_level(const DocGroups& groups) {
  DocLevelResult r;
  for (const auto& [doc_id, pairs] : groups) {
    if (pairs.empty()) throw EmptyGroupError("document '" + doc_id + "' has no pairs");
    bool pos_ok = true;
    bool neg_ok = true;
    for (const auto& [pred, gold] : pairs) {
      if (gold != 0 && pred == 0) pos_ok = false;
      if (gold == 0 && pred != 0) neg_ok = false;
    }
    ++r.n_docs;
    r.pos_correct += pos_ok;
    r.neg_correct += neg_ok;
    r.all_correct += pos_ok && neg_ok;
  }
  return r;
}

Percentage recall_at_k(const std::vector<RetrievalRanking>& rankings,
                       const std::map<std::string, std::string>& gold, int k) {
  if (k <= 0) throw InvalidK("K must be positive, got " + std::to_string(k));
  Percentage r{0, rankings.size()};
  for (const auto& ranking : rankings) {
    const auto it = gold.find(ranking.query_id);
    if (it == gold.end()) throw MissingGoldError("no gold table for query '" + ranking.query_id + "'");
    const auto depth = std::min<std::size_t>(static_cast<std::size_t>(k), ranking.ranked.size());
    for (std::size_t i = 0; i < depth; ++i) {
      if (ranking.ranked[i].table_block_id == it->second) {
        ++r.num;
        break;
      }
    }
  }
  return r;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 ? values[n / 2] : (values[n / 2 - 1] + values[n / 2]) / 2.0;
}

LatencyReport latency_batches(std::span<const double> durations, int n_batches,
                              std::uint64_t seed) {
  if (n_batches < 1 || static_cast<std::size_t>(n_batches) > durations.size()) {
    throw InvalidBatchCount("batch count must lie in [1, " + std::to_string(durations.size()) +
                            "], got " + std::to_string(n_batches));
  }
  std::vector<std::size_t> order(durations.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  SeededRng rng(seed);
  rng.shuffle(order);

  LatencyReport report;
  report.seed = seed;
  report.batches.resize(static_cast<std::size_t>(n_batches));
  for (std::size_t i = 0; i < order.size(); ++i) {
    report.batches[i % report.batches.size()].push_back(order[i]);
  }
  for (const auto& batch : report.batches) {
    std::vector<double> values;
    values.reserve(batch.size());
    for (auto idx : batch) values.push_back(durations[idx]);
    const double sum = std::accumulate(values.begin(), values.end(), 0.0);
    report.batch_means.push_back(sum / static_cast<double>(values.size()));
    report.batch_medians.push_back(median(std::move(values)));
  }
  const double total = std::accumulate(durations.begin(), durations.end(), 0.0);
  report.mean = total / static_cast<double>(durations.size());
  report.median = median(std::vector<double>(durations.begin(), durations.end()));
  return report;
}

json prf_to_json(const ConfusionCounts& c) {
  const auto r = prf(c);
  return {{"tp", c.tp},
          {"fp", c.fp},
          {"tn", c.tn},
          {"fn", c.fn},
          {"precision", r.precision.to_string()},
          {"recall", r.recall.to_string()},
          {"f1", r.f1.to_string()},
          {"precision_raw", r.precision.value()},
          {"recall_raw", r.recall.value()},
          {"f1_raw", r.f1.value()}};
}

json doc_level_to_json(const DocLevelResult& r) {
  return {{"all_correct", r.all_correct},
          {"pos_correct", r.pos_correct},
          {"neg_correct", r.neg_correct},
          {"n_docs", r.n_docs}};
}

json recall_to_json(const std::vector<std::pair<int, Percentage>>& by_k, std::size_t n_queries) {
  json rows = json::array();
  for (const auto& [k, pct] : by_k) {
    rows.push_back({{"k", k}, {"hits", pct.num}, {"recall", pct.to_string()},
                    {"recall_raw", pct.value()}});
  }
  return {{"n_queries", n_queries}, {"recall_at_k", std::move(rows)}};
}

json latency_to_json(const LatencyReport& r) {
  json batches = json::array();
  for (std::size_t b = 0; b < r.batches.size(); ++b) {
    batches.push_back({{"batch_id", b},
                       {"size", r.batches[b].size()},
                       {"mean_s", r.batch_means[b]},
                       {"median_s", r.batch_medians[b]}});
  }
  return {{"mean_s", r.mean}, {"median_s", r.median}, {"seed", r.seed},
          {"batches", std::move(batches)}};
}

std::string prf_table(const std::vector<std::pair<std::string, ConfusionCounts>>& rows) {
  std::vector<std::vector<std::string>> cells{
      {"Scheme", "TP", "FP", "TN", "FN", "Precision", "Recall", "F1"}};
  for (const auto& [name, c] : rows) {
    const auto r = prf(c);
    cells.push_back({name, std::to_string(c.tp), std::to_string(c.fp), std::to_string(c.tn),
                     std::to_string(c.fn), r.precision.to_string(), r.recall.to_string(),
                     r.f1.to_string()});
  }
  return render(cells);
}

std::string doc_level_table(const std::vector<std::pair<std::string, DocLevelResult>>& rows) {
  std::vector<std::vector<std::string>> cells{
      {"Scheme", "All Correct", "POS Correct", "NEG Correct", "#Sum"}};
  for (const auto& [name, r] : rows) {
    cells.push_back({name, std::to_string(r.all_correct), std::to_string(r.pos_correct),
                     std::to_string(r.neg_correct), std::to_string(r.n_docs)});
  }
  return render(cells);
}

std::string recall_table(const std::string& scheme,
                         const std::vector<std::pair<int, Percentage>>& by_k) {
  std::vector<std::vector<std::string>> cells{{"Scheme", "Retrieval Recall@K"}};
  for (const auto& [k, pct] : by_k) {
    cells.push_back({scheme + "@K=" + std::to_string(k), pct.to_string()});
  }
  return render(cells);
}

std::string latency_table(const std::vector<std::pair<std::string, LatencyReport>>& rows) {
  std::vector<std::vector<std::string>> cells{
      {"Scheme", "Mean Time Cost (s)", "Median Time Cost (s)"}};
  for (const auto& [name, r] : rows) cells.push_back({name, seconds(r.mean), seconds(r.median)});
  return render(cells);
}

std::string latency_plot_csv(const LatencyReport& r) {
  std::string out = "batch_id,mean_s,median_s\n";
  for (std::size_t b = 0; b < r.batches.size(); ++b) {
    out += std::to_string(b) + ',' + format_number(r.batch_means[b]) + ',' +
           format_number(r.batch_medians[b]) + '\n';
  }
  return out;
}

}  // namespace tablescope
