#include "tablescope/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tablescope/association.hpp"
#include "tablescope/datasetgen.hpp"
#include "tablescope/error.hpp"
#include "tablescope/evaluation.hpp"
#include "tablescope/llm_baseline.hpp"
#include "tablescope/parser.hpp"
#include "tablescope/remote_scorer.hpp"
#include "tablescope/retrieval.hpp"
#include "tablescope/service.hpp"

namespace tablescope::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << content;
}

void emit(const std::string& out_path, const std::string& content, std::ostream& out) {
  if (out_path.empty()) {
    out << content;
  } else {
    write_file(out_path, content);
  }
}

struct ScorerFlags {
  std::string scorer = "heuristic";
  double theta = 0.5;
  double lexical_weight = 0.9;
  std::string endpoint;
  std::size_t batch_size = 32;
  std::size_t max_in_flight = 4;
  int timeout_ms = 30000;
  std::size_t jobs = 1;
  int page_window = -1;

  void attach(CLI::App* app, bool with_llm) {
    std::vector<std::string> kinds{"heuristic", "remote"};
    if (with_llm) kinds.push_back("llm-prompt");
    app->add_option("--scorer", scorer, "Association scorer")
        ->check(CLI::IsMember(kinds))
        ->capture_default_str();
    app->add_option("--theta", theta, "Decision threshold; related iff p >= theta")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--lexical-weight", lexical_weight, "Heuristic weight on lexical similarity")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    app->add_option("--endpoint", endpoint, "Model server base URL (remote scorer)")
        ->envname("TABLESCOPE_ENDPOINT");
    app->add_option("--batch-size", batch_size, "Pairs per remote request")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--max-in-flight", max_in_flight, "Concurrent remote requests")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--timeout-ms", timeout_ms, "Remote request timeout")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--jobs", jobs, "Worker threads; output is identical for any value")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--page-window", page_window,
                    "Only consider text within this many pages of a table (default: whole doc)");
  }

  ScorerConfig config() const {
    ScorerConfig cfg;
    cfg.theta = theta;
    cfg.scorer_kind = *scorer_kind_from_string(scorer);
    cfg.lexical_weight = lexical_weight;
    cfg.remote_endpoint = endpoint;
    cfg.batch_size = batch_size;
    cfg.max_in_flight = max_in_flight;
    cfg.timeout = std::chrono::milliseconds(timeout_ms);
    cfg.validate();
    return cfg;
  }

  ParseOptions parse_options() const {
    ParseOptions opts;
    opts.jobs = jobs;
    if (page_window >= 0) opts.page_window = page_window;
    return opts;
  }
};

std::vector<Document> load_documents(const std::vector<std::string>& paths) {
  std::vector<Document> docs;
  for (const auto& p : paths) {
    try {
      docs.push_back(parse_document_json(read_file(p)));
    } catch (const Error& e) {
      // Keep the error type so the exit status is unchanged.
      throw ValidationError(p + ": " + e.code() + ": " + e.what());
    }
  }
  return docs;
}

std::vector<AnnotationTriplet> load_triplets(const std::string& path) {
  std::vector<AnnotationTriplet> out;
  for (const auto& row : read_jsonl(read_file(path), path)) out.push_back(triplet_from_json(row));
  return out;
}

using PairKey = std::tuple<std::string, std::string, std::string>;  // doc, table, text

// Pair labels from JSONL rows (label, or score thresholded at theta) or from
// parse-result JSON files.
std::map<PairKey, int> load_pair_labels(const std::vector<std::string>& paths, double theta) {
  std::map<PairKey, int> labels;
  for (const auto& path : paths) {
    const auto content = read_file(path);
    json whole;
    bool is_parse = false;
    try {
      whole = json::parse(content);
      is_parse = whole.is_object() && whole.contains("entries");
    } catch (const json::exception&) {
    }
    if (is_parse) {
      const auto parsed = parse_from_json(whole);
      for (const auto& e : parsed.entries) {
        for (const auto& [text_id, p] : e.scores) {
          const bool related =
              std::find(e.related.begin(), e.related.end(), text_id) != e.related.end();
          labels[{parsed.doc_id, e.table_block_id, text_id}] = related ? 1 : 0;
        }
      }
      continue;
    }
    for (const auto& row : read_jsonl(content, path)) {
      PairKey key{row.at("doc_id").get<std::string>(), row.at("table_block_id").get<std::string>(),
                  row.at("text_block_id").get<std::string>()};
      int label;
      if (row.contains("label")) {
        label = row["label"].get<int>();
      } else if (row.contains("score")) {
        label = row["score"].get<double>() >= theta ? 1 : 0;
      } else {
        throw SchemaError(path + ": pair row needs 'label' or 'score'");
      }
      if (label != 0 && label != 1) throw SchemaError(path + ": label must be 0 or 1");
      labels[key] = label;
    }
  }
  return labels;
}

// (pred, gold) for every gold pair; a gold pair without a prediction is an error.
std::vector<std::pair<PairKey, std::pair<int, int>>> join_pairs(const std::map<PairKey, int>& pred,
                                                                const std::map<PairKey, int>& gold) {
  std::vector<std::pair<PairKey, std::pair<int, int>>> out;
  for (const auto& [key, g] : gold) {
    auto it = pred.find(key);
    if (it == pred.end()) {
      throw ValidationError("no prediction for pair (" + std::get<0>(key) + ", " +
                            std::get<1>(key) + ", " + std::get<2>(key) + ")");
    }
    out.push_back({key, {it->second, g}});
  }
  return out;
}

std::pair<int, int> parse_ratio(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) throw std::invalid_argument("missing ':'");
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::exception&) {
    throw ConfigError("ratio must look like 7:3, got '" + text + "'");
  }
}

std::unique_ptr<PairScorer> make_pair_scorer(const ScorerConfig& cfg) {
  if (cfg.scorer_kind == ScorerKind::Remote) return std::make_unique<RemoteScorer>(cfg);
  return std::make_unique<HeuristicScorer>(cfg);
}

std::unique_ptr<QueryScorer> make_query_scorer(const ScorerConfig& cfg) {
  if (cfg.scorer_kind == ScorerKind::Remote) return std::make_unique<RemoteScorer>(cfg);
  return std::make_unique<HeuristicScorer>(cfg);
}

std::vector<double> read_durations(const std::string& path) {
  const auto content = read_file(path);
  std::vector<double> values;
  try {
    const auto j = json::parse(content);
    if (j.is_array()) return j.get<std::vector<double>>();
  } catch (const json::exception&) {
  }
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      values.push_back(std::stod(line));
    } catch (const std::exception&) {
      throw SchemaError(path + ": not a number: '" + line + "'");
    }
  }
  return values;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Table-centric semantic document parsing toolkit", "tablescope"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  // ingest / validate / stats
  std::vector<std::string> doc_paths;
  std::string out_path;
  std::string format = "json";

  auto* ingest = app.add_subcommand("ingest", "Validate a block-JSON document and write canonical form");
  ingest->add_option("--doc", doc_paths, "Document JSON")->required()->expected(1);
  ingest->add_option("--out", out_path, "Output path (default stdout)");

  std::string triplets_path;
  auto* validate = app.add_subcommand("validate", "Check documents (and optional triplets)");
  validate->add_option("--doc", doc_paths, "Document JSON files")->required();
  validate->add_option("--triplets", triplets_path, "Annotation triplets JSONL to check");

  auto* stats = app.add_subcommand("stats", "Corpus statistics per source");
  stats->add_option("--doc", doc_paths, "Document JSON files")->required();
  stats->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  stats->add_option("--out", out_path, "Output path (default stdout)");

  // parse
  ScorerFlags sflags;
  std::string emit_prompts_path;
  std::string replies_path;
  auto* parse = app.add_subcommand("parse", "Associate text blocks with every table");
  parse->add_option("--doc", doc_paths, "Document JSON")->required()->expected(1);
  sflags.attach(parse, true);
  parse->add_option("--emit-prompts", emit_prompts_path, "llm-prompt: write prompts JSONL here");
  parse->add_option("--replies", replies_path, "llm-prompt: recorded replies JSONL");
  parse->add_option("--out", out_path, "Output path (default stdout)");

  // retrieve
  std::string query_text;
  std::string queries_path;
  std::vector<std::string> parse_paths;
  int k = 3;
  bool append_related = false;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "Rank tables against a query");
  retrieve_cmd->add_option("--doc", doc_paths, "Document JSON files")->required();
  auto* q_opt = retrieve_cmd->add_option("--query", query_text, "Query text");
  auto* qs_opt = retrieve_cmd->add_option("--queries", queries_path, "Queries JSONL");
  q_opt->excludes(qs_opt);
  retrieve_cmd->add_option("--k", k, "Number of tables to return")->capture_default_str();
  retrieve_cmd->add_option("--parse", parse_paths, "Precomputed parse results (by doc_id)");
  retrieve_cmd->add_flag("--append-related", append_related,
                         "Score table text plus its related text");
  sflags.attach(retrieve_cmd, false);
  retrieve_cmd->add_option("--out", out_path, "Output path (default stdout)");

  // build-training / split
  std::uint64_t seed = 0;
  auto* build = app.add_subcommand("build-training", "Balanced training pairs from triplets");
  build->add_option("--doc", doc_paths, "Document JSON files")->required();
  build->add_option("--triplets", triplets_path, "Resolved triplets JSONL")->required();
  build->add_option("--seed", seed, "Sampling seed")->required();
  build->add_option("--out", out_path, "Output path (default stdout)");

  std::string samples_path;
  std::string ratio = "7:3";
  std::string train_out;
  std::string test_out;
  bool by_document = false;
  auto* split = app.add_subcommand("split", "Seeded train/test split of training pairs");
  split->add_option("--samples", samples_path, "Training pairs JSONL")->required();
  split->add_option("--ratio", ratio, "train:test")->capture_default_str();
  split->add_option("--seed", seed, "Shuffle seed")->required();
  split->add_flag("--by-document", by_document, "Keep each document on one side");
  split->add_option("--train-out", train_out, "Train JSONL path")->required();
  split->add_option("--test-out", test_out, "Test JSONL path")->required();

  // evaluation
  std::vector<std::string> pred_paths;
  std::string gold_path;
  std::string scheme = "tablescope";
  double eval_theta = 0.5;
  auto* eval_pairs = app.add_subcommand("evaluate-pairs", "Pair-level confusion, P/R/F1");
  auto* eval_docs = app.add_subcommand("evaluate-docs", "Document-level All/POS/NEG Correct");
  for (auto* sub : {eval_pairs, eval_docs}) {
    sub->add_option("--pred", pred_paths, "Predictions: pair JSONL or parse-result JSON")->required();
    sub->add_option("--gold", gold_path, "Gold pair JSONL (label field)")->required();
    sub->add_option("--theta", eval_theta, "Threshold for score-only prediction rows")
        ->check(CLI::Range(0.0, 1.0));
    sub->add_option("--scheme", scheme, "Row name in text output");
    sub->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", out_path, "Output path (default stdout)");
  }

  std::string rankings_path;
  std::vector<int> ks{1, 2, 3};
  auto* eval_retrieval = app.add_subcommand("evaluate-retrieval", "Recall@K over rankings");
  eval_retrieval->add_option("--rankings", rankings_path, "Rankings JSONL")->required();
  eval_retrieval->add_option("--queries", queries_path, "Queries JSONL with gold_table_id")->required();
  eval_retrieval->add_option("--k", ks, "Cutoffs")->capture_default_str();
  eval_retrieval->add_option("--scheme", scheme, "Row name in text output");
  eval_retrieval->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  eval_retrieval->add_option("--out", out_path, "Output path (default stdout)");

  // bench
  std::string durations_path;
  std::string durations_out;
  std::string plot_path;
  int n_batches = 10;
  auto* bench = app.add_subcommand("bench", "Per-pair scoring latency with batch analysis");
  bench->add_option("--doc", doc_paths, "Documents whose pairs are timed");
  bench->add_option("--durations", durations_path, "Analyze recorded durations instead (seconds)");
  bench->add_option("--batches", n_batches, "Number of batches")->capture_default_str();
  bench->add_option("--seed", seed, "Batch assignment seed")->required();
  bench->add_option("--emit-plot-data", plot_path, "Per-batch CSV (batch_id,mean_s,median_s)");
  bench->add_option("--durations-out", durations_out, "Write measured durations (JSON array)");
  sflags.attach(bench, false);
  bench->add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  bench->add_option("--out", out_path, "Output path (default stdout)");

  // serve
  ServiceOptions service_opts;
  std::string store_path;
  std::string images_dir;
  std::string ui_dir;
  auto* serve = app.add_subcommand("serve", "Run the annotation and parsing HTTP service");
  serve->add_option("--host", service_opts.host, "Bind address")->capture_default_str();
  serve->add_option("--port", service_opts.port, "Port (0 picks one)")->capture_default_str();
  serve->add_option("--store", store_path, "Event log file (default: in memory)");
  serve->add_option("--endpoint", service_opts.scorer_endpoint, "Model server for /parse and /retrieve")
      ->envname("TABLESCOPE_ENDPOINT");
  serve->add_option("--images-dir", images_dir, "Page images as <dir>/<doc_id>/<page_id>.png");
  serve->add_option("--ui-dir", ui_dir, "Static annotation UI bundle, served at /ui");

  std::vector<const char*> argv{"tablescope"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  }

  try {
    if (*ingest) {
      const auto docs = load_documents(doc_paths);
      emit(out_path, canonicalize(docs.front()), out);
    } else if (*validate) {
      const auto docs = load_documents(doc_paths);
      if (!triplets_path.empty()) {
        const auto triplets = load_triplets(triplets_path);
        for (const auto& doc : docs) {
          std::vector<AnnotationTriplet> mine;
          for (const auto& t : triplets) {
            if (t.doc_id == doc.doc_id) mine.push_back(t);
          }
          validate_triplets(doc, mine);
          for (const auto& w : completeness_check(doc, mine)) err << "warning: " << w.message << "\n";
        }
      }
      for (const auto& doc : docs) out << "ok " << doc.doc_id << "\n";
    } else if (*stats) {
      const auto s = corpus_stats(load_documents(doc_paths));
      if (format == "text") {
        std::ostringstream text;
        text << "Source  #PDF  #Page  #Table Block  #Text Block\n";
        auto row = [&](const std::string& name, const SourceCounts& c) {
          text << name << "  " << c.n_pdf << "  " << c.n_page << "  " << c.n_table_block << "  "
               << c.n_text_block << "\n";
        };
        for (const auto& [name, c] : s.per_source) row(name, c);
        row("Sum", s.total);
        emit(out_path, text.str(), out);
      } else {
        emit(out_path, canonical_dump(corpus_stats_to_json(s)) + "\n", out);
      }
    } else if (*parse) {
      const auto docs = load_documents(doc_paths);
      const auto& doc = docs.front();
      auto cfg = sflags.config();
      const auto opts = sflags.parse_options();
      if (cfg.scorer_kind == ScorerKind::LlmBaseline) {
        if (emit_prompts_path.empty() && replies_path.empty()) {
          err << "usage error: --scorer llm-prompt needs --emit-prompts and/or --replies\n";
          return kUsageError;
        }
        if (!emit_prompts_path.empty()) {
          std::vector<json> rows;
          for (const auto& p : candidate_pairs(doc, opts)) {
            if (!promptable(*p.table, *p.text)) continue;
            rows.push_back({{"table_block_id", p.table->block_id},
                            {"text_block_id", p.text->block_id},
                            {"prompt", build_llm_prompt(p.table->text, p.text->text)}});
          }
          write_file(emit_prompts_path, write_jsonl(rows));
        }
        if (!replies_path.empty()) {
          std::map<LlmReplyScorer::Key, std::string> replies;
          for (const auto& row : read_jsonl(read_file(replies_path), replies_path)) {
            replies[{row.at("table_block_id").get<std::string>(),
                     row.at("text_block_id").get<std::string>()}] =
                row.at("reply").get<std::string>();
          }
          LlmReplyScorer scorer(std::move(replies));
          emit(out_path, export_parse(parse_semantics(doc, scorer, cfg, opts)), out);
        }
      } else {
        auto scorer = make_pair_scorer(cfg);
        emit(out_path, export_parse(parse_semantics(doc, *scorer, cfg, opts)), out);
      }
    } else if (*retrieve_cmd) {
      if (query_text.empty() && queries_path.empty()) {
        err << "usage error: retrieve needs --query or --queries\n";
        return kUsageError;
      }
      const auto docs = load_documents(doc_paths);
      const auto cfg = sflags.config();
      auto pair_scorer = make_pair_scorer(cfg);
      auto query_scorer = make_query_scorer(cfg);
      std::map<std::string, ParsedDocument> parses;
      for (const auto& p : parse_paths) {
        auto parsed = import_parse(read_file(p));
        parses[parsed.doc_id] = std::move(parsed);
      }
      auto doc_for = [&](const Query& q) -> const Document& {
        if (q.doc_id) {
          for (const auto& d : docs) {
            if (d.doc_id == *q.doc_id) return d;
          }
          throw ValidationError("query '" + q.query_id + "' names unknown document '" + *q.doc_id + "'");
        }
        if (docs.size() != 1) {
          throw ValidationError("query '" + q.query_id + "' has no doc_id and several documents were given");
        }
        return docs.front();
      };
      auto parsed_for = [&](const Document& d) -> const ParsedDocument& {
        auto it = parses.find(d.doc_id);
        if (it == parses.end()) {
          it = parses.emplace(d.doc_id, parse_semantics(d, *pair_scorer, cfg, sflags.parse_options())).first;
        }
        return it->second;
      };
      RetrievalOptions ropts;
      ropts.append_related_text = append_related;
      if (!query_text.empty()) {
        Query q{"q", query_text, std::nullopt, std::nullopt};
        const auto& d = doc_for(q);
        emit(out_path, canonical_dump(ranking_to_json(retrieve(parsed_for(d), d, q, k, *query_scorer, ropts))) + "\n",
             out);
      } else {
        std::vector<json> rows;
        for (const auto& q : read_queries_jsonl(read_file(queries_path))) {
          const auto& d = doc_for(q);
          rows.push_back(ranking_to_json(retrieve(parsed_for(d), d, q, k, *query_scorer, ropts)));
        }
        emit(out_path, write_jsonl(rows), out);
      }
    } else if (*build) {
      const auto docs = load_documents(doc_paths);
      const auto triplets = load_triplets(triplets_path);
      std::vector<json> rows;
      std::size_t n_pos = 0;
      std::size_t n_neg = 0;
      for (const auto& doc : docs) {
        std::vector<AnnotationTriplet> mine;
        for (const auto& t : triplets) {
          if (t.doc_id == doc.doc_id) mine.push_back(t);
        }
        for (const auto& s : build_training_pairs(doc, mine, seed)) {
          (s.label ? n_pos : n_neg) += 1;
          rows.push_back(sample_to_json(s));
        }
      }
      if (n_neg < n_pos) {
        err << "note: " << n_pos - n_neg
            << " fewer negatives than positives (not enough unrelated text blocks)\n";
      }
      emit(out_path, write_jsonl(rows), out);
    } else if (*split) {
      std::vector<TrainingSample> samples;
      for (const auto& row : read_jsonl(read_file(samples_path), samples_path)) {
        samples.push_back(sample_from_json(row));
      }
      const auto parts = split_train_test(samples, parse_ratio(ratio), seed,
                                          by_document ? SplitMode::Document : SplitMode::Pair);
      auto dump = [](const std::vector<TrainingSample>& v) {
        std::vector<json> rows;
        for (const auto& s : v) rows.push_back(sample_to_json(s));
        return write_jsonl(rows);
      };
      write_file(train_out, dump(parts.train));
      write_file(test_out, dump(parts.test));
      out << canonical_dump({{"n", samples.size()},
                             {"train", parts.train.size()},
                             {"test", parts.test.size()},
                             {"seed", seed},
                             {"mode", by_document ? "document" : "pair"}})
          << "\n";
    } else if (*eval_pairs || *eval_docs) {
      const auto joined =
          join_pairs(load_pair_labels(pred_paths, eval_theta), load_pair_labels({gold_path}, 0.5));
      if (*eval_pairs) {
        std::vector<int> pred;
        std::vector<int> gold;
        for (const auto& [_, pg] : joined) {
          pred.push_back(pg.first);
          gold.push_back(pg.second);
        }
        const auto c = confusion(pred, gold);
        emit(out_path,
             format == "text" ? prf_table({{scheme, c}}) : canonical_dump(prf_to_json(c)) + "\n", out);
      } else {
        DocGroups groups;
        for (const auto& [key, pg] : joined) groups[std::get<0>(key)].push_back(pg);
        const auto r = doc_level(groups);
        emit(out_path,
             format == "text" ? doc_level_table({{scheme, r}})
                              : canonical_dump(doc_level_to_json(r)) + "\n",
             out);
      }
    } else if (*eval_retrieval) {
      std::vector<RetrievalRanking> rankings;
      for (const auto& row : read_jsonl(read_file(rankings_path), rankings_path)) {
        rankings.push_back(ranking_from_json(row));
      }
      std::map<std::string, std::string> gold;
      for (const auto& q : read_queries_jsonl(read_file(queries_path))) {
        if (q.gold_table_id) gold[q.query_id] = *q.gold_table_id;
      }
      std::vector<std::pair<int, Percentage>> by_k;
      for (int cutoff : ks) by_k.emplace_back(cutoff, recall_at_k(rankings, gold, cutoff));
      emit(out_path,
           format == "text" ? recall_table(scheme, by_k)
                            : canonical_dump(recall_to_json(by_k, rankings.size())) + "\n",
           out);
    } else if (*bench) {
      std::vector<double> durations;
      if (!durations_path.empty()) {
        durations = read_durations(durations_path);
      } else if (!doc_paths.empty()) {
        const auto cfg = sflags.config();
        auto scorer = make_pair_scorer(cfg);
        for (const auto& doc : load_documents(doc_paths)) {
          for (const auto& pair : candidate_pairs(doc, sflags.parse_options())) {
            const auto start = std::chrono::steady_clock::now();
            scorer->score_pairs(doc, std::span<const PairRef>(&pair, 1));
            const auto stop = std::chrono::steady_clock::now();
            durations.push_back(std::chrono::duration<double>(stop - start).count());
          }
        }
      } else {
        err << "usage error: bench needs --doc or --durations\n";
        return kUsageError;
      }
      if (!durations_out.empty()) write_file(durations_out, canonical_dump(json(durations)) + "\n");
      const auto report = latency_batches(durations, n_batches, seed);
      if (!plot_path.empty()) write_file(plot_path, latency_plot_csv(report));
      auto j = latency_to_json(report);
      j["n_samples"] = durations.size();
      j["scorer"] = sflags.scorer;
      emit(out_path,
           format == "text" ? latency_table({{scheme, report}}) : canonical_dump(j) + "\n", out);
    } else if (*serve) {
      service_opts.images_dir = images_dir;
      service_opts.ui_dir = ui_dir;
      AnnotationStore store(store_path);
      HttpService service(store, service_opts);
      const int port = service.bind();
      err << "listening on http://" << service_opts.host << ":" << port << "\n";
      service.listen();
    }
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsageError;
  } catch (const ScorerError& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return kScorerFailure;
  } catch (const Error& e) {
    err << "error: " << e.code() << ": " << e.what() << "\n";
    return kValidationFailure;
  } catch (const json::exception& e) {
    err << "error: SchemaError: " << e.what() << "\n";
    return kValidationFailure;
  }
  return kSuccess;
}

}  // namespace tablescope::cli
