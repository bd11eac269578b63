#include "tablescope/service.hpp"

#include <ctime>
#include <mutex>
#include <set>
#include <sstream>

#include <httplib.h>

#include "tablescope/error.hpp"
#include "tablescope/parser.hpp"
#include "tablescope/remote_scorer.hpp"
#include "tablescope/retrieval.hpp"

namespace tablescope {

struct AnnotationStore::ProjectState {
  Project info;
  Document doc;
  std::vector<const Block*> tables;
  std::vector<const Block*> texts;
  // (annotator, table, text) -> current label
  std::map<std::tuple<std::string, std::string, std::string>, CurrentLabel> labels;
  // (table, text) -> (final label, note)
  std::map<std::pair<std::string, std::string>, std::pair<int, std::string>> resolutions;
  std::vector<LabelEvent> history;

  // Current labels on one pair, by annotator.
  std::map<std::string, int> pair_labels(const std::string& table, const std::string& text) const {
    std::map<std::string, int> out;
    for (const auto& a : info.annotator_ids) {
      auto it = labels.find({a, table, text});
      if (it != labels.end()) out[a] = it->second.label;
    }
    return out;
  }

  static bool disagree(const std::map<std::string, int>& by_annotator) {
    std::set<int> distinct;
    for (const auto& [_, l] : by_annotator) distinct.insert(l);
    return distinct.size() > 1;
  }

  bool is_table(const std::string& id) const {
    const Block* b = doc.find_block(id);
    return b && b->kind == BlockType::Table;
  }
  bool is_text(const std::string& id) const {
    const Block* b = doc.find_block(id);
    return b && kTextKinds.contains(b->kind);
  }

  std::vector<ConflictRecord> conflicts() const {
    std::vector<ConflictRecord> out;
    for (const Block* t : tables) {
      for (const Block* s : texts) {
        if (resolutions.contains({t->block_id, s->block_id})) continue;
        auto by_annotator = pair_labels(t->block_id, s->block_id);
        if (!disagree(by_annotator)) continue;
        out.push_back({t->block_id, s->block_id, std::move(by_annotator), std::nullopt, ""});
      }
    }
    return out;
  }

  // Resolution if any; otherwise the agreed label; unlabeled pairs are unrelated.
  int consensus_label(const std::string& table, const std::string& text) const {
    if (auto it = resolutions.find({table, text}); it != resolutions.end()) return it->second.first;
    const auto by_annotator = pair_labels(table, text);
    if (by_annotator.empty() || disagree(by_annotator)) return 0;
    return by_annotator.begin()->second;
  }

  std::vector<AnnotationTriplet> consensus() const {
    std::vector<AnnotationTriplet> out;
    for (const Block* t : tables) {
      AnnotationTriplet triplet{doc.doc_id, t->block_id, t->page_id, {},
                                std::string(kConsensusAnnotator)};
      for (const Block* s : texts) {
        if (consensus_label(t->block_id, s->block_id) == 1) {
          triplet.related_paragraphs.insert(s->block_id);
        }
      }
      out.push_back(std::move(triplet));
    }
    return out;
  }

  std::vector<ProjectWarning> warnings() const {
    std::vector<ProjectWarning> out;
    if (tables.empty()) {
      out.push_back({"no_tables", "", 0, "document '" + doc.doc_id + "' has no Table blocks"});
    }
    for (const auto& w : completeness_check(doc, consensus())) {
      out.push_back({"completeness", w.table_id, w.page_id, w.message});
    }
    for (const Block* t : tables) {
      std::size_t missing = 0;
      for (const Block* s : texts) {
        const auto n = pair_labels(t->block_id, s->block_id).size();
        if (n < info.annotator_ids.size() && !resolutions.contains({t->block_id, s->block_id})) {
          ++missing;
        }
      }
      if (missing > 0) {
        out.push_back({"incomplete_task", t->block_id, t->page_id,
                       std::to_string(missing) + " candidate pair(s) not labeled by every annotator"});
      }
    }
    return out;
  }
};

namespace {

std::string utc_timestamp() {
  const auto now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string_view to_string(ProjectStatus status) {
  switch (status) {
    case ProjectStatus::Open:
      return "Open";
    case ProjectStatus::Reconciling:
      return "Reconciling";
    case ProjectStatus::Finalized:
      return "Finalized";
  }
  return "Open";
}

AnnotationStore::AnnotationStore(std::filesystem::path log_path) : log_path_(std::move(log_path)) {
  if (log_path_.empty()) return;
  if (std::filesystem::exists(log_path_)) {
    std::ifstream in(log_path_, std::ios::binary);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string content = buffer.str();
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < content.size()) {
      const auto nl = content.find('\n', pos);
      const bool terminated = nl != std::string::npos;
      const std::string line = content.substr(pos, terminated ? nl - pos : std::string::npos);
      ++line_no;
      try {
        if (!line.empty()) apply(json::parse(line));
      } catch (const std::exception& e) {
        if (!terminated) {
          // Torn final write: drop it and continue from the last good record.
          std::filesystem::resize_file(log_path_, pos);
          break;
        }
        throw StorageError(log_path_.string() + " line " + std::to_string(line_no) + ": " +
                           e.what());
      }
      pos = terminated ? nl + 1 : content.size();
    }
  }
  log_.open(log_path_, std::ios::app | std::ios::binary);
  if (!log_) throw StorageError("cannot open event log " + log_path_.string());
}

AnnotationStore::~AnnotationStore() = default;

void AnnotationStore::append(const json& event) {
  if (log_path_.empty()) return;
  log_ << canonical_dump(event) << '\n';
  log_.flush();
  if (!log_) throw StorageError("write to event log " + log_path_.string() + " failed");
}

AnnotationStore::ProjectState& AnnotationStore::state(const std::string& project_id) {
  auto it = projects_.find(project_id);
  if (it == projects_.end()) throw NotFound("no project '" + project_id + "'");
  return *it->second;
}

const AnnotationStore::ProjectState& AnnotationStore::state(const std::string& project_id) const {
  auto it = projects_.find(project_id);
  if (it == projects_.end()) throw NotFound("no project '" + project_id + "'");
  return *it->second;
}

void AnnotationStore::apply(const json& event) {
  const auto type = event.at("event").get<std::string>();
  const auto id = event.at("project_id").get<std::string>();
  if (type == "project_created") {
    auto st = std::make_unique<ProjectState>();
    st->doc = document_from_json(event.at("document"));
    st->tables = select_blocks(st->doc, kTableKinds);
    st->texts = select_blocks(st->doc, kTextKinds);
    st->info.project_id = id;
    st->info.doc_id = st->doc.doc_id;
    st->info.annotator_ids = event.at("annotators").get<std::vector<std::string>>();
    st->info.annotation_mode = event.value("mode", "text");
    st->info.task_count = st->tables.size();
    projects_[id] = std::move(st);
  } else if (type == "label") {
    auto& st = state(id);
    LabelEvent e{id,
                 event.at("annotator_id").get<std::string>(),
                 event.at("table_id").get<std::string>(),
                 event.at("text_block_id").get<std::string>(),
                 event.at("label").get<int>(),
                 event.at("revision").get<std::uint64_t>(),
                 event.value("timestamp", "")};
    st.labels[{e.annotator_id, e.table_id, e.text_block_id}] = {e.label, e.revision};
    st.history.push_back(std::move(e));
  } else if (type == "resolution") {
    auto& st = state(id);
    st.resolutions[{event.at("table_id").get<std::string>(),
                    event.at("text_block_id").get<std::string>()}] = {
        event.at("label").get<int>(), event.value("note", "")};
    if (st.info.status == ProjectStatus::Open) st.info.status = ProjectStatus::Reconciling;
  } else if (type == "finalized") {
    auto& st = state(id);
    st.info.status = ProjectStatus::Finalized;
    st.info.warnings_acknowledged = event.value("acknowledged", false);
  } else {
    throw StorageError("unknown event type '" + type + "'");
  }
}

Project AnnotationStore::create_project(const Document& doc, std::vector<std::string> annotators,
                                        std::string annotation_mode) {
  std::set<std::string> distinct(annotators.begin(), annotators.end());
  if (distinct.size() != annotators.size()) throw ValidationError("annotator ids must be distinct");
  if (annotators.size() < 2) {
    throw TooFewAnnotators("consensus annotation needs at least two annotators");
  }
  for (const auto& a : annotators) {
    if (a.empty()) throw ValidationError("annotator ids must be non-empty");
  }
  if (annotation_mode != "text" && annotation_mode != "image") {
    throw ValidationError("annotation mode must be 'text' or 'image'");
  }
  const Document checked = validated(doc);

  std::unique_lock lock(mutex_);
  char id[32];
  std::snprintf(id, sizeof id, "p%04zu", projects_.size() + 1);
  const json event{{"event", "project_created"},
                   {"project_id", id},
                   {"document", document_to_json(checked)},
                   {"annotators", annotators},
                   {"mode", annotation_mode}};
  append(event);
  apply(event);
  return state(id).info;
}

Project AnnotationStore::project(const std::string& project_id) const {
  std::shared_lock lock(mutex_);
  return state(project_id).info;
}

std::vector<Project> AnnotationStore::projects() const {
  std::shared_lock lock(mutex_);
  std::vector<Project> out;
  for (const auto& [_, st] : projects_) out.push_back(st->info);
  return out;
}

Document AnnotationStore::document(const std::string& project_id) const {
  std::shared_lock lock(mutex_);
  return state(project_id).doc;
}

std::vector<Task> AnnotationStore::tasks(const std::string& project_id) const {
  std::shared_lock lock(mutex_);
  const auto& st = state(project_id);
  std::vector<Task> out;
  for (const Block* t : st.tables) {
    Task task{t->block_id, t, {}};
    for (const Block* s : st.texts) {
      TaskCandidate c{s, {}};
      for (const auto& a : st.info.annotator_ids) {
        auto it = st.labels.find({a, t->block_id, s->block_id});
        if (it != st.labels.end()) c.labels[a] = it->second;
      }
      task.candidates.push_back(std::move(c));
    }
    out.push_back(std::move(task));
  }
  return out;
}

std::uint64_t AnnotationStore::submit_label(LabelEvent event) {
  if (event.label != 0 && event.label != 1) throw ValidationError("label must be 0 or 1");
  std::unique_lock lock(mutex_);
  auto& st = state(event.project_id);
  if (st.info.status != ProjectStatus::Open) {
    throw ProjectClosed("project '" + event.project_id + "' is " +
                        std::string(to_string(st.info.status)) + "; labeling is closed");
  }
  const auto& ids = st.info.annotator_ids;
  if (std::find(ids.begin(), ids.end(), event.annotator_id) == ids.end()) {
    throw UnknownAnnotator("annotator '" + event.annotator_id + "' is not on this project");
  }
  if (!st.is_table(event.table_id)) throw UnknownBlock("'" + event.table_id + "' is not a Table block");
  if (!st.is_text(event.text_block_id)) {
    throw UnknownBlock("'" + event.text_block_id + "' is not a Text/List block");
  }

  CurrentLabel current;
  if (auto it = st.labels.find({event.annotator_id, event.table_id, event.text_block_id});
      it != st.labels.end()) {
    current = it->second;
  }
  if (event.revision == 0) event.revision = current.revision + 1;
  if (event.revision == current.revision && current.revision > 0 && event.label == current.label) {
    return current.revision;
  }
  if (event.revision != current.revision + 1) {
    throw StaleRevision("revision " + std::to_string(event.revision) + " is stale; current is " +
                        std::to_string(current.revision));
  }
  event.timestamp = utc_timestamp();
  const json record{{"event", "label"},
                    {"project_id", event.project_id},
                    {"annotator_id", event.annotator_id},
                    {"table_id", event.table_id},
                    {"text_block_id", event.text_block_id},
                    {"label", event.label},
                    {"revision", event.revision},
                    {"timestamp", event.timestamp}};
  append(record);
  apply(record);
  return event.revision;
}

std::vector<ConflictRecord> AnnotationStore::list_conflicts(const std::string& project_id) const {
  std::shared_lock lock(mutex_);
  return state(project_id).conflicts();
}

ConflictRecord AnnotationStore::resolve_conflict(const std::string& project_id,
                                                 const std::string& table_id,
                                                 const std::string& text_block_id,
                                                 int final_label, const std::string& note) {
  if (final_label != 0 && final_label != 1) throw ValidationError("final label must be 0 or 1");
  std::unique_lock lock(mutex_);
  auto& st = state(project_id);
  if (st.info.status == ProjectStatus::Finalized) {
    throw ProjectClosed("project '" + project_id + "' is finalized");
  }
  if (!st.is_table(table_id) || !st.is_text(text_block_id)) {
    throw UnknownBlock("(" + table_id + ", " + text_block_id + ") is not a candidate pair");
  }
  auto labels = st.pair_labels(table_id, text_block_id);
  if (st.resolutions.contains({table_id, text_block_id}) || !ProjectState::disagree(labels)) {
    throw NotInConflict("(" + table_id + ", " + text_block_id + ") is not an open conflict");
  }
  const json record{{"event", "resolution"}, {"project_id", project_id},
                    {"table_id", table_id},   {"text_block_id", text_block_id},
                    {"label", final_label},   {"note", note}};
  append(record);
  apply(record);
  return {table_id, text_block_id, std::move(labels), final_label, note};
}

std::vector<ProjectWarning> AnnotationStore::warnings(const std::string& project_id) const {
  std::shared_lock lock(mutex_);
  return state(project_id).warnings();
}

Project AnnotationStore::finalize(const std::string& project_id, bool acknowledge_warnings) {
  std::unique_lock lock(mutex_);
  auto& st = state(project_id);
  if (st.info.status == ProjectStatus::Finalized) {
    throw ProjectClosed("project '" + project_id + "' is already finalized");
  }
  const auto open = st.conflicts().size();
  if (open > 0) {
    throw FinalizeBlocked(std::to_string(open) + " conflict(s) still need a resolution");
  }
  const auto pending = st.warnings();
  if (!pending.empty() && !acknowledge_warnings) {
    throw FinalizeBlocked(std::to_string(pending.size()) +
                          " warning(s) must be acknowledged before finalizing");
  }
  const json record{{"event", "finalized"},
                    {"project_id", project_id},
                    {"acknowledged", acknowledge_warnings}};
  append(record);
  apply(record);
  return st.info;
}

std::vector<AnnotationTriplet> AnnotationStore::export_triplets(const std::string& project_id) const {
  std::shared_lock lock(mutex_);
  const auto& st = state(project_id);
  if (st.info.status != ProjectStatus::Finalized) {
    throw NotFinalized("project '" + project_id + "' is not finalized");
  }
  return st.consensus();
}

std::string AnnotationStore::export_jsonl(const std::string& project_id) const {
  std::vector<json> rows;
  for (const auto& t : export_triplets(project_id)) rows.push_back(triplet_to_json(t));
  return write_jsonl(rows);
}

std::vector<LabelEvent> AnnotationStore::label_history(const std::string& project_id) const {
  std::shared_lock lock(mutex_);
  return state(project_id).history;
}

json project_to_json(const Project& p) {
  return {{"project_id", p.project_id},
          {"doc_id", p.doc_id},
          {"annotator_ids", p.annotator_ids},
          {"status", std::string(to_string(p.status))},
          {"annotation_mode", p.annotation_mode},
          {"task_count", p.task_count},
          {"warnings_acknowledged", p.warnings_acknowledged}};
}

json task_to_json(const Task& t, const std::string& doc_id, bool with_image) {
  json candidates = json::array();
  for (const auto& c : t.candidates) {
    json labels = json::object();
    for (const auto& [a, l] : c.labels) {
      labels[a] = {{"label", l.label == 1 ? "related" : "unrelated"}, {"revision", l.revision}};
    }
    candidates.push_back({{"block_id", c.block->block_id},
                          {"page_id", c.block->page_id},
                          {"type", std::string(to_string(c.block->kind))},
                          {"text", c.block->text},
                          {"labels", std::move(labels)}});
  }
  json task{{"task_id", t.task_id},
            {"table_id", t.table->block_id},
            {"page_id", t.table->page_id},
            {"table_text", t.table->text},
            {"bbox", {t.table->bbox.x0, t.table->bbox.y0, t.table->bbox.x1, t.table->bbox.y1}},
            {"candidates", std::move(candidates)}};
  if (with_image) {
    task["image_url"] = "/pages/" + doc_id + "/" + std::to_string(t.table->page_id);
  }
  return task;
}

json label_event_to_json(const LabelEvent& e) {
  return {{"project_id", e.project_id},
          {"annotator_id", e.annotator_id},
          {"table_id", e.table_id},
          {"text_block_id", e.text_block_id},
          {"label", e.label == 1 ? "related" : "unrelated"},
          {"revision", e.revision},
          {"timestamp", e.timestamp}};
}

json warning_to_json(const ProjectWarning& w) {
  return {{"kind", w.kind}, {"table_id", w.table_id}, {"page_id", w.page_id}, {"detail", w.detail}};
}

int http_status_for(const std::string& code) {
  static const std::map<std::string, int> kStatus{
      {"NotFound", 404},       {"StaleRevision", 409},   {"ProjectClosed", 409},
      {"NotInConflict", 409},  {"NotFinalized", 409},    {"FinalizeBlocked", 409},
      {"TransportError", 502}, {"ProtocolError", 502},   {"ScorerError", 502},
      {"ParseFailure", 502},   {"StorageError", 500},    {"InternalError", 500},
  };
  auto it = kStatus.find(code);
  return it == kStatus.end() ? 400 : it->second;
}

// --- HTTP -------------------------------------------------------------------

struct HttpService::Impl {
  AnnotationStore& store;
  ServiceOptions options;
  httplib::Server server;
  int bound_port = -1;

  Impl(AnnotationStore& s, ServiceOptions o) : store(s), options(std::move(o)) { routes(); }

  static void send_json(httplib::Response& res, const json& body, int status = 200) {
    res.status = status;
    res.set_content(canonical_dump(body) + "\n", "application/json");
  }

  static void send_error(httplib::Response& res, const std::string& code,
                         const std::string& detail) {
    send_json(res, {{"error", code}, {"detail", detail}}, http_status_for(code));
  }

  template <typename Handler>
  static httplib::Server::Handler guarded(Handler handler) {
    return [handler](const httplib::Request& req, httplib::Response& res) {
      try {
        handler(req, res);
      } catch (const Error& e) {
        send_error(res, e.code(), e.what());
      } catch (const json::exception& e) {
        send_error(res, "SchemaError", e.what());
      } catch (const std::exception& e) {
        send_error(res, "InternalError", e.what());
      }
    };
  }

  static int parse_label(const json& v) {
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      if (s == "related") return 1;
      if (s == "unrelated") return 0;
    } else if (v.is_number_integer()) {
      const int l = v.get<int>();
      if (l == 0 || l == 1) return l;
    }
    throw ValidationError("label must be \"related\" or \"unrelated\"");
  }

  bool has_images(const std::string& doc_id) const {
    return !options.images_dir.empty() && std::filesystem::is_directory(options.images_dir / doc_id);
  }

  ScorerConfig scorer_config(const json& body) const {
    ScorerConfig cfg;
    cfg.theta = body.value("theta", cfg.theta);
    cfg.lexical_weight = body.value("lexical_weight", cfg.lexical_weight);
    if (!options.scorer_endpoint.empty()) {
      cfg.scorer_kind = ScorerKind::Remote;
      cfg.remote_endpoint = options.scorer_endpoint;
    }
    cfg.validate();
    return cfg;
  }

  void routes() {
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
      send_json(res, {{"status", "ok"}});
    });

    server.Post("/projects", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_json(req.body, "request body");
      const auto doc = document_from_json(body.at("document"));
      auto annotators = body.at("annotators").get<std::vector<std::string>>();
      const auto mode = body.value("mode", has_images(doc.doc_id) ? "image" : "text");
      const auto project = store.create_project(doc, std::move(annotators), mode);
      json out = project_to_json(project);
      json warnings = json::array();
      for (const auto& w : store.warnings(project.project_id)) {
        if (w.kind == "no_tables") warnings.push_back(warning_to_json(w));
      }
      out["warnings"] = std::move(warnings);
      send_json(res, out, 201);
    }));

    server.Get(R"(/projects/([^/]+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 send_json(res, project_to_json(store.project(req.matches[1])));
               }));

    server.Get(R"(/projects/([^/]+)/tasks)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const std::string id = req.matches[1];
                 const auto project = store.project(id);
                 const bool images = has_images(project.doc_id);
                 json tasks = json::array();
                 for (const auto& t : store.tasks(id)) {
                   tasks.push_back(task_to_json(t, project.doc_id, images));
                 }
                 send_json(res, {{"project_id", id},
                                 {"status", std::string(to_string(project.status))},
                                 {"annotation_mode", project.annotation_mode},
                                 {"annotators", project.annotator_ids},
                                 {"tasks", std::move(tasks)}});
               }));

    server.Post(R"(/projects/([^/]+)/labels)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_json(req.body, "request body");
                  LabelEvent e;
                  e.project_id = req.matches[1];
                  const auto header = req.get_header_value("X-Annotator-Id");
                  e.annotator_id = body.value("annotator_id", header);
                  if (!header.empty() && header != e.annotator_id) {
                    throw ValidationError("annotator id in header and body differ");
                  }
                  e.table_id = body.at("table_id").get<std::string>();
                  e.text_block_id = body.at("text_block_id").get<std::string>();
                  e.label = parse_label(body.at("label"));
                  e.revision = body.value("revision", std::uint64_t{0});
                  const auto rev = store.submit_label(e);
                  send_json(res, {{"project_id", e.project_id},
                                  {"annotator_id", e.annotator_id},
                                  {"table_id", e.table_id},
                                  {"text_block_id", e.text_block_id},
                                  {"label", e.label == 1 ? "related" : "unrelated"},
                                  {"revision", rev}});
                }));

    server.Get(R"(/projects/([^/]+)/conflicts)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const std::string id = req.matches[1];
                 json conflicts = json::array();
                 for (const auto& c : store.list_conflicts(id)) conflicts.push_back(conflict_to_json(c));
                 json warnings = json::array();
                 for (const auto& w : store.warnings(id)) warnings.push_back(warning_to_json(w));
                 send_json(res, {{"project_id", id},
                                 {"status", std::string(to_string(store.project(id).status))},
                                 {"conflicts", std::move(conflicts)},
                                 {"warnings", std::move(warnings)}});
               }));

    server.Post(R"(/projects/([^/]+)/conflicts/resolve)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const auto body = parse_json(req.body, "request body");
                  const auto record = store.resolve_conflict(
                      req.matches[1], body.at("table_id").get<std::string>(),
                      body.at("text_block_id").get<std::string>(),
                      parse_label(body.at("final_label")), body.value("note", ""));
                  send_json(res, conflict_to_json(record));
                }));

    server.Post(R"(/projects/([^/]+)/finalize)",
                guarded([this](const httplib::Request& req, httplib::Response& res) {
                  const auto body = req.body.empty() ? json::object()
                                                     : parse_json(req.body, "request body");
                  const auto project =
                      store.finalize(req.matches[1], body.value("acknowledge_warnings", false));
                  send_json(res, project_to_json(project));
                }));

    server.Get(R"(/projects/([^/]+)/export)",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 res.set_content(store.export_jsonl(req.matches[1]), "application/x-ndjson");
               }));

    server.Post("/parse", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_json(req.body, "request body");
      const auto doc = document_from_json(body.at("document"));
      const auto cfg = scorer_config(body);
      ParseOptions opts;
      if (body.contains("page_window") && !body["page_window"].is_null()) {
        opts.page_window = body["page_window"].get<int>();
      }
      std::unique_ptr<PairScorer> scorer;
      if (cfg.scorer_kind == ScorerKind::Remote) {
        scorer = std::make_unique<RemoteScorer>(cfg);
      } else {
        scorer = std::make_unique<HeuristicScorer>(cfg);
      }
      send_json(res, parse_to_json(parse_semantics(doc, *scorer, cfg, opts)));
    }));

    server.Post("/retrieve", guarded([this](const httplib::Request& req, httplib::Response& res) {
      const auto body = parse_json(req.body, "request body");
      const auto doc = document_from_json(body.at("document"));
      const auto cfg = scorer_config(body);
      Query q;
      const auto& jq = body.at("query");
      if (jq.is_string()) {
        q.query_id = "q";
        q.text = jq.get<std::string>();
      } else {
        q = query_from_json(jq);
      }
      const int k = body.value("k", 3);
      std::unique_ptr<PairScorer> pair_scorer;
      std::unique_ptr<QueryScorer> query_scorer;
      if (cfg.scorer_kind == ScorerKind::Remote) {
        pair_scorer = std::make_unique<RemoteScorer>(cfg);
        query_scorer = std::make_unique<RemoteScorer>(cfg);
      } else {
        pair_scorer = std::make_unique<HeuristicScorer>(cfg);
        query_scorer = std::make_unique<HeuristicScorer>(cfg);
      }
      const auto parsed = body.contains("parse") ? parse_from_json(body["parse"])
                                                 : parse_semantics(doc, *pair_scorer, cfg);
      send_json(res, ranking_to_json(retrieve(parsed, doc, q, k, *query_scorer)));
    }));

    server.Get(R"(/pages/([^/]+)/(\d+))",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const std::string doc_id = req.matches[1];
                 const std::string page = req.matches[2];
                 if (options.images_dir.empty() || doc_id.find("..") != std::string::npos) {
                   throw NotFound("no page images configured");
                 }
                 const auto path = options.images_dir / doc_id / (page + ".png");
                 std::ifstream in(path, std::ios::binary);
                 if (!in) throw NotFound("no image for page " + page + " of '" + doc_id + "'");
                 std::stringstream buffer;
                 buffer << in.rdbuf();
                 res.set_content(buffer.str(), "image/png");
               }));

    if (!options.ui_dir.empty()) server.set_mount_point("/ui", options.ui_dir.string());
  }
};

HttpService::HttpService(AnnotationStore& store, ServiceOptions options)
    : impl_(std::make_unique<Impl>(store, std::move(options))) {}

HttpService::~HttpService() { stop(); }

int HttpService::bind() {
  auto& o = impl_->options;
  if (o.port == 0) {
    impl_->bound_port = impl_->server.bind_to_any_port(o.host);
  } else if (impl_->server.bind_to_port(o.host, o.port)) {
    impl_->bound_port = o.port;
  }
  if (impl_->bound_port <= 0) {
    throw ConfigError("cannot bind " + o.host + ":" + std::to_string(o.port));
  }
  return impl_->bound_port;
}

void HttpService::listen() { impl_->server.listen_after_bind(); }

void HttpService::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

void HttpService::wait_until_ready() const { impl_->server.wait_until_ready(); }

}  // namespace tablescope
