#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "tablescope/association.hpp"
#include "tablescope/datasetgen.hpp"

namespace tablescope {

enum class ProjectStatus { Open, Reconciling, Finalized };

std::string_view to_string(ProjectStatus status);

struct Project {
  std::string project_id;
  std::string doc_id;
  std::vector<std::string> annotator_ids;
  ProjectStatus status = ProjectStatus::Open;
  /// "text" (OCR text only) or "image" (page crops shown to annotators).
  std::string annotation_mode = "text";
  std::size_t task_count = 0;
  bool warnings_acknowledged = false;
};

struct LabelEvent {
  std::string project_id;
  std::string annotator_id;
  std::string table_id;
  std::string text_block_id;
  int label = 0;  // 1 related, 0 unrelated
  /// Revision being written. 0 asks the store to take the next one.
  std::uint64_t revision = 0;
  std::string timestamp;
};

struct CurrentLabel {
  int label = 0;
  std::uint64_t revision = 0;
};

struct TaskCandidate {
  const Block* block = nullptr;
  std::map<std::string, CurrentLabel> labels;  // by annotator
};

/// One table with every Text/List block of the document as a candidate.
struct Task {
  std::string task_id;
  const Block* table = nullptr;
  std::vector<TaskCandidate> candidates;
};

struct ProjectWarning {
  std::string kind;  // "no_tables" | "completeness" | "incomplete_task"
  std::string table_id;
  int page_id = 0;
  std::string detail;
};

/// Durable annotation workflow state. Every mutation is appended to a JSON
/// Lines event log before it is applied, and the log is replayed on open.
/// Safe for concurrent use: writers are serialized, readers see a consistent
/// snapshot.
class AnnotationStore {
 public:
  /// An empty path keeps everything in memory.
  explicit AnnotationStore(std::filesystem::path log_path = {});
  ~AnnotationStore();

  AnnotationStore(const AnnotationStore&) = delete;
  AnnotationStore& operator=(const AnnotationStore&) = delete;

  /// Requires at least two annotators. A document without tables yields a
  /// project with zero tasks and a "no_tables" warning.
  Project create_project(const Document& doc, std::vector<std::string> annotators,
                         std::string annotation_mode = "text");

  Project project(const std::string& project_id) const;
  std::vector<Project> projects() const;
  Document document(const std::string& project_id) const;

  /// Tasks in table order. The returned Block pointers stay valid for the
  /// lifetime of the store.
  std::vector<Task> tasks(const std::string& project_id) const;

  /// Optimistic upsert. The event's revision must be exactly one past the
  /// current revision for (annotator, table, text); resubmitting the current
  /// revision with the same label is a no-op. Returns the stored revision.
  std::uint64_t submit_label(LabelEvent event);

  /// Pairs on which annotators who labeled them disagree, unresolved only.
  std::vector<ConflictRecord> list_conflicts(const std::string& project_id) const;

  /// Records a joint decision. The first resolution moves an Open project to
  /// Reconciling, which closes labeling.
  ConflictRecord resolve_conflict(const std::string& project_id, const std::string& table_id,
                                  const std::string& text_block_id, int final_label,
                                  const std::string& note);

  /// Completeness warnings on the current consensus plus pairs that only
  /// some annotators labeled.
  std::vector<ProjectWarning> warnings(const std::string& project_id) const;

  /// Requires no open conflicts; outstanding warnings must be acknowledged.
  Project finalize(const std::string& project_id, bool acknowledge_warnings);

  /// One consensus triplet per table. Throws NotFinalized before finalize.
  std::vector<AnnotationTriplet> export_triplets(const std::string& project_id) const;
  std::string export_jsonl(const std::string& project_id) const;

  /// Every accepted label write, in log order.
  std::vector<LabelEvent> label_history(const std::string& project_id) const;

 private:
  struct ProjectState;

  void append(const json& event);
  void apply(const json& event);
  ProjectState& state(const std::string& project_id);
  const ProjectState& state(const std::string& project_id) const;

  std::filesystem::path log_path_;
  std::ofstream log_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, std::unique_ptr<ProjectState>> projects_;
};

json project_to_json(const Project& p);
json task_to_json(const Task& t, const std::string& doc_id, bool with_image);
json label_event_to_json(const LabelEvent& e);
json warning_to_json(const ProjectWarning& w);

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  /// Model server for /parse and /retrieve; heuristic scoring when empty.
  std::string scorer_endpoint;
  /// Sidecar page images laid out as <dir>/<doc_id>/<page_id>.png.
  std::filesystem::path images_dir;
  /// Static annotation UI bundle mounted at /ui.
  std::filesystem::path ui_dir;
};

/// HTTP front end over an AnnotationStore plus the parse/retrieve endpoints.
class HttpService {
 public:
  HttpService(AnnotationStore& store, ServiceOptions options);
  ~HttpService();

  /// Binds the listening socket; returns the bound port.
  int bind();
  /// Serves until stop(); call bind() first.
  void listen();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// HTTP status used for a library error code.
int http_status_for(const std::string& error_code);

}  // namespace tablescope
