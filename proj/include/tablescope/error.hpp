#pragma once

#include <stdexcept>
#include <string>

namespace tablescope {

/// Base of every error raised by the library. `code()` is the stable,
/// machine-readable name used in service responses and CLI diagnostics.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& detail)
      : std::runtime_error(detail), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

#define TABLESCOPE_DEFINE_ERROR(Name, Base)                             \
  class Name : public Base {                                            \
   public:                                                              \
    explicit Name(const std::string& detail) : Base(#Name, detail) {}   \
                                                                        \
   protected:                                                           \
    Name(std::string code, const std::string& detail)                   \
        : Base(std::move(code), detail) {}                              \
  }

// Input validation.
TABLESCOPE_DEFINE_ERROR(ValidationError, Error);
TABLESCOPE_DEFINE_ERROR(SchemaError, ValidationError);
TABLESCOPE_DEFINE_ERROR(GeometryError, ValidationError);
TABLESCOPE_DEFINE_ERROR(DuplicateIdError, ValidationError);
TABLESCOPE_DEFINE_ERROR(ConfigError, ValidationError);
TABLESCOPE_DEFINE_ERROR(EmptyQueryError, ValidationError);
TABLESCOPE_DEFINE_ERROR(InvalidK, ValidationError);
TABLESCOPE_DEFINE_ERROR(MismatchError, ValidationError);
TABLESCOPE_DEFINE_ERROR(DocumentMismatchError, ValidationError);
TABLESCOPE_DEFINE_ERROR(LengthMismatch, ValidationError);
TABLESCOPE_DEFINE_ERROR(EmptyGroupError, ValidationError);
TABLESCOPE_DEFINE_ERROR(MissingGoldError, ValidationError);
TABLESCOPE_DEFINE_ERROR(InvalidBatchCount, ValidationError);
TABLESCOPE_DEFINE_ERROR(EmptyContentError, ValidationError);

// Scoring backends. The CLI maps this family to exit status 2.
TABLESCOPE_DEFINE_ERROR(ScorerError, Error);
TABLESCOPE_DEFINE_ERROR(TransportError, ScorerError);
TABLESCOPE_DEFINE_ERROR(ProtocolError, ScorerError);
TABLESCOPE_DEFINE_ERROR(ParseFailure, ScorerError);

// Annotation workflow.
TABLESCOPE_DEFINE_ERROR(WorkflowError, Error);
TABLESCOPE_DEFINE_ERROR(NotFound, WorkflowError);
TABLESCOPE_DEFINE_ERROR(TooFewAnnotators, WorkflowError);
TABLESCOPE_DEFINE_ERROR(UnknownAnnotator, WorkflowError);
TABLESCOPE_DEFINE_ERROR(UnknownBlock, WorkflowError);
TABLESCOPE_DEFINE_ERROR(StaleRevision, WorkflowError);
TABLESCOPE_DEFINE_ERROR(ProjectClosed, WorkflowError);
TABLESCOPE_DEFINE_ERROR(NotInConflict, WorkflowError);
TABLESCOPE_DEFINE_ERROR(NotFinalized, WorkflowError);
TABLESCOPE_DEFINE_ERROR(FinalizeBlocked, WorkflowError);
TABLESCOPE_DEFINE_ERROR(StorageError, Error);

#undef TABLESCOPE_DEFINE_ERROR

}  // namespace tablescope
