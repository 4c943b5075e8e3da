// Error taxonomy shared by every vcass module. Exit codes follow the CLI
// contract: 2 = validation, 3 = backend, 4 = media tool.
#pragma once

#include <stdexcept>
#include <string>

namespace vcass {

enum class ErrorClass {
  Validation = 2,
  Backend = 3,
  MediaTool = 4,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, std::string name, std::string what)
      : std::runtime_error(name + ": " + what),
        cls_(cls),
        name_(std::move(name)),
        detail_(std::move(what)) {}

  ErrorClass error_class() const { return cls_; }
  int exit_code() const { return static_cast<int>(cls_); }
  const std::string& name() const { return name_; }
  const std::string& detail() const { return detail_; }

 private:
  ErrorClass cls_;
  std::string name_;
  std::string detail_;
};

#define VCASS_DEFINE_ERROR(NAME, CLASS)                       \
  class NAME : public Error {                                 \
   public:                                                    \
    explicit NAME(const std::string& what)                    \
        : Error(ErrorClass::CLASS, #NAME, what) {}            \
  }

// media_ingest / av_compose
VCASS_DEFINE_ERROR(FileNotFound, Validation);
VCASS_DEFINE_ERROR(DecoderUnavailable, MediaTool);
VCASS_DEFINE_ERROR(CorruptMedia, MediaTool);
VCASS_DEFINE_ERROR(DecoderFailure, MediaTool);
VCASS_DEFINE_ERROR(MuxerFailure, MediaTool);

// backend clients
VCASS_DEFINE_ERROR(BackendTimeout, Backend);
VCASS_DEFINE_ERROR(BackendRejected, Backend);
VCASS_DEFINE_ERROR(ParseFailure, Backend);
VCASS_DEFINE_ERROR(InstructionInvalid, Backend);

// local data validation
VCASS_DEFINE_ERROR(KbParseError, Validation);
VCASS_DEFINE_ERROR(KbValidationError, Validation);
VCASS_DEFINE_ERROR(AudioInvalid, Validation);
VCASS_DEFINE_ERROR(OverrunError, Validation);
VCASS_DEFINE_ERROR(MissingIntentGroup, Validation);
VCASS_DEFINE_ERROR(OutOfRange, Validation);
VCASS_DEFINE_ERROR(KeyMismatch, Validation);
VCASS_DEFINE_ERROR(ConfigError, Validation);

// orchestrator
VCASS_DEFINE_ERROR(UnknownRun, Validation);
VCASS_DEFINE_ERROR(ConfigDrift, Validation);

#undef VCASS_DEFINE_ERROR

}  // namespace vcass
