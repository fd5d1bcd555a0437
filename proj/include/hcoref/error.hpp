#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hcoref {

enum class ErrorCode {
  MalformedLine,
  InconsistentChain,
  EmptyInput,
  InvalidSpec,
  InvalidDocument,
  MissingAnnotations,
  UnknownSieveName,
  SameEntity,
  NotAPronoun,
  CandidateNotPreceding,
  DimensionMismatch,
  RaggedDimensions,
  EmptyFile,
  NoGoldChains,
  EmptyTrainingSet,
  VocabMismatch,
  TooFewDocuments,
  ModelModeMismatch,
  MissingGold,
  InvalidConfig,
  Io,
};

std::string_view error_code_name(ErrorCode code);

// All recoverable failures in the library are reported through this type.
// `line()` is the 1-based input line for parse errors and 0 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, int line = 0);

  ErrorCode code() const { return code_; }
  int line() const { return line_; }
  // The message without the code prefix.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  int line_;
  std::string message_;
};

}  // namespace hcoref
