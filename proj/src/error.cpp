#include "hcoref/error.hpp"

namespace hcoref {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::InconsistentChain: return "InconsistentChain";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::InvalidDocument: return "InvalidDocument";
    case ErrorCode::MissingAnnotations: return "MissingAnnotations";
    case ErrorCode::UnknownSieveName: return "UnknownSieveName";
    case ErrorCode::SameEntity: return "SameEntity";
    case ErrorCode::NotAPronoun: return "NotAPronoun";
    case ErrorCode::CandidateNotPreceding: return "CandidateNotPreceding";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::RaggedDimensions: return "RaggedDimensions";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::NoGoldChains: return "NoGoldChains";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::VocabMismatch: return "VocabMismatch";
    case ErrorCode::TooFewDocuments: return "TooFewDocuments";
    case ErrorCode::ModelModeMismatch: return "ModelModeMismatch";
    case ErrorCode::MissingGold: return "MissingGold";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

static std::string format_message(ErrorCode code, const std::string& message,
                                  int line) {
  std::string out(error_code_name(code));
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  out += ": ";
  out += message;
  return out;
}

Error::Error(ErrorCode code, const std::string& message, int line)
    : std::runtime_error(format_message(code, message, line)),
      code_(code),
      line_(line),
      message_(message) {}

}  // namespace hcoref
