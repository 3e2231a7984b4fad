#include "focalqg/error.hpp"

namespace focalqg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::InsufficientMetadataClaims: return "InsufficientMetadataClaims";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::MalformedConllu: return "MalformedConllu";
    case ErrorCode::CyclicTree: return "CyclicTree";
    case ErrorCode::MultipleRoots: return "MultipleRoots";
    case ErrorCode::SpanMismatch: return "SpanMismatch";
    case ErrorCode::EmptyText: return "EmptyText";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::MissingParse: return "MissingParse";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::GenerationTimeout: return "GenerationTimeout";
    case ErrorCode::EmptyOutput: return "EmptyOutput";
    case ErrorCode::AllPointsFailed: return "AllPointsFailed";
    case ErrorCode::EmptyGoldSet: return "EmptyGoldSet";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::UnknownClaimId: return "UnknownClaimId";
    case ErrorCode::DuplicateRating: return "DuplicateRating";
    case ErrorCode::GateViolation: return "GateViolation";
    case ErrorCode::InvalidMatrix: return "InvalidMatrix";
    case ErrorCode::UnmappedQuestion: return "UnmappedQuestion";
    case ErrorCode::InsufficientQuestions: return "InsufficientQuestions";
    case ErrorCode::ConfigInvalid: return "ConfigInvalid";
    case ErrorCode::UpstreamArtifactMissing: return "UpstreamArtifactMissing";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConfigInvalid:
    case ErrorCode::InvalidArgument:
      return ErrorCategory::Config;
    case ErrorCode::BackendUnavailable:
    case ErrorCode::GenerationTimeout:
    case ErrorCode::EmptyOutput:
    case ErrorCode::AllPointsFailed:
      return ErrorCategory::Backend;
    default:
      return ErrorCategory::Data;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace focalqg
