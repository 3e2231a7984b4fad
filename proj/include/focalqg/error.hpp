#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace focalqg {

enum class ErrorCode {
  // corpus
  MissingField,
  DuplicateId,
  ParseError,
  InsufficientMetadataClaims,
  SizeMismatch,
  // focal
  MalformedConllu,
  CyclicTree,
  MultipleRoots,
  SpanMismatch,
  // align
  EmptyText,
  DimensionMismatch,
  ZeroVector,
  MissingParse,
  // generate
  BackendUnavailable,
  GenerationTimeout,
  EmptyOutput,
  AllPointsFailed,
  // rerank
  EmptyGoldSet,
  EmptyTrainingSet,
  NonFiniteLoss,
  InvalidArgument,
  // metrics
  EmptyReference,
  UnknownClaimId,
  // agreement
  DuplicateRating,
  GateViolation,
  InvalidMatrix,
  // analyze
  UnmappedQuestion,
  // bundle
  InsufficientQuestions,
  // cli
  ConfigInvalid,
  UpstreamArtifactMissing,
  Io,
};

// Coarse grouping used by the CLI to pick an exit code.
enum class ErrorCategory { Config, Data, Backend };

std::string_view to_string(ErrorCode code);
ErrorCategory category_of(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace focalqg
