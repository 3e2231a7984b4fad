#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "focalqg/corpus.hpp"
#include "focalqg/error.hpp"
#include "focalqg/focal.hpp"
#include "focalqg/http.hpp"

namespace focalqg {

struct GenerationRequest {
  std::string claim_id;
  std::string context_text;
  std::string focal_text;
  Span focal_span;
  // Not part of the model input; lets template backends pick a pattern.
  std::string dep_tag;
  FocalOrigin origin = FocalOrigin::Claim;
  std::optional<std::string> force_prefix;
};

GenerationRequest make_request(const FocalPointSet& set, const FocalPoint& point,
                               const std::optional<std::string>& force_prefix = std::nullopt);

struct QuestionCandidate {
  std::string claim_id;
  std::string text;
  FocalPoint focal;
  std::string backend_id;
  std::optional<double> rerank_score;
  bool dedup_survivor = true;
};

io::Json candidate_to_json(const QuestionCandidate& c);
QuestionCandidate candidate_from_json(const io::Json& j);

// Trim, collapse inner whitespace, drop trailing punctuation and end with a
// single "?". Throws EmptyOutput when nothing is left.
std::string normalize_question(std::string_view raw);

class GeneratorBackend {
 public:
  virtual ~GeneratorBackend() = default;
  // Returns a normalized question. Throws BackendUnavailable,
  // GenerationTimeout or EmptyOutput.
  virtual std::string generate(const GenerationRequest& request) const = 0;
  virtual std::string id() const = 0;
};

// Deterministic dep-tag keyed templates; needs no model and no network.
class StubBackend final : public GeneratorBackend {
 public:
  std::string generate(const GenerationRequest& request) const override;
  std::string id() const override { return "stub"; }
};

std::string stub_generate(const GenerationRequest& request);

// Serves questions recorded earlier from a real model, keyed by
// (claim_id, focal_text). Misses go to the fallback backend when one is
// given and raise BackendUnavailable otherwise.
class ReplayBackend final : public GeneratorBackend {
 public:
  explicit ReplayBackend(std::map<std::pair<std::string, std::string>, std::string> outputs,
                         std::shared_ptr<const GeneratorBackend> fallback = nullptr);
  static ReplayBackend from_jsonl(const std::filesystem::path& path,
                                  std::shared_ptr<const GeneratorBackend> fallback = nullptr);

  std::string generate(const GenerationRequest& request) const override;
  std::string id() const override { return "replay"; }

 private:
  std::map<std::pair<std::string, std::string>, std::string> outputs_;
  std::shared_ptr<const GeneratorBackend> fallback_;
};

// POST /generate {"context", "focal", "force_prefix"} -> {"question"}.
class HttpBackend final : public GeneratorBackend {
 public:
  HttpBackend(const std::string& url, http::CallOptions options = {});

  std::string generate(const GenerationRequest& request) const override;
  std::string id() const override { return "http"; }

 private:
  http::Endpoint endpoint_;
  http::CallOptions options_;
};

struct GenerationFailure {
  FocalPoint focal;
  ErrorCode code = ErrorCode::BackendUnavailable;
  std::string message;
};

struct CandidateBatch {
  std::vector<QuestionCandidate> candidates;  // focal-set order
  std::vector<GenerationFailure> failures;
};

struct GenerateOptions {
  std::optional<std::string> force_prefix;
  std::size_t max_parallel = 1;
};

// One backend call per focal point. Failures are recorded per point; only
// when every call fails does this throw AllPointsFailed.
CandidateBatch generate_candidates(const FocalPointSet& focal_set, const GeneratorBackend& backend,
                                   const GenerateOptions& options = {});

}  // namespace focalqg
