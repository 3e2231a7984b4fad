#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "focalqg/embed.hpp"
#include "focalqg/generate.hpp"

namespace focalqg {

// max(BLEU-4(a | b), BLEU-4(b | a)), add-one smoothing above unigrams.
double sym_bleu(std::string_view a, std::string_view b);

// Scans in order and drops a candidate when it is an exact duplicate of, or
// has sym_bleu >= threshold with, an earlier survivor.
std::vector<QuestionCandidate> deduplicate(const std::vector<QuestionCandidate>& candidates, double threshold = 0.8);
// Same decision, but keeps every candidate and sets dedup_survivor.
std::vector<QuestionCandidate> mark_duplicates(std::vector<QuestionCandidate> candidates, double threshold = 0.8);

struct RerankTarget {
  QuestionCandidate candidate;
  std::string context;
  double target = 0.0;
};

// target = max over gold of cosine(emb(candidate), emb(gold)).
std::vector<RerankTarget> compute_rerank_targets(const std::vector<QuestionCandidate>& candidates,
                                                 const std::vector<std::string>& gold_questions,
                                                 const Embedder& embedder, std::string_view context = {},
                                                 std::size_t max_parallel = 1);

// Mean of squared residuals.
double mse_loss(std::span<const double> predictions, std::span<const double> targets);

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;

  double predict(std::span<const double> features) const;
};

struct TrainOptions {
  std::size_t epochs = 2000;
  double learning_rate = 0.1;
  std::uint64_t seed = 13;
  double init_scale = 0.01;
};

struct TrainTrace {
  double initial_loss = 0.0;
  double final_loss = 0.0;
  std::vector<double> epoch_loss;
};

// Full-batch gradient descent on the mean squared error. Throws
// EmptyTrainingSet, DimensionMismatch, NonFiniteLoss.
LinearModel train_linear(const std::vector<std::vector<double>>& features, const std::vector<double>& targets,
                         const TrainOptions& options, TrainTrace* trace = nullptr);

struct RerankerMetadata {
  std::string trained_on;
  std::size_t epochs = 0;
  std::size_t examples = 0;
  double learning_rate = 0.0;
  std::uint64_t seed = 0;
  double initial_loss = 0.0;
  double final_loss = 0.0;
};

// Linear scorer over [unit(emb(question)) ; unit(emb(context))]. Immutable
// once built, so concurrent scoring is safe.
class LinearReranker {
 public:
  LinearReranker(std::shared_ptr<const Embedder> embedder, bool use_context, LinearModel model,
                 RerankerMetadata metadata);

  std::vector<double> features(std::string_view question, std::string_view context) const;
  double score(std::string_view question, std::string_view context) const;

  bool use_context() const { return use_context_; }
  const LinearModel& model() const { return model_; }
  const RerankerMetadata& metadata() const { return metadata_; }
  const Embedder& embedder() const { return *embedder_; }

  io::Json to_json() const;
  static LinearReranker from_json(const io::Json& checkpoint);
  static LinearReranker load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

 private:
  std::shared_ptr<const Embedder> embedder_;
  bool use_context_;
  LinearModel model_;
  RerankerMetadata metadata_;
};

LinearReranker train_reranker(const std::vector<RerankTarget>& targets, std::shared_ptr<const Embedder> embedder,
                              bool use_context, const TrainOptions& options, std::string trained_on);

// Stable sort by score, descending; returns the first min(n, count) with
// rerank_score filled in.
std::vector<QuestionCandidate> rank_by_scores(std::vector<QuestionCandidate> candidates,
                                              const std::vector<double>& scores, std::size_t n);
std::vector<QuestionCandidate> rank_candidates(const std::vector<QuestionCandidate>& candidates,
                                               const LinearReranker& model, std::string_view context, std::size_t n);

}  // namespace focalqg
