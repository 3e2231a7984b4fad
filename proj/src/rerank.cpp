#include "focalqg/rerank.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <spdlog/spdlog.h>

#include "focalqg/error.hpp"
#include "focalqg/metrics.hpp"
#include "focalqg/parallel.hpp"
#include "focalqg/simd/kernels.hpp"
#include "focalqg/text.hpp"

namespace focalqg {

namespace {

constexpr const char* kCheckpointFormat = "focalqg-linear-reranker";
constexpr int kCheckpointVersion = 1;

double directed_bleu(const Tokens& hyp, const Tokens& ref) {
  return bleu(hyp, std::vector<Tokens>{ref}, 4, BleuSmoothing::AddOneHighOrder);
}

std::vector<bool> survivor_flags(const std::vector<QuestionCandidate>& candidates, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0))
    fail(ErrorCode::InvalidArgument, "dedup threshold must be in (0, 1]");
  std::vector<bool> keep(candidates.size(), false);
  std::vector<Tokens> tokens;
  std::vector<std::size_t> kept;
  std::set<std::string> seen;
  tokens.reserve(candidates.size());
  for (const auto& c : candidates) tokens.push_back(tokenize(c.text));
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    if (seen.count(candidates[j].text)) continue;
    bool dup = false;
    for (std::size_t i : kept) {
      double s = std::max(directed_bleu(tokens[j], tokens[i]), directed_bleu(tokens[i], tokens[j]));
      if (s >= threshold) {
        dup = true;
        break;
      }
    }
    if (dup) continue;
    keep[j] = true;
    kept.push_back(j);
    seen.insert(candidates[j].text);
  }
  return keep;
}

std::vector<double> unit(const EmbeddingVector& v) {
  std::vector<double> out = v.values;
  double norm = std::sqrt(simd::squared_norm(out));
  if (norm > 0.0)
    for (double& x : out) x /= norm;
  return out;
}

}  // namespace

double sym_bleu(std::string_view a, std::string_view b) {
  Tokens ta = tokenize(a), tb = tokenize(b);
  return std::max(directed_bleu(ta, tb), directed_bleu(tb, ta));
}

std::vector<QuestionCandidate> deduplicate(const std::vector<QuestionCandidate>& candidates, double threshold) {
  std::vector<bool> keep = survivor_flags(candidates, threshold);
  std::vector<QuestionCandidate> out;
  for (std::size_t i = 0; i < candidates.size(); ++i)
    if (keep[i]) out.push_back(candidates[i]);
  return out;
}

std::vector<QuestionCandidate> mark_duplicates(std::vector<QuestionCandidate> candidates, double threshold) {
  std::vector<bool> keep = survivor_flags(candidates, threshold);
  for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i].dedup_survivor = keep[i];
  return candidates;
}

std::vector<RerankTarget> compute_rerank_targets(const std::vector<QuestionCandidate>& candidates,
                                                 const std::vector<std::string>& gold_questions,
                                                 const Embedder& embedder, std::string_view context,
                                                 std::size_t max_parallel) {
  if (gold_questions.empty()) fail(ErrorCode::EmptyGoldSet, "no gold questions to build targets from");
  std::vector<EmbeddingVector> gold;
  gold.reserve(gold_questions.size());
  for (const auto& q : gold_questions) gold.push_back(embedder.embed(q));

  std::vector<RerankTarget> out(candidates.size());
  parallel_for(candidates.size(), max_parallel, [&](std::size_t i) {
    EmbeddingVector e = embedder.embed(candidates[i].text);
    double best = -1.0;
    for (const auto& g : gold) best = std::max(best, cosine_similarity(e, g));
    out[i] = RerankTarget{candidates[i], std::string(context), best};
  });
  return out;
}

double mse_loss(std::span<const double> predictions, std::span<const double> targets) {
  if (predictions.empty()) fail(ErrorCode::EmptyTrainingSet, "loss over an empty batch");
  return simd::squared_distance(predictions, targets) / static_cast<double>(predictions.size());
}

double LinearModel::predict(std::span<const double> features) const { return simd::dot(weights, features) + bias; }

LinearModel train_linear(const std::vector<std::vector<double>>& features, const std::vector<double>& targets,
                         const TrainOptions& options, TrainTrace* trace) {
  if (features.empty()) fail(ErrorCode::EmptyTrainingSet, "re-ranker training set is empty");
  if (features.size() != targets.size())
    fail(ErrorCode::DimensionMismatch, "features and targets differ in length");
  const std::size_t dim = features.front().size();
  for (const auto& row : features)
    if (row.size() != dim) fail(ErrorCode::DimensionMismatch, "feature rows differ in length");

  LinearModel model;
  model.weights.resize(dim);
  Rng rng(options.seed);
  for (double& w : model.weights) w = options.init_scale * rng.normal();

  const double n = static_cast<double>(features.size());
  std::vector<double> predictions(features.size()), grad(dim);
  auto forward = [&] {
    for (std::size_t i = 0; i < features.size(); ++i) predictions[i] = model.predict(features[i]);
    return mse_loss(predictions, targets);
  };

  double loss = forward();
  if (trace) trace->initial_loss = loss;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_bias = 0.0;
    for (std::size_t i = 0; i < features.size(); ++i) {
      double residual = predictions[i] - targets[i];
      simd::axpy(residual, features[i], grad);
      grad_bias += residual;
    }
    simd::axpy(-options.learning_rate * 2.0 / n, grad, model.weights);
    model.bias -= options.learning_rate * 2.0 * grad_bias / n;

    loss = forward();
    if (!std::isfinite(loss))
      fail(ErrorCode::NonFiniteLoss, "loss became non-finite at epoch " + std::to_string(epoch + 1));
    spdlog::trace("epoch {} loss {:.10g}", epoch + 1, loss);
    if (trace) trace->epoch_loss.push_back(loss);
  }
  if (trace) trace->final_loss = loss;
  return model;
}

LinearReranker::LinearReranker(std::shared_ptr<const Embedder> embedder, bool use_context, LinearModel model,
                               RerankerMetadata metadata)
    : embedder_(std::move(embedder)), use_context_(use_context), model_(std::move(model)), metadata_(std::move(metadata)) {
  if (!embedder_) fail(ErrorCode::InvalidArgument, "re-ranker needs an embedder");
  std::size_t expected = embedder_->dim() * (use_context_ ? 2 : 1);
  if (!model_.weights.empty() && model_.weights.size() != expected)
    fail(ErrorCode::DimensionMismatch, "checkpoint weights do not match the embedder dimension");
}

std::vector<double> LinearReranker::features(std::string_view question, std::string_view context) const {
  std::vector<double> out = unit(embedder_->embed(question));
  if (use_context_) {
    std::vector<double> ctx =
        is_blank(context) ? std::vector<double>(embedder_->dim(), 0.0) : unit(embedder_->embed(context));
    out.insert(out.end(), ctx.begin(), ctx.end());
  }
  return out;
}

double LinearReranker::score(std::string_view question, std::string_view context) const {
  return model_.predict(features(question, context));
}

io::Json LinearReranker::to_json() const {
  return io::Json{{"format", kCheckpointFormat},
                  {"version", kCheckpointVersion},
                  {"embedder", embedder_->config()},
                  {"use_context", use_context_},
                  {"weights", model_.weights},
                  {"bias", model_.bias},
                  {"metadata",
                   {{"trained_on", metadata_.trained_on},
                    {"epochs", metadata_.epochs},
                    {"examples", metadata_.examples},
                    {"learning_rate", metadata_.learning_rate},
                    {"seed", metadata_.seed},
                    {"initial_loss", metadata_.initial_loss},
                    {"final_loss", metadata_.final_loss}}}};
}

LinearReranker LinearReranker::from_json(const io::Json& j) {
  try {
    if (j.at("format").get<std::string>() != kCheckpointFormat)
      fail(ErrorCode::ConfigInvalid, "not a re-ranker checkpoint");
    if (j.at("version").get<int>() != kCheckpointVersion)
      fail(ErrorCode::ConfigInvalid, "unsupported checkpoint version " + j.at("version").dump());
    std::shared_ptr<const Embedder> embedder = make_embedder(j.at("embedder"));
    LinearModel model{j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>()};
    const auto& m = j.at("metadata");
    RerankerMetadata meta{m.value("trained_on", std::string()), m.value("epochs", std::size_t{0}),
                          m.value("examples", std::size_t{0}),  m.value("learning_rate", 0.0),
                          m.value("seed", std::uint64_t{0}),    m.value("initial_loss", 0.0),
                          m.value("final_loss", 0.0)};
    return LinearReranker(std::move(embedder), j.at("use_context").get<bool>(), std::move(model), std::move(meta));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad re-ranker checkpoint: ") + e.what());
  }
}

LinearReranker LinearReranker::load(const std::filesystem::path& path) {
  io::Json j;
  try {
    j = io::Json::parse(io::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
  return from_json(j);
}

void LinearReranker::save(const std::filesystem::path& path) const { io::write_json(path, to_json()); }

LinearReranker train_reranker(const std::vector<RerankTarget>& targets, std::shared_ptr<const Embedder> embedder,
                              bool use_context, const TrainOptions& options, std::string trained_on) {
  if (targets.empty()) fail(ErrorCode::EmptyTrainingSet, "no re-ranker targets");
  LinearReranker shell(embedder, use_context, LinearModel{}, {});
  std::vector<std::vector<double>> x;
  std::vector<double> y;
  x.reserve(targets.size());
  for (const auto& t : targets) {
    x.push_back(shell.features(t.candidate.text, t.context));
    y.push_back(t.target);
  }
  TrainTrace trace;
  LinearModel model = train_linear(x, y, options, &trace);
  spdlog::info("re-ranker trained on {} ({} examples): loss {:.6f} -> {:.6f}", trained_on, targets.size(),
               trace.initial_loss, trace.final_loss);
  RerankerMetadata meta{std::move(trained_on), options.epochs,     targets.size(),  options.learning_rate,
                        options.seed,          trace.initial_loss, trace.final_loss};
  return LinearReranker(std::move(embedder), use_context, std::move(model), std::move(meta));
}

std::vector<QuestionCandidate> rank_by_scores(std::vector<QuestionCandidate> candidates,
                                              const std::vector<double>& scores, std::size_t n) {
  if (n == 0) fail(ErrorCode::InvalidArgument, "top n must be >= 1");
  if (scores.size() != candidates.size()) fail(ErrorCode::DimensionMismatch, "one score per candidate expected");
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::vector<QuestionCandidate> out;
  for (std::size_t k = 0; k < std::min(n, order.size()); ++k) {
    QuestionCandidate c = std::move(candidates[order[k]]);
    c.rerank_score = scores[order[k]];
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<QuestionCandidate> rank_candidates(const std::vector<QuestionCandidate>& candidates,
                                               const LinearReranker& model, std::string_view context, std::size_t n) {
  std::vector<double> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(model.score(c.text, context));
  return rank_by_scores(candidates, scores, n);
}

}  // namespace focalqg
