#include "focalqg/align.hpp"

#include <spdlog/spdlog.h>

#include "focalqg/error.hpp"

namespace focalqg {

Assignment greedy_assign(const std::vector<std::vector<double>>& scores) {
  Assignment out;
  std::size_t columns = scores.empty() ? 0 : scores.front().size();
  std::vector<bool> taken(columns, false);
  for (std::size_t r = 0; r < scores.size(); ++r) {
    if (scores[r].size() != columns) fail(ErrorCode::InvalidArgument, "ragged score matrix");
    std::optional<std::size_t> best;
    for (std::size_t c = 0; c < columns; ++c) {
      if (taken[c]) continue;
      if (!best || scores[r][c] > scores[r][*best]) best = c;
    }
    if (best) taken[*best] = true;
    else out.unmatched_rows.push_back(r);
    out.column_for_row.push_back(best);
  }
  return out;
}

MatchResult greedy_match(const FocalPointSet& focal_points, const std::vector<std::string>& answers,
                         const Embedder& embedder) {
  if (focal_points.points.empty())
    fail(ErrorCode::InvalidArgument, "claim '" + focal_points.claim_id + "' has no focal points to match");
  std::vector<EmbeddingVector> focal_vecs;
  focal_vecs.reserve(focal_points.points.size());
  for (const auto& p : focal_points.points) focal_vecs.push_back(embedder.embed(p.text));

  std::vector<std::vector<double>> scores;
  scores.reserve(answers.size());
  for (const auto& answer : answers) {
    EmbeddingVector a = embedder.embed(answer);
    std::vector<double> row;
    row.reserve(focal_vecs.size());
    for (const auto& f : focal_vecs) row.push_back(cosine_similarity(a, f));
    scores.push_back(std::move(row));
  }

  Assignment assignment = greedy_assign(scores);
  MatchResult result;
  for (std::size_t r = 0; r < answers.size(); ++r) {
    if (auto c = assignment.column_for_row[r]) result.matches.push_back({r, focal_points.points[*c], scores[r][*c]});
  }
  result.unmatched_answers = assignment.unmatched_rows;
  if (!result.unmatched_answers.empty())
    spdlog::warn("claim {}: {} answer(s) left unmatched ({} focal points)", focal_points.claim_id,
                 result.unmatched_answers.size(), focal_points.points.size());
  return result;
}

io::Json training_example_to_json(const TrainingExample& example) {
  return io::Json{{"claim_id", example.claim_id},
                  {"split", example.split},
                  {"context", example.context_text},
                  {"focal_text", example.focal.text},
                  {"focal_span", {example.focal.char_start, example.focal.char_end}},
                  {"dep_tag", example.focal.dep_tag},
                  {"question", example.gold_question},
                  {"match_score", example.match_score}};
}

TrainingBuild build_training_examples(const DatasetSplits& splits, const std::map<std::string, ParsedSentence>& parses,
                                      const Embedder& embedder, bool use_metadata) {
  TrainingBuild build;
  auto run = [&](const std::vector<Claim>& claims, const char* split_name) {
    for (const auto& claim : claims) {
      FocalPointSet set = extract_focal_points(claim, parses, use_metadata);
      std::vector<std::string> answers;
      std::vector<std::size_t> question_of;
      for (std::size_t q = 0; q < claim.gold_answers.size(); ++q) {
        if (claim.gold_answers[q].empty()) {
          ++build.pairs_missing_answer;
          spdlog::info("claim {}: question {} has no answer, skipped", claim.id, q);
          continue;
        }
        answers.push_back(claim.gold_answers[q]);
        question_of.push_back(q);
      }
      if (answers.empty()) {
        ++build.claims_without_answers;
        spdlog::info("claim {}: no answers, skipped", claim.id);
        continue;
      }
      MatchResult result = greedy_match(set, answers, embedder);
      build.unmatched_answers += result.unmatched_answers.size();
      for (const auto& m : result.matches) {
        build.examples.push_back({claim.id, split_name, set.context.text, m.focal,
                                  claim.gold_questions[question_of[m.answer_index]], m.score});
      }
    }
  };
  run(splits.train, "train");
  run(splits.validation, "validation");
  return build;
}

}  // namespace focalqg
