#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "focalqg/corpus.hpp"
#include "focalqg/embed.hpp"
#include "focalqg/focal.hpp"

namespace focalqg {

struct Assignment {
  // Per answer: the chosen column, or nullopt when columns ran out.
  std::vector<std::optional<std::size_t>> column_for_row;
  std::vector<std::size_t> unmatched_rows;
};

// The greedy pass on a precomputed score matrix (rows = answers in dataset
// order, columns = focal points in set order). Each row takes the best
// still-free column; ties go to the lowest column index.
Assignment greedy_assign(const std::vector<std::vector<double>>& scores);

struct Match {
  std::size_t answer_index = 0;
  FocalPoint focal;
  double score = 0.0;
};

struct MatchResult {
  std::vector<Match> matches;  // in answer order
  std::vector<std::size_t> unmatched_answers;
};

MatchResult greedy_match(const FocalPointSet& focal_points, const std::vector<std::string>& answers,
                         const Embedder& embedder);

struct TrainingExample {
  std::string claim_id;
  std::string split;
  std::string context_text;
  FocalPoint focal;
  std::string gold_question;
  double match_score = 0.0;
};

io::Json training_example_to_json(const TrainingExample& example);

struct TrainingBuild {
  std::vector<TrainingExample> examples;
  std::size_t claims_without_answers = 0;
  std::size_t pairs_missing_answer = 0;
  std::size_t unmatched_answers = 0;
};

// Uses the train and validation splits.
TrainingBuild build_training_examples(const DatasetSplits& splits, const std::map<std::string, ParsedSentence>& parses,
                                      const Embedder& embedder, bool use_metadata);

}  // namespace focalqg
