#pragma once

#include <map>
#include <string>
#include <vector>

#include "focalqg/agreement.hpp"
#include "focalqg/evaluate.hpp"
#include "focalqg/focal.hpp"

namespace focalqg {

struct FocalStats {
  std::size_t claims = 0;
  std::size_t min = 0;
  std::size_t max = 0;
  double mean = 0.0;
  std::vector<std::pair<std::string, std::size_t>> per_claim;
};

// Throws MissingParse for a claim without a parse.
FocalStats focal_count_stats(const std::vector<Claim>& claims, const std::map<std::string, ParsedSentence>& parses,
                             bool use_metadata);

enum class FocalSubset { NeOnly, NonNe };

std::string_view to_string(FocalSubset subset);

struct SubsetScores {
  FocalSubset subset = FocalSubset::NeOnly;
  bool empty = false;  // EmptySubset
  std::size_t questions = 0;
  ScoreReport report;
};

// The top_k questions per claim are selected first, then filtered to the
// subset; only claims left with at least one question are scored.
SubsetScores subset_scores(const std::vector<OutputQuestion>& output, const std::vector<Claim>& gold, std::size_t top_k,
                           FocalSubset subset,
                           const std::vector<Metric>& metrics = {Metric::Bleu4, Metric::Rouge2, Metric::Meteor});

struct TagMean {
  std::string tag;
  std::size_t ratings = 0;
  double mean = 0.0;
};

// tag_of maps question_id to its focal point's dep_tag. When system_id is
// non-empty only that system's ratings count. Rows follow `tags`, then "All".
// Throws UnmappedQuestion for a rating whose question has no tag.
std::vector<TagMean> informativeness_by_tag(const std::vector<RatingRecord>& ratings,
                                            const std::map<std::string, std::string>& tag_of,
                                            const std::vector<std::string>& tags, const std::string& system_id = {});

io::Json focal_stats_to_json(const FocalStats& without_meta, const FocalStats* with_meta);
std::string focal_stats_to_table(const FocalStats& without_meta, const FocalStats* with_meta);
io::Json subset_scores_to_json(const std::vector<SubsetScores>& rows);
std::string subset_scores_to_table(const std::vector<SubsetScores>& rows);
io::Json tag_means_to_json(const std::vector<TagMean>& rows);
std::string tag_means_to_table(const std::vector<TagMean>& rows);

}  // namespace focalqg
