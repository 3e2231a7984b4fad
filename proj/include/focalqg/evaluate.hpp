#pragma once

#include <map>
#include <string>
#include <vector>

#include "focalqg/corpus.hpp"
#include "focalqg/metrics.hpp"

namespace focalqg {

enum class Metric { Bleu2, Bleu4, Chrf, Meteor, Rouge1, Rouge2, RougeL, Ter };

std::string_view metric_name(Metric metric);
Metric parse_metric(std::string_view name);
const std::vector<Metric>& all_metrics();
// Comma-separated names, or "all".
std::vector<Metric> parse_metric_list(std::string_view list);

using MetricScores = std::map<Metric, double>;

// One hypothesis against a set of references, all through the shared
// tokenizer. Report BLEU uses add-one smoothing on orders above one.
MetricScores score_question(std::string_view hypothesis, const std::vector<std::string>& references,
                            const std::vector<Metric>& metrics);

struct OutputQuestion {
  std::string claim_id;
  int rank = 1;
  std::string question;
  std::string focal_text;
  std::string dep_tag;
  bool is_named_entity = false;
  double score = 0.0;
};

io::Json output_question_to_json(const OutputQuestion& q);
OutputQuestion output_question_from_json(const io::Json& j);

struct ClaimScores {
  std::string claim_id;
  std::size_t questions = 0;
  bool missing_output = false;
  MetricScores scores;
};

struct ScoreReport {
  std::vector<Metric> metrics;
  MetricScores corpus;  // unscaled: [0, 1] except TER >= 0
  std::vector<ClaimScores> per_claim;
  std::size_t claims = 0;
  std::size_t questions = 0;
  std::size_t missing_output = 0;
  std::size_t claims_without_gold = 0;
};

// Scores the top_k questions of every gold claim against that claim's gold
// questions; macro-averages within a claim, then across claims. A claim with
// no output scores 0 (TER 1) and is counted in missing_output. Output for a
// claim absent from `gold` raises UnknownClaimId.
ScoreReport corpus_evaluate(const std::vector<OutputQuestion>& output, const std::vector<Claim>& gold, std::size_t top_k,
                            const std::vector<Metric>& metrics = all_metrics());

// Scaled as in the results tables: x100 for everything but TER.
double scaled(Metric metric, double value);

io::Json report_to_json(const ScoreReport& report);
std::string report_to_table(const ScoreReport& report, std::string_view system_name);

}  // namespace focalqg
