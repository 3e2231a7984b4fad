#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "focalqg/jsonl.hpp"

namespace focalqg {

enum class Criterion { Intelligibility, Clarity, Relevance, Informativeness };

std::string_view to_string(Criterion criterion);
Criterion parse_criterion(std::string_view name);

struct RatingRecord {
  std::string rater_id;
  std::string question_id;
  std::string system_id;
  int intelligibility = 0;
  int clarity = 0;
  int relevance = 0;
  int informativeness = 0;
  std::optional<std::string> bundle_id;
  bool partial = false;

  int value(Criterion criterion) const;
};

// {"rater_id", "question_id", "system_id", "i", "c", "r", "info"}, plus the
// optional "bundle_id" and "partial" written by the annotation tool.
RatingRecord rating_from_json(const io::Json& j, std::size_t line_number = 0);
io::Json rating_to_json(const RatingRecord& record);
std::vector<RatingRecord> load_ratings(const std::filesystem::path& path);

// Range checks, then the guideline gate: informativeness must be 0 when any
// of I, C, R is 0. Throws GateViolation.
void validate_rating(const RatingRecord& record);
// validate_rating on every record, then DuplicateRating on a repeated
// (rater, question) pair.
void validate_ratings(const std::vector<RatingRecord>& records);

struct SystemMeans {
  std::string system_id;
  std::size_t ratings = 0;
  double intelligibility = 0.0;
  double clarity = 0.0;
  double relevance = 0.0;
  double informativeness = 0.0;
};

// Sorted by system id.
std::vector<SystemMeans> aggregate_human_scores(const std::vector<RatingRecord>& records);

struct RatingMatrix {
  std::vector<std::string> item_ids;
  std::vector<std::vector<int>> counts;  // items x categories
  int raters = 0;
  int categories = 0;
};

// Checks every row sums to `raters`, raters >= 2, categories >= 2. Throws
// InvalidMatrix.
RatingMatrix make_rating_matrix(std::vector<std::vector<int>> counts);

struct MatrixBuild {
  RatingMatrix matrix;
  std::vector<std::string> dropped_items;
};

// One row per question. Items rated by fewer raters than the most common
// count are dropped. Binary criteria have 2 categories, informativeness 4.
MatrixBuild build_rating_matrix(const std::vector<RatingRecord>& records, Criterion criterion);

struct AgreementValue {
  double value = 0.0;
  bool defined = true;
  std::string flag;  // DegenerateMarginals / NoVariation when undefined
};

// P-bar: mean over items of (sum_k n_ik^2 - n) / (n (n - 1)).
double observed_agreement(const RatingMatrix& matrix);
double fleiss_expected_agreement(const RatingMatrix& matrix);

AgreementValue fleiss_kappa(const RatingMatrix& matrix);
AgreementValue randolph_kappa(const RatingMatrix& matrix);

enum class AlphaLevel { Nominal, Interval };

// One inner vector per unit holding whatever values it received; units with
// fewer than two values are not pairable and are skipped.
AgreementValue krippendorff_alpha(const std::vector<std::vector<int>>& units, AlphaLevel level);
AgreementValue krippendorff_alpha(const std::vector<RatingRecord>& records, Criterion criterion, AlphaLevel level);

struct CriterionAgreement {
  Criterion criterion;
  std::size_t items = 0;
  std::size_t dropped_items = 0;
  double observed = 0.0;
  AgreementValue fleiss;
  AgreementValue randolph;
  AgreementValue alpha;
  AlphaLevel alpha_level = AlphaLevel::Nominal;
};

struct AgreementReport {
  std::vector<SystemMeans> systems;
  std::vector<CriterionAgreement> criteria;
};

// Informativeness uses interval alpha unless `nominal_informativeness`.
AgreementReport agreement_report(const std::vector<RatingRecord>& records, bool nominal_informativeness = false);
io::Json agreement_report_to_json(const AgreementReport& report);
std::string agreement_report_to_table(const AgreementReport& report);

}  // namespace focalqg
