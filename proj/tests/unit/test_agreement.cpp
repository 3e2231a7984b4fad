#include <doctest.h>

#include "focalqg/text.hpp"
#include "focalqg/agreement.hpp"
#include "focalqg/error.hpp"
#include "support.hpp"

using namespace focalqg;
using focalqg::testing::error_code_of;

namespace {

RatingRecord rating(std::string rater, std::string question, std::string system, int i, int c, int r, int info) {
  RatingRecord rec;
  rec.rater_id = std::move(rater);
  rec.question_id = std::move(question);
  rec.system_id = std::move(system);
  rec.intelligibility = i;
  rec.clarity = c;
  rec.relevance = r;
  rec.informativeness = info;
  return rec;
}

const CriterionAgreement& find(const AgreementReport& report, Criterion c) {
  for (const auto& ca : report.criteria)
    if (ca.criterion == c) return ca;
  throw std::runtime_error("criterion missing");
}

}  // namespace

TEST_CASE("Fleiss and Randolph on the two item example") {
  auto m = make_rating_matrix({{0, 3}, {2, 1}});
  CHECK(observed_agreement(m) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(fleiss_expected_agreement(m) == doctest::Approx(5.0 / 9.0).epsilon(1e-15));
  CHECK(fleiss_kappa(m).value == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(randolph_kappa(m).value == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("perfect agreement gives exactly one everywhere") {
  auto m = make_rating_matrix({{3, 0}, {0, 3}, {3, 0}});
  CHECK(fleiss_kappa(m).value == 1.0);
  CHECK(randolph_kappa(m).value == 1.0);
  CHECK(krippendorff_alpha({{0, 0, 0}, {1, 1, 1}, {0, 0, 0}}, AlphaLevel::Nominal).value == 1.0);
  CHECK(krippendorff_alpha({{0, 0}, {3, 3}, {2, 2}}, AlphaLevel::Interval).value == 1.0);
}

TEST_CASE("degenerate inputs are flagged") {
  auto same = make_rating_matrix({{3, 0}, {3, 0}});
  auto f = fleiss_kappa(same);
  CHECK_FALSE(f.defined);
  CHECK(f.flag == "DegenerateMarginals");
  CHECK(randolph_kappa(same).value == 1.0);
  auto a = krippendorff_alpha({{1, 1}, {1, 1, 1}}, AlphaLevel::Nominal);
  CHECK_FALSE(a.defined);
  CHECK(a.flag == "NoVariation");
  // chance-level observed agreement
  auto chance = make_rating_matrix({{1, 1}, {1, 1}});
  CHECK(randolph_kappa(chance).value == doctest::Approx(-1.0));
  auto half = make_rating_matrix({{2, 2}, {4, 0}, {0, 4}});
  CHECK(observed_agreement(half) == doctest::Approx((1.0 / 3.0 + 1.0 + 1.0) / 3.0));
}

TEST_CASE("matrix validation") {
  CHECK(error_code_of([] { make_rating_matrix({{1, 2}, {2, 2}}); }) == ErrorCode::InvalidMatrix);
  CHECK(error_code_of([] { make_rating_matrix({{1, 0}}); }) == ErrorCode::InvalidMatrix);
  CHECK(error_code_of([] { make_rating_matrix({{2}}); }) == ErrorCode::InvalidMatrix);
  CHECK(error_code_of([] { make_rating_matrix({}); }) == ErrorCode::InvalidMatrix);
}

TEST_CASE("Krippendorff nominal four item toy case") {
  // coincidences: o_aa = 2, o_ab = o_ba = 1, o_bb = 4; n_a = 3, n_b = 5, n = 8
  // D_o = 2/8, D_e = 2*3*5/(8*7), alpha = 1 - (1/4)/(15/28) = 8/15
  CHECK(krippendorff_alpha({{0, 0}, {0, 1}, {1, 1}, {1, 1}}, AlphaLevel::Nominal).value ==
        doctest::Approx(8.0 / 15.0).epsilon(1e-15));
  // single-value units are skipped, not counted
  CHECK(krippendorff_alpha({{0, 0}, {0, 1}, {1, 1}, {1, 1}, {0}}, AlphaLevel::Nominal).value ==
        doctest::Approx(8.0 / 15.0).epsilon(1e-15));
}

TEST_CASE("statistics ignore category relabeling") {
  Rng rng(21);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::vector<int>> units;
    for (int u = 0; u < 6; ++u) {
      std::vector<int> values;
      for (int r = 0; r < 3; ++r) values.push_back(static_cast<int>(rng.below(3)));
      units.push_back(values);
    }
    std::vector<int> perm{2, 0, 1};
    auto relabeled = units;
    for (auto& u : relabeled)
      for (int& v : u) v = perm[v];
    auto counts = [](const std::vector<std::vector<int>>& us) {
      std::vector<std::vector<int>> out;
      for (const auto& u : us) {
        std::vector<int> row(3, 0);
        for (int v : u) ++row[v];
        out.push_back(row);
      }
      return out;
    };
    auto m1 = make_rating_matrix(counts(units)), m2 = make_rating_matrix(counts(relabeled));
    CHECK(observed_agreement(m1) == doctest::Approx(observed_agreement(m2)).epsilon(1e-15));
    auto f1 = fleiss_kappa(m1), f2 = fleiss_kappa(m2);
    CHECK(f1.defined == f2.defined);
    if (f1.defined) CHECK(f1.value == doctest::Approx(f2.value).epsilon(1e-12));
    CHECK(randolph_kappa(m1).value == doctest::Approx(randolph_kappa(m2).value).epsilon(1e-12));
    auto a1 = krippendorff_alpha(units, AlphaLevel::Nominal), a2 = krippendorff_alpha(relabeled, AlphaLevel::Nominal);
    CHECK(a1.defined == a2.defined);
    if (a1.defined) CHECK(a1.value == doctest::Approx(a2.value).epsilon(1e-12));
  }
}

TEST_CASE("gate and range checks") {
  CHECK(error_code_of([] { validate_rating(rating("r", "q", "s", 1, 0, 1, 2)); }) == ErrorCode::GateViolation);
  CHECK(error_code_of([] { validate_rating(rating("r", "q", "s", 2, 1, 1, 0)); }) == ErrorCode::ParseError);
  CHECK(error_code_of([] { validate_rating(rating("r", "q", "s", 1, 1, 1, 4)); }) == ErrorCode::ParseError);
  validate_rating(rating("r", "q", "s", 0, 0, 0, 0));
  std::vector<RatingRecord> gated{rating("r1", "q", "s", 1, 1, 1, 1), rating("r2", "q", "s", 1, 1, 0, 3)};
  CHECK(error_code_of([&] { build_rating_matrix(gated, Criterion::Relevance); }) == ErrorCode::GateViolation);
  CHECK(error_code_of([&] { aggregate_human_scores(gated); }) == ErrorCode::GateViolation);
  std::vector<RatingRecord> dup{rating("r1", "q", "s", 1, 1, 1, 1), rating("r1", "q", "s", 1, 1, 1, 2)};
  CHECK(error_code_of([&] { aggregate_human_scores(dup); }) == ErrorCode::DuplicateRating);
}

TEST_CASE("constant ratings give a constant system row") {
  std::vector<RatingRecord> recs;
  for (const char* r : {"r1", "r2", "r3"})
    for (const char* q : {"q1", "q2"}) recs.push_back(rating(r, q, "S", 1, 1, 1, 3));
  auto means = aggregate_human_scores(recs);
  REQUIRE(means.size() == 1);
  CHECK(means[0].intelligibility == 1.0);
  CHECK(means[0].clarity == 1.0);
  CHECK(means[0].relevance == 1.0);
  CHECK(means[0].informativeness == 3.0);
  CHECK(means[0].ratings == 6);
}

TEST_CASE("hand-set ratings fixture") {
  auto records = load_ratings(testing::fixture("ratings.jsonl"));
  REQUIRE(records.size() == 6);
  auto means = aggregate_human_scores(records);
  REQUIRE(means.size() == 2);
  CHECK(means[0].system_id == "A");
  CHECK(means[0].intelligibility == doctest::Approx(1.0));
  CHECK(means[0].clarity == doctest::Approx(2.0 / 3.0));
  CHECK(means[0].relevance == doctest::Approx(1.0));
  CHECK(means[0].informativeness == doctest::Approx(5.0 / 3.0));
  CHECK(means[1].intelligibility == doctest::Approx(2.0 / 3.0));
  CHECK(means[1].clarity == doctest::Approx(2.0 / 3.0));
  CHECK(means[1].relevance == doctest::Approx(1.0 / 3.0));
  CHECK(means[1].informativeness == doctest::Approx(1.0 / 3.0));

  auto report = agreement_report(records);
  const auto& i = find(report, Criterion::Intelligibility);
  CHECK(i.observed == doctest::Approx(2.0 / 3.0));
  CHECK(i.fleiss.value == doctest::Approx(-0.2));
  CHECK(i.randolph.value == doctest::Approx(1.0 / 3.0));
  CHECK(i.alpha.value == doctest::Approx(0.0));
  CHECK(i.alpha_level == AlphaLevel::Nominal);

  const auto& c = find(report, Criterion::Clarity);
  CHECK(c.observed == doctest::Approx(1.0 / 3.0));
  CHECK(c.fleiss.value == doctest::Approx(-0.5));
  CHECK(c.randolph.value == doctest::Approx(-1.0 / 3.0));

  const auto& r = find(report, Criterion::Relevance);
  CHECK(r.fleiss.value == doctest::Approx(0.25));
  CHECK(r.randolph.value == doctest::Approx(1.0 / 3.0));
  CHECK(r.alpha.value == doctest::Approx(3.0 / 8.0));

  const auto& info = find(report, Criterion::Informativeness);
  CHECK(info.observed == doctest::Approx(1.0 / 6.0));
  CHECK(info.fleiss.value == doctest::Approx(-0.25));
  CHECK(info.randolph.value == doctest::Approx(-1.0 / 9.0));
  CHECK(info.alpha_level == AlphaLevel::Interval);
  CHECK(info.alpha.value == doctest::Approx(1.0 / 6.0));

  auto nominal = agreement_report(records, true);
  CHECK(find(nominal, Criterion::Informativeness).alpha_level == AlphaLevel::Nominal);

  auto j = agreement_report_to_json(report);
  CHECK(j.contains("systems"));
  CHECK_FALSE(agreement_report_to_table(report).empty());
}

TEST_CASE("incomplete items are dropped from the Fleiss matrix") {
  auto records = load_ratings(testing::fixture("ratings.jsonl"));
  records.push_back(rating("r1", "q3", "A", 1, 1, 1, 2));
  records.push_back(rating("r2", "q3", "A", 1, 1, 1, 2));
  auto built = build_rating_matrix(records, Criterion::Relevance);
  CHECK(built.matrix.item_ids.size() == 2);
  CHECK(built.dropped_items == std::vector<std::string>{"q3"});
  CHECK(build_rating_matrix(records, Criterion::Informativeness).matrix.categories == 4);
  // alpha keeps the two-rater item
  auto with = krippendorff_alpha(records, Criterion::Relevance, AlphaLevel::Nominal);
  auto without = krippendorff_alpha(load_ratings(testing::fixture("ratings.jsonl")), Criterion::Relevance,
                                    AlphaLevel::Nominal);
  CHECK(with.value != without.value);
}

TEST_CASE("rating json schema") {
  auto r = rating("r9", "q9", "S", 1, 1, 0, 0);
  r.bundle_id = "b1";
  auto j = rating_to_json(r);
  for (const char* key : {"rater_id", "question_id", "system_id", "i", "c", "r", "info"}) CHECK(j.contains(key));
  auto back = rating_from_json(j);
  CHECK(back.relevance == 0);
  CHECK(back.bundle_id == std::optional<std::string>("b1"));
  for (Criterion c : {Criterion::Intelligibility, Criterion::Clarity, Criterion::Relevance, Criterion::Informativeness})
    CHECK(parse_criterion(to_string(c)) == c);
}
