#include <doctest.h>

#include "focalqg/text.hpp"
#include "focalqg/analyze.hpp"
#include "focalqg/error.hpp"
#include "support.hpp"

using namespace focalqg;
using focalqg::testing::error_code_of;

namespace {

OutputQuestion out(std::string claim, int rank, std::string question, bool ne, std::string tag = "nsubj") {
  OutputQuestion q;
  q.claim_id = std::move(claim);
  q.rank = rank;
  q.question = std::move(question);
  q.is_named_entity = ne;
  q.dep_tag = std::move(tag);
  return q;
}

Claim gold_claim(std::string id, std::vector<std::string> questions) {
  Claim c;
  c.id = std::move(id);
  c.text = "t";
  c.gold_questions = std::move(questions);
  return c;
}

RatingRecord rating(std::string rater, std::string q, int info) {
  RatingRecord r;
  r.rater_id = std::move(rater);
  r.question_id = std::move(q);
  r.system_id = "S";
  r.intelligibility = r.clarity = r.relevance = 1;
  r.informativeness = info;
  return r;
}

}  // namespace

TEST_CASE("single one-token claim") {
  Claim c;
  c.id = "s";
  c.text = "Stop";
  std::map<std::string, ParsedSentence> parses{{"s", ingest_parse("1\tStop\t_\t_\t_\t_\t0\tROOT\t_\t_\n")}};
  auto stats = focal_count_stats({c}, parses, false);
  CHECK(stats.min == 1);
  CHECK(stats.max == 1);
  CHECK(stats.mean == 1.0);
  CHECK(error_code_of([&] { focal_count_stats({c}, {}, false); }) == ErrorCode::MissingParse);
}

TEST_CASE("fixture focal stats are ordered and metadata adds points") {
  auto claims = load_dataset(testing::fixture("claims25.jsonl"), DatasetFormat::QaBriefsJsonl);
  auto parses = load_conllu(testing::fixture("claims25.conllu"));
  auto plain = focal_count_stats(claims, parses, false);
  auto meta = focal_count_stats(claims, parses, true);
  for (const auto* s : {&plain, &meta}) {
    CHECK(s->claims == 25);
    CHECK(s->min >= 1);
    CHECK(static_cast<double>(s->min) <= s->mean);
    CHECK(s->mean <= static_cast<double>(s->max));
  }
  CHECK(meta.mean > plain.mean);
  CHECK(focal_stats_to_json(plain, &meta).dump() == focal_stats_to_json(plain, &meta).dump());
  CHECK_FALSE(focal_stats_to_table(plain, &meta).empty());
}

TEST_CASE("toy corpus split one and one") {
  std::vector<Claim> gold{gold_claim("a", {"Who is Wayne LaPierre?"}), gold_claim("b", {"What did the bill change?"})};
  std::vector<OutputQuestion> output{out("a", 1, "Who is LaPierre?", true), out("b", 1, "What changed?", false)};
  auto ne = subset_scores(output, gold, 2, FocalSubset::NeOnly);
  auto non = subset_scores(output, gold, 2, FocalSubset::NonNe);
  CHECK(ne.questions == 1);
  CHECK(non.questions == 1);
  auto a = score_question("Who is LaPierre?", gold[0].gold_questions, {Metric::Bleu4, Metric::Rouge2, Metric::Meteor});
  auto b = score_question("What changed?", gold[1].gold_questions, {Metric::Bleu4, Metric::Rouge2, Metric::Meteor});
  for (Metric m : {Metric::Bleu4, Metric::Rouge2, Metric::Meteor}) {
    CHECK(ne.report.corpus.at(m) == a.at(m));
    CHECK(non.report.corpus.at(m) == b.at(m));
  }
  CHECK(ne.report.corpus.size() == 3);
}

TEST_CASE("subsets partition the evaluated questions") {
  std::vector<Claim> gold{gold_claim("a", {"Q one?"}), gold_claim("b", {"Q two?"})};
  std::vector<OutputQuestion> output{out("a", 1, "x?", true),  out("a", 2, "y?", false), out("a", 3, "z?", false),
                                     out("b", 2, "w?", false), out("b", 1, "v?", true)};
  auto ne = subset_scores(output, gold, 2, FocalSubset::NeOnly);
  auto non = subset_scores(output, gold, 2, FocalSubset::NonNe);
  auto all = corpus_evaluate(output, gold, 2);
  CHECK(ne.questions + non.questions == all.questions);

  std::vector<OutputQuestion> all_ne{out("a", 1, "x?", true), out("b", 1, "y?", true)};
  auto empty = subset_scores(all_ne, gold, 2, FocalSubset::NonNe);
  CHECK(empty.empty);
  CHECK(empty.questions == 0);
  auto rows = subset_scores_to_json({ne, empty});
  CHECK(rows.size() == 2);
  CHECK(rows[std::string(to_string(FocalSubset::NonNe))]["flag"] == "EmptySubset");
  CHECK_FALSE(rows[std::string(to_string(FocalSubset::NeOnly))].contains("flag"));
  CHECK_FALSE(subset_scores_to_table({ne, non, empty}).empty());
}

TEST_CASE("informativeness by tag") {
  std::map<std::string, std::string> tag_of{{"q1", "nsubj"}, {"q2", "nsubj"}, {"q3", "pobj"}};
  std::vector<RatingRecord> constant{rating("r1", "q1", 3), rating("r1", "q3", 3), rating("r2", "q2", 3)};
  for (const auto& row : informativeness_by_tag(constant, tag_of, {"nsubj", "pobj"})) CHECK(row.mean == 3.0);

  // six ratings: nsubj gets 3, 2, 1, 0 -> 1.5 ; pobj gets 2, 3 -> 2.5 ; all 11/6
  std::vector<RatingRecord> six{rating("r1", "q1", 3), rating("r2", "q1", 2), rating("r1", "q2", 1),
                                rating("r2", "q2", 0), rating("r1", "q3", 2), rating("r2", "q3", 3)};
  auto rows = informativeness_by_tag(six, tag_of, {"nsubj", "pobj", "dobj"});
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].tag == "nsubj");
  CHECK(rows[0].mean == doctest::Approx(1.5));
  CHECK(rows[0].ratings == 4);
  CHECK(rows[1].mean == doctest::Approx(2.5));
  CHECK(rows[2].ratings == 0);
  CHECK(rows[3].tag == "All");
  CHECK(rows[3].mean == doctest::Approx(11.0 / 6.0));
  double weighted = (rows[0].mean * rows[0].ratings + rows[1].mean * rows[1].ratings) / 6.0;
  CHECK(rows[3].mean == doctest::Approx(weighted));

  CHECK(informativeness_by_tag(six, tag_of, {"nsubj"}, "nobody").back().ratings == 0);
  std::vector<RatingRecord> unmapped{rating("r1", "q9", 1)};
  CHECK(error_code_of([&] { informativeness_by_tag(unmapped, tag_of, {"nsubj"}); }) == ErrorCode::UnmappedQuestion);
  CHECK(tag_means_to_json(rows).size() == 4);
  CHECK_FALSE(tag_means_to_table(rows).empty());
}
