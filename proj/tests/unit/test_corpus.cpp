#include <doctest.h>

#include <cctype>
#include <set>

#include "focalqg/text.hpp"
#include "focalqg/corpus.hpp"
#include "focalqg/error.hpp"
#include "support.hpp"

using namespace focalqg;
using focalqg::testing::error_code_of;

namespace {

Claim make_claim(std::string id, std::string text, std::optional<std::string> source = {},
                 std::optional<std::string> date = {}) {
  Claim c;
  c.id = std::move(id);
  c.text = std::move(text);
  c.source = std::move(source);
  c.date = std::move(date);
  return c;
}

std::vector<std::string> ids(const std::vector<Claim>& claims) {
  std::vector<std::string> out;
  for (const auto& c : claims) out.push_back(c.id);
  return out;
}

}  // namespace

TEST_CASE("a well-formed record maps onto one claim") {
  auto claims = parse_dataset(R"({"id":"c1","claim":"X did Y","questions":["Who is X?"],"answers":["X is Z"]})",
                              DatasetFormat::QaBriefsJsonl);
  REQUIRE(claims.size() == 1);
  CHECK(claims[0].id == "c1");
  CHECK(claims[0].text == "X did Y");
  CHECK(claims[0].gold_questions == std::vector<std::string>{"Who is X?"});
  CHECK(claims[0].gold_answers == std::vector<std::string>{"X is Z"});
  CHECK_FALSE(claims[0].has_metadata());
}

TEST_CASE("validation errors name the line") {
  std::string content = "{\"id\":\"a\",\"claim\":\"ok\"}\n{\"id\":\"b\"}\n";
  try {
    parse_dataset(content, DatasetFormat::QaBriefsJsonl);
    FAIL("expected MissingField");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MissingField);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK(error_code_of([] {
          parse_dataset("{\"id\":\"a\",\"claim\":\"x\"}\n{\"id\":\"a\",\"claim\":\"y\"}", DatasetFormat::QaBriefsJsonl);
        }) == ErrorCode::DuplicateId);
  CHECK(error_code_of([] { parse_dataset("{\"id\":\"a\",\"claim\":\"x\"}\n{oops", DatasetFormat::QaBriefsJsonl); }) ==
        ErrorCode::ParseError);
  CHECK(error_code_of([] { parse_dataset(R"({"id":"a","claim":"   "})", DatasetFormat::QaBriefsJsonl); }) ==
        ErrorCode::MissingField);
  CHECK(error_code_of([] {
          parse_dataset(R"({"id":"a","claim":"x","questions":["q1","q2"],"answers":["a1"]})",
                        DatasetFormat::QaBriefsJsonl);
        }) == ErrorCode::ParseError);
}

TEST_CASE("amazon records use the description as text") {
  auto claims = load_dataset(testing::fixture("amazon_sample.jsonl"), DatasetFormat::AmazonJsonl);
  REQUIRE(claims.size() == 2);
  CHECK_FALSE(claims[0].text.empty());
  CHECK_FALSE(claims[0].gold_questions.empty());
  CHECK_FALSE(claims[0].has_metadata());
}

TEST_CASE("fixture corpus loads") {
  auto claims = load_dataset(testing::fixture("claims25.jsonl"), DatasetFormat::QaBriefsJsonl);
  CHECK(claims.size() == 25);
  std::set<std::string> unique;
  for (const auto& c : claims) {
    unique.insert(c.id);
    CHECK_FALSE(c.text.empty());
    if (!c.gold_answers.empty()) CHECK(c.gold_answers.size() == c.gold_questions.size());
  }
  CHECK(unique.size() == 25);
  auto back = claim_from_json(claim_to_json(claims[0]), DatasetFormat::QaBriefsJsonl);
  CHECK(back.id == claims[0].id);
  CHECK(back.text == claims[0].text);
  CHECK(back.source == claims[0].source);
  CHECK(back.gold_questions == claims[0].gold_questions);
}

TEST_CASE("splits are deterministic partitions with an all-metadata test split") {
  std::vector<Claim> claims;
  for (int i = 0; i < 4; ++i) claims.push_back(make_claim("c" + std::to_string(i), "text", "src", "1/1/18"));
  auto a = make_splits(claims, {1, 1, 1, 1}, 5);
  auto b = make_splits(claims, {1, 1, 1, 1}, 5);
  CHECK(ids(a.train) == ids(b.train));
  CHECK(ids(a.validation) == ids(b.validation));
  CHECK(ids(a.test) == ids(b.test));
  CHECK(ids(a.holdout) == ids(b.holdout));

  auto all = load_dataset(testing::fixture("claims25.jsonl"), DatasetFormat::QaBriefsJsonl);
  for (std::uint64_t seed : {0ULL, 1ULL, 99ULL, 12345ULL}) {
    auto s = make_splits(all, {13, 3, 5, 4}, seed);
    CHECK(s.train.size() == 13);
    CHECK(s.validation.size() == 3);
    CHECK(s.test.size() == 5);
    CHECK(s.holdout.size() == 4);
    std::multiset<std::string> seen;
    for (const auto* part : {&s.train, &s.validation, &s.test, &s.holdout})
      for (const auto& c : *part) seen.insert(c.id);
    std::multiset<std::string> expected;
    for (const auto& c : all) expected.insert(c.id);
    CHECK(seen == expected);
    for (const auto& c : s.test) CHECK(c.has_metadata());
  }
}

TEST_CASE("split size errors") {
  std::vector<Claim> claims;
  for (int i = 0; i < 10; ++i)
    claims.push_back(i < 2 ? make_claim("m" + std::to_string(i), "t", "s", "d") : make_claim("p" + std::to_string(i), "t"));
  CHECK(error_code_of([&] { make_splits(claims, {5, 1, 3, 1}, 1); }) == ErrorCode::InsufficientMetadataClaims);
  CHECK(error_code_of([&] { make_splits(claims, {5, 1, 1, 1}, 1); }) == ErrorCode::SizeMismatch);
}

TEST_CASE("metadata template renders the example sentences") {
  Claim guyana = make_claim("c01",
                            "Miss Universe Guyana 2017 was arrested at London Heathrow airport with 2 kilograms of cocaine",
                            "state-news.com", "11/15/17");
  guyana.gold_questions = {"Who is Miss Universe Guyana 2017?"};
  auto ctx = render_metadata_template(guyana);
  CHECK(ctx.uses_metadata);
  CHECK(ctx.text ==
        "state-news.com reported on 11/15/17 that Miss Universe Guyana 2017 was arrested at London Heathrow airport "
        "with 2 kilograms of cocaine");
  REQUIRE(ctx.source_span);
  CHECK(ctx.text.substr(ctx.source_span->start, ctx.source_span->end - ctx.source_span->start) == "state-news.com");
  REQUIRE(ctx.date_span);
  CHECK(ctx.text.substr(ctx.date_span->start, ctx.date_span->end - ctx.date_span->start) == "11/15/17");

  auto rubio = render_metadata_template(make_claim("r", "The law was violated.", "Marco Rubio", "11/8/18"));
  CHECK(rubio.text == "Marco Rubio reported on 11/8/18 that the law was violated.");

  auto taxes = render_metadata_template(make_claim("t", "Taxes rose."));
  CHECK(taxes.text == "Taxes rose.");
  CHECK_FALSE(taxes.uses_metadata);
  REQUIRE(taxes.offset_map.size() == taxes.text.size());
  for (std::size_t i = 0; i < taxes.offset_map.size(); ++i) {
    CHECK(taxes.offset_map[i].segment == Segment::Claim);
    CHECK(taxes.offset_map[i].position == i);
  }

  // source alone is not enough
  CHECK(render_metadata_template(make_claim("h", "Half metadata.", "x.com")).text == "Half metadata.");
}

TEST_CASE("leading capital kept only for mid-sentence capitalized first words") {
  Claim c = make_claim("c", "Trump signed it.", "a", "b");
  CHECK_FALSE(keeps_leading_capital(c));
  c.gold_questions = {"When did Trump sign it?"};
  CHECK(keeps_leading_capital(c));
  c.gold_questions = {"Trump signed what?"};
  CHECK_FALSE(keeps_leading_capital(c));
}

TEST_CASE("offset map round-trips every character and covers the text once") {
  auto claims = load_dataset(testing::fixture("claims25.jsonl"), DatasetFormat::QaBriefsJsonl);
  for (const auto& claim : claims) {
    CAPTURE(claim.id);
    auto ctx = render_metadata_template(claim);
    CHECK(render_metadata_template(claim).text == ctx.text);
    REQUIRE(ctx.offset_map.size() == ctx.text.size());
    bool first_alpha_seen = false;
    for (std::size_t i = 0; i < ctx.text.size(); ++i) {
      const auto& e = ctx.offset_map[i];
      char got = ctx.text[i];
      switch (e.segment) {
        case Segment::Claim: {
          char want = claim.text.at(e.position);
          if (!first_alpha_seen && std::isalpha(static_cast<unsigned char>(want))) {
            first_alpha_seen = true;
            CHECK(std::tolower(static_cast<unsigned char>(got)) == std::tolower(static_cast<unsigned char>(want)));
          } else {
            CHECK(got == want);
          }
          break;
        }
        case Segment::Source: CHECK(got == claim.source->at(e.position)); break;
        case Segment::Date: CHECK(got == claim.date->at(e.position)); break;
        case Segment::Template: break;
      }
    }
    CHECK(ctx.text.substr(ctx.claim_span.start, ctx.claim_span.end - ctx.claim_span.start).size() == claim.text.size());
  }
}
