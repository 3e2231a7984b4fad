#include <doctest.h>

#include <set>

#include "focalqg/text.hpp"
#include "focalqg/bundle.hpp"
#include "focalqg/error.hpp"
#include "support.hpp"

using namespace focalqg;
using focalqg::testing::error_code_of;

namespace {

std::vector<Claim> claims() {
  std::vector<Claim> out;
  for (int i = 0; i < 3; ++i) {
    Claim c;
    c.id = "c" + std::to_string(i);
    c.text = "Claim number " + std::to_string(i);
    c.source = "site" + std::to_string(i) + ".com";
    c.date = "1/" + std::to_string(i + 1) + "/18";
    c.gold_questions = {"Gold one for " + c.id + "?", "Gold two for " + c.id + "?", "Gold three?"};
    out.push_back(c);
  }
  return out;
}

std::map<std::string, std::vector<OutputQuestion>> systems(int count, int per_claim) {
  std::map<std::string, std::vector<OutputQuestion>> out;
  for (int s = 0; s < count; ++s) {
    std::string name = "sys" + std::to_string(s);
    for (const auto& c : claims())
      for (int r = per_claim; r >= 1; --r) {
        OutputQuestion q;
        q.claim_id = c.id;
        q.rank = r;
        q.question = name + " question " + std::to_string(r) + " on " + c.id + "?";
        q.dep_tag = r == 1 ? "nsubj" : "pobj";
        out[name].push_back(q);
      }
  }
  return out;
}

}  // namespace

TEST_CASE("four systems plus gold give ten items per claim") {
  auto bundle = make_bundle(claims(), systems(4, 3), 2, 7);
  CHECK(bundle.items.size() == 30);
  std::map<std::string, std::map<std::string, int>> per_claim;
  std::set<std::string> ids;
  std::string last_claim;
  std::set<std::string> finished;
  for (const auto& item : bundle.items) {
    ++per_claim[item.claim_id][item.hidden_system_id];
    CHECK(ids.insert(item.question_id).second);
    if (item.claim_id != last_claim) {
      CHECK(finished.insert(item.claim_id).second);  // contiguous
      last_claim = item.claim_id;
    }
    if (item.hidden_system_id != kGoldSystemId) CHECK(item.question_text.find(" question 3 ") == std::string::npos);
  }
  for (const auto& [claim, counts] : per_claim) {
    CHECK(counts.size() == 5);
    for (const auto& [system, n] : counts) CHECK(n == 2);
  }
}

TEST_CASE("minimal bundle") {
  auto bundle = make_bundle(claims(), systems(1, 1), 1, 1);
  CHECK(bundle.items.size() == 6);
  CHECK(bundle.questions_per_system == 1);
  CHECK(bundle.systems == std::vector<std::string>{"sys0"});
}

TEST_CASE("shuffle is deterministic per seed") {
  auto a = make_bundle(claims(), systems(4, 2), 2, 99);
  auto b = make_bundle(claims(), systems(4, 2), 2, 99);
  CHECK(bundle_to_json(a).dump() == bundle_to_json(b).dump());
  CHECK(a.bundle_id == b.bundle_id);
  bool any_difference = false;
  for (std::uint64_t seed = 1; seed < 6 && !any_difference; ++seed) {
    auto c = make_bundle(claims(), systems(4, 2), 2, seed);
    for (std::size_t i = 0; i < a.items.size(); ++i)
      any_difference = any_difference || a.items[i].question_id != c.items[i].question_id;
  }
  CHECK(any_difference);
}

TEST_CASE("insufficient questions") {
  CHECK(error_code_of([] { make_bundle(claims(), systems(2, 1), 2, 1); }) == ErrorCode::InsufficientQuestions);
  auto few_gold = claims();
  few_gold[1].gold_questions = {"Only one?"};
  CHECK(error_code_of([&] { make_bundle(few_gold, systems(1, 2), 2, 1); }) == ErrorCode::InsufficientQuestions);
  auto reserved = systems(1, 2);
  reserved[kGoldSystemId] = reserved.begin()->second;
  CHECK_THROWS_AS(make_bundle(claims(), reserved, 2, 1), Error);
}

TEST_CASE("bundle json hides systems and the key restores them") {
  auto bundle = make_bundle(claims(), systems(2, 2), 2, 3);
  auto j = bundle_to_json(bundle);
  CHECK(j["bundle_id"] == bundle.bundle_id);
  CHECK(j["shuffle_seed"] == 3);
  REQUIRE(j["items"].size() == bundle.items.size());
  for (const auto& item : j["items"]) {
    for (const char* key : {"question_id", "claim_text", "metadata", "question_text", "hidden_system_id"})
      CHECK(item.contains(key));
    CHECK(item["metadata"].contains("source"));
    CHECK_FALSE(item.contains("dep_tag"));
  }
  auto rows = bundle_key_rows(bundle);
  CHECK(rows.size() == bundle.items.size());
  auto tags = tags_from_key(rows);
  for (const auto& item : bundle.items) {
    auto it = tags.find(item.question_id);
    CHECK((it == tags.end() ? std::string() : it->second) == item.dep_tag);
    if (item.hidden_system_id != kGoldSystemId) CHECK_FALSE(item.dep_tag.empty());
  }
}
