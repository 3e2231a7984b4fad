#include <doctest.h>

#include <httplib.h>

#include <atomic>
#include <set>
#include <thread>

#include "focalqg/text.hpp"
#include "focalqg/error.hpp"
#include "focalqg/generate.hpp"
#include "support.hpp"

using namespace focalqg;
using focalqg::testing::error_code_of;

namespace {

GenerationRequest request(std::string focal, std::string tag, FocalOrigin origin = FocalOrigin::Claim) {
  GenerationRequest r;
  r.claim_id = "c";
  r.context_text = "context mentioning " + focal;
  r.focal_text = std::move(focal);
  r.dep_tag = std::move(tag);
  r.origin = origin;
  return r;
}

class FlakyBackend final : public GeneratorBackend {
 public:
  explicit FlakyBackend(std::string bad) : bad_(std::move(bad)) {}
  std::string generate(const GenerationRequest& r) const override {
    if (r.focal_text == bad_) fail(ErrorCode::GenerationTimeout, "slow");
    return stub_generate(r);
  }
  std::string id() const override { return "flaky"; }

 private:
  std::string bad_;
};

class DeadBackend final : public GeneratorBackend {
 public:
  std::string generate(const GenerationRequest&) const override { fail(ErrorCode::BackendUnavailable, "down"); }
  std::string id() const override { return "dead"; }
};

FocalPointSet three_points() {
  FocalPointSet set;
  set.claim_id = "d1";
  set.context.text = "Dogs bark loudly";
  set.context.claim_id = "d1";
  set.points = {{"Dogs", 0, 4, 1, "nsubj", false, FocalOrigin::Claim},
                {"Dogs bark loudly", 0, 16, 2, "ROOT", false, FocalOrigin::Claim},
                {"loudly", 10, 16, 3, "advmod", false, FocalOrigin::Claim}};
  return set;
}

}  // namespace

TEST_CASE("normalization") {
  CHECK(normalize_question("  who   is  he ") == "who is he?");
  CHECK(normalize_question("Where?!?") == "Where?");
  CHECK(normalize_question("What happened.") == "What happened?");
  CHECK(error_code_of([] { normalize_question(" ?? "); }) == ErrorCode::EmptyOutput);
}

TEST_CASE("stub templates") {
  CHECK(stub_generate(request("NRA head Wayne LaPierre", "nsubj")) == "Who is NRA head Wayne LaPierre?");
  CHECK(stub_generate(request("Miss Universe Guyana 2017", "nsubjpass")) == "Who is Miss Universe Guyana 2017?");
  auto date = stub_generate(request("11/8/18", "metadata_date", FocalOrigin::MetadataDate));
  CHECK(date.find("11/8/18") != std::string::npos);
  CHECK(date.back() == '?');
  auto r = request("the budget", "dobj");
  CHECK(stub_generate(r) == stub_generate(r));
  r.force_prefix = "What";
  CHECK(stub_generate(r).rfind("What", 0) == 0);
  auto p = request("the senator", "nsubj");
  p.force_prefix = "Why";
  CHECK(stub_generate(p).rfind("Why", 0) == 0);
}

TEST_CASE("stub gives distinct strings for distinct focal texts of one claim") {
  auto claims = load_dataset(testing::fixture("claims25.jsonl"), DatasetFormat::QaBriefsJsonl);
  auto parses = load_conllu(testing::fixture("claims25.conllu"));
  for (const auto& claim : claims) {
    auto set = extract_focal_points(claim, parses, true);
    std::map<std::string, std::string> by_text;
    std::set<std::string> questions;
    for (const auto& p : set.points) {
      auto q = stub_generate(make_request(set, p));
      CHECK(q.back() == '?');
      by_text.emplace(p.text, q);
    }
    for (const auto& [text, q] : by_text) questions.insert(q);
    CHECK(questions.size() == by_text.size());
  }
}

TEST_CASE("one candidate per point and fault isolation") {
  auto set = three_points();
  auto healthy = generate_candidates(set, StubBackend());
  REQUIRE(healthy.candidates.size() == 3);
  CHECK(healthy.failures.empty());
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(healthy.candidates[i].focal == set.points[i]);
    CHECK(healthy.candidates[i].backend_id == "stub");
    CHECK(healthy.candidates[i].dedup_survivor);
  }

  auto flaky = generate_candidates(set, FlakyBackend("loudly"));
  CHECK(flaky.candidates.size() == 2);
  REQUIRE(flaky.failures.size() == 1);
  CHECK(flaky.failures[0].focal.text == "loudly");
  CHECK(flaky.failures[0].code == ErrorCode::GenerationTimeout);

  CHECK(error_code_of([&] { generate_candidates(set, DeadBackend()); }) == ErrorCode::AllPointsFailed);

  GenerateOptions par;
  par.max_parallel = 4;
  auto parallel = generate_candidates(set, FlakyBackend("Dogs"), par);
  CHECK(parallel.candidates.size() + parallel.failures.size() == 3);
  CHECK(parallel.candidates[0].focal.text == "Dogs bark loudly");
}

TEST_CASE("candidate json round trip") {
  auto batch = generate_candidates(three_points(), StubBackend());
  auto c = batch.candidates[1];
  c.rerank_score = 0.25;
  c.dedup_survivor = false;
  auto back = candidate_from_json(candidate_to_json(c));
  CHECK(back.text == c.text);
  CHECK(back.focal == c.focal);
  CHECK(back.rerank_score == c.rerank_score);
  CHECK(back.dedup_survivor == false);
}

TEST_CASE("replay backend serves the figure questions") {
  auto claims = load_dataset(testing::fixture("claims25.jsonl"), DatasetFormat::QaBriefsJsonl);
  auto parses = load_conllu(testing::fixture("claims25.conllu"));
  auto set = extract_focal_points(claims.at(0), parses, true);
  auto replay = ReplayBackend::from_jsonl(testing::fixture("replay_c01.jsonl"));
  std::map<std::string, std::string> got;
  for (const auto& p : set.points) {
    try {
      got[p.text] = replay.generate(make_request(set, p));
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::BackendUnavailable);
    }
  }
  CHECK(got.at("Miss Universe Guyana 2017") == "Who is Miss Universe Guyana 2017?");
  CHECK(got.at("11/15/17") == "Where was Miss Universe Guyana arrested in 2017?");
  CHECK(got.at("London Heathrow airport") == "Where is London Heathrow airport?");
  CHECK(got.size() == 3);

  auto with_fallback = ReplayBackend::from_jsonl(testing::fixture("replay_c01.jsonl"), std::make_shared<StubBackend>());
  auto batch = generate_candidates(set, with_fallback);
  CHECK(batch.candidates.size() == set.points.size());
}

TEST_CASE("http backend talks to a generate endpoint") {
  httplib::Server server;
  std::atomic<int> calls{0};
  server.Post("/generate", [&](const httplib::Request& req, httplib::Response& res) {
    ++calls;
    auto body = io::Json::parse(req.body);
    if (body["focal"] == "boom") {
      res.status = 500;
      return;
    }
    if (body["focal"] == "empty") {
      res.set_content(R"({"question": "   "})", "application/json");
      return;
    }
    std::string prefix = body["force_prefix"].is_null() ? "What is" : body["force_prefix"].get<std::string>() + " is";
    res.set_content(io::Json{{"question", prefix + " " + body["focal"].get<std::string>()}}.dump(), "application/json");
  });
  int port = server.bind_to_any_port("127.0.0.1");
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen_after_bind(); });
  server.wait_until_ready();

  http::CallOptions opts;
  opts.timeout = std::chrono::milliseconds(2000);
  opts.retries = 1;
  HttpBackend backend("http://127.0.0.1:" + std::to_string(port), opts);
  CHECK(backend.generate(request("the dog", "dobj")) == "What is the dog?");
  auto forced = request("the dog", "dobj");
  forced.force_prefix = "Who";
  CHECK(backend.generate(forced) == "Who is the dog?");
  int before = calls;
  CHECK(error_code_of([&] { backend.generate(request("boom", "dobj")); }) == ErrorCode::BackendUnavailable);
  CHECK(calls - before == 2);
  CHECK(error_code_of([&] { backend.generate(request("empty", "dobj")); }) == ErrorCode::EmptyOutput);

  server.stop();
  worker.join();
  CHECK(error_code_of([&] { backend.generate(request("the dog", "dobj")); }) == ErrorCode::BackendUnavailable);
}
