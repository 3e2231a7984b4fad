#include "focalqg/generate.hpp"

#include <algorithm>
#include <array>

#include <spdlog/spdlog.h>

#include "focalqg/parallel.hpp"
#include "focalqg/text.hpp"

namespace focalqg {

namespace {

bool trailing_junk(char c) {
  return c == '?' || c == '.' || c == '!' || c == ',' || c == ';' || c == ':' || c == ' ' || c == '\t';
}

std::string strip_trailing_punct(std::string_view s) {
  std::string out = collapse_whitespace(s);
  while (!out.empty() && trailing_junk(out.back())) out.pop_back();
  return out;
}

constexpr std::array<std::string_view, 8> kWhWords{"who", "what", "when", "where", "which", "why", "how", "whose"};

bool starts_with_wh(std::string_view q, std::size_t& word_len) {
  word_len = q.find(' ');
  if (word_len == std::string_view::npos) word_len = q.size();
  std::string first = ascii_lower(q.substr(0, word_len));
  return std::find(kWhWords.begin(), kWhWords.end(), first) != kWhWords.end();
}

std::string who_or_what(const std::string& focal) {
  bool proper = !focal.empty() && focal[0] >= 'A' && focal[0] <= 'Z';
  return (proper ? "Who is " : "What is ") + focal + "?";
}

}  // namespace

GenerationRequest make_request(const FocalPointSet& set, const FocalPoint& point,
                               const std::optional<std::string>& force_prefix) {
  GenerationRequest r;
  r.claim_id = set.claim_id;
  r.context_text = set.context.text;
  r.focal_text = point.text;
  r.focal_span = {point.char_start, point.char_end};
  r.dep_tag = point.dep_tag;
  r.origin = point.origin;
  r.force_prefix = force_prefix;
  return r;
}

std::string normalize_question(std::string_view raw) {
  std::string body = strip_trailing_punct(trim(raw));
  if (body.empty()) fail(ErrorCode::EmptyOutput, "backend produced an empty question");
  return body + "?";
}

std::string stub_generate(const GenerationRequest& request) {
  std::string focal = strip_trailing_punct(trim(request.focal_text));
  if (focal.empty()) focal = trim(request.focal_text);
  std::string tag = ascii_lower(request.dep_tag);

  std::string question;
  if (request.origin == FocalOrigin::MetadataDate) {
    question = "When did this happen, as reported on " + focal + "?";
  } else if (request.origin == FocalOrigin::MetadataSource) {
    question = who_or_what(focal);
  } else if (tag == "nsubj" || tag == "nsubjpass" || tag == "csubj" || tag == "csubjpass" || tag == "appos") {
    question = who_or_what(focal);
  } else if (tag == "dobj" || tag == "obj" || tag == "iobj" || tag == "dative" || tag == "attr") {
    question = "What is known about " + focal + "?";
  } else if (tag == "pobj" || tag == "prep") {
    question = "What about " + focal + "?";
  } else if (tag == "root" || tag == "ccomp" || tag == "xcomp" || tag == "advcl" || tag == "relcl" || tag == "acl" ||
             tag == "conj" || tag == "pcomp") {
    question = "Is it true that " + focal + "?";
  } else {
    question = "What is " + focal + "?";
  }

  if (request.force_prefix && !request.force_prefix->empty()) {
    const std::string& prefix = *request.force_prefix;
    std::size_t len = 0;
    if (starts_with_wh(question, len))
      question = prefix + question.substr(len);
    else
      question = prefix + " is " + focal + "?";
  }
  return normalize_question(question);
}

std::string StubBackend::generate(const GenerationRequest& request) const { return stub_generate(request); }

ReplayBackend::ReplayBackend(std::map<std::pair<std::string, std::string>, std::string> outputs,
                             std::shared_ptr<const GeneratorBackend> fallback)
    : outputs_(std::move(outputs)), fallback_(std::move(fallback)) {}

ReplayBackend ReplayBackend::from_jsonl(const std::filesystem::path& path,
                                        std::shared_ptr<const GeneratorBackend> fallback) {
  std::map<std::pair<std::string, std::string>, std::string> outputs;
  for (const auto& row : io::read_jsonl(path)) {
    try {
      outputs[{row.value.at("claim_id").get<std::string>(), row.value.at("focal").get<std::string>()}] =
          row.value.at("question").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::ParseError, path.string() + ":" + std::to_string(row.line_number) + ": " + e.what());
    }
  }
  return ReplayBackend(std::move(outputs), std::move(fallback));
}

std::string ReplayBackend::generate(const GenerationRequest& request) const {
  auto it = outputs_.find({request.claim_id, request.focal_text});
  if (it != outputs_.end()) {
    std::string q = normalize_question(it->second);
    if (request.force_prefix && !q.starts_with(*request.force_prefix)) {
      std::size_t len = 0;
      q = starts_with_wh(q, len) ? *request.force_prefix + q.substr(len) : *request.force_prefix + " " + q;
    }
    return q;
  }
  if (fallback_) return fallback_->generate(request);
  fail(ErrorCode::BackendUnavailable,
       "no recorded output for claim '" + request.claim_id + "', focal '" + request.focal_text + "'");
}

HttpBackend::HttpBackend(const std::string& url, http::CallOptions options)
    : endpoint_(http::parse_url(url)), options_(options) {}

std::string HttpBackend::generate(const GenerationRequest& request) const {
  io::Json body{{"context", request.context_text},
                {"focal", request.focal_text},
                {"force_prefix", request.force_prefix ? io::Json(*request.force_prefix) : io::Json(nullptr)}};
  io::Json reply = http::post_json(endpoint_, "/generate", body, options_);
  auto it = reply.find("question");
  if (it == reply.end() || !it->is_string()) fail(ErrorCode::EmptyOutput, "reply has no 'question' string");
  return normalize_question(it->get<std::string>());
}

io::Json candidate_to_json(const QuestionCandidate& c) {
  io::Json j{{"claim_id", c.claim_id},
             {"question", c.text},
             {"focal", focal_point_to_json(c.focal)},
             {"backend", c.backend_id},
             {"dedup_survivor", c.dedup_survivor}};
  j["rerank_score"] = c.rerank_score ? io::Json(*c.rerank_score) : io::Json(nullptr);
  return j;
}

QuestionCandidate candidate_from_json(const io::Json& j) {
  QuestionCandidate c;
  try {
    c.claim_id = j.at("claim_id").get<std::string>();
    c.text = j.at("question").get<std::string>();
    c.focal = focal_point_from_json(j.at("focal"));
    c.backend_id = j.value("backend", std::string());
    c.dedup_survivor = j.value("dedup_survivor", true);
    if (j.contains("rerank_score") && !j.at("rerank_score").is_null()) c.rerank_score = j.at("rerank_score").get<double>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad candidate record: ") + e.what());
  }
  return c;
}

CandidateBatch generate_candidates(const FocalPointSet& focal_set, const GeneratorBackend& backend,
                                   const GenerateOptions& options) {
  const std::size_t n = focal_set.points.size();
  if (n == 0) fail(ErrorCode::InvalidArgument, "claim '" + focal_set.claim_id + "' has no focal points");
  std::vector<std::optional<std::string>> questions(n);
  std::vector<std::optional<GenerationFailure>> failures(n);
  parallel_for(n, options.max_parallel, [&](std::size_t i) {
    const auto& point = focal_set.points[i];
    try {
      questions[i] = backend.generate(make_request(focal_set, point, options.force_prefix));
    } catch (const Error& e) {
      failures[i] = GenerationFailure{point, e.code(), e.what()};
    }
  });

  CandidateBatch batch;
  for (std::size_t i = 0; i < n; ++i) {
    if (questions[i]) {
      batch.candidates.push_back({focal_set.claim_id, *questions[i], focal_set.points[i], backend.id(), std::nullopt, true});
    } else {
      spdlog::warn("claim {}: generation failed for focal '{}': {}", focal_set.claim_id, failures[i]->focal.text,
                   failures[i]->message);
      batch.failures.push_back(std::move(*failures[i]));
    }
  }
  if (batch.candidates.empty())
    fail(ErrorCode::AllPointsFailed, "every generation call failed for claim '" + focal_set.claim_id + "'");
  return batch;
}

}  // namespace focalqg
