#include "focalqg/evaluate.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "focalqg/error.hpp"
#include "focalqg/text.hpp"

namespace focalqg {

std::string_view metric_name(Metric metric) {
  switch (metric) {
    case Metric::Bleu2: return "bleu2";
    case Metric::Bleu4: return "bleu4";
    case Metric::Chrf: return "chrf";
    case Metric::Meteor: return "meteor";
    case Metric::Rouge1: return "rouge1";
    case Metric::Rouge2: return "rouge2";
    case Metric::RougeL: return "rougeL";
    case Metric::Ter: return "ter";
  }
  return "?";
}

const std::vector<Metric>& all_metrics() {
  static const std::vector<Metric> all{Metric::Bleu2,  Metric::Bleu4,  Metric::Chrf,   Metric::Meteor,
                                       Metric::Rouge1, Metric::Rouge2, Metric::RougeL, Metric::Ter};
  return all;
}

Metric parse_metric(std::string_view name) {
  std::string lower = ascii_lower(name);
  for (Metric m : all_metrics())
    if (ascii_lower(metric_name(m)) == lower) return m;
  if (lower == "rouge-l" || lower == "rougel") return Metric::RougeL;
  if (lower == "bleu-2") return Metric::Bleu2;
  if (lower == "bleu-4") return Metric::Bleu4;
  fail(ErrorCode::ConfigInvalid, "unknown metric '" + std::string(name) + "'");
}

std::vector<Metric> parse_metric_list(std::string_view list) {
  if (trim(list) == "all" || is_blank(list)) return all_metrics();
  std::set<Metric> chosen;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    std::size_t comma = list.find(',', pos);
    if (comma == std::string_view::npos) comma = list.size();
    std::string item = trim(list.substr(pos, comma - pos));
    if (!item.empty()) chosen.insert(parse_metric(item));
    pos = comma + 1;
  }
  return {chosen.begin(), chosen.end()};
}

MetricScores score_question(std::string_view hypothesis, const std::vector<std::string>& references,
                            const std::vector<Metric>& metrics) {
  if (references.empty()) fail(ErrorCode::EmptyReference, "no gold questions to score against");
  Tokens hyp = tokenize(hypothesis);
  std::vector<Tokens> refs;
  std::vector<std::string> ref_strings;
  for (const auto& r : references) {
    refs.push_back(tokenize(r));
    ref_strings.push_back(join(refs.back()));
  }
  MetricScores out;
  for (Metric m : metrics) {
    switch (m) {
      case Metric::Bleu2: out[m] = bleu(hyp, refs, 2, BleuSmoothing::AddOneHighOrder); break;
      case Metric::Bleu4: out[m] = bleu(hyp, refs, 4, BleuSmoothing::AddOneHighOrder); break;
      case Metric::Chrf: out[m] = chrf(join(hyp), ref_strings); break;
      case Metric::Meteor: out[m] = meteor(hyp, refs); break;
      case Metric::Rouge1: out[m] = rouge_n(hyp, refs, 1); break;
      case Metric::Rouge2: out[m] = rouge_n(hyp, refs, 2); break;
      case Metric::RougeL: out[m] = rouge_l(hyp, refs); break;
      case Metric::Ter: out[m] = ter(hyp, refs); break;
    }
  }
  return out;
}

io::Json output_question_to_json(const OutputQuestion& q) {
  return io::Json{{"claim_id", q.claim_id},         {"rank", q.rank},       {"question", q.question},
                  {"focal_text", q.focal_text},     {"dep_tag", q.dep_tag}, {"ne", q.is_named_entity},
                  {"score", q.score}};
}

OutputQuestion output_question_from_json(const io::Json& j) {
  OutputQuestion q;
  try {
    q.claim_id = j.at("claim_id").get<std::string>();
    q.rank = j.value("rank", 1);
    q.question = j.at("question").get<std::string>();
    q.focal_text = j.value("focal_text", std::string());
    q.dep_tag = j.value("dep_tag", std::string());
    q.is_named_entity = j.value("ne", false);
    q.score = j.value("score", 0.0);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, std::string("bad ranked record: ") + e.what());
  }
  return q;
}

ScoreReport corpus_evaluate(const std::vector<OutputQuestion>& output, const std::vector<Claim>& gold, std::size_t top_k,
                            const std::vector<Metric>& metrics) {
  if (top_k == 0) fail(ErrorCode::InvalidArgument, "top_k must be >= 1");
  std::unordered_map<std::string, std::vector<const OutputQuestion*>> by_claim;
  std::set<std::string> gold_ids;
  for (const auto& c : gold) gold_ids.insert(c.id);
  for (const auto& q : output) {
    if (!gold_ids.count(q.claim_id)) fail(ErrorCode::UnknownClaimId, "output for unknown claim '" + q.claim_id + "'");
    by_claim[q.claim_id].push_back(&q);
  }

  ScoreReport report;
  report.metrics = metrics;
  MetricScores sums;
  for (Metric m : metrics) sums[m] = 0.0;

  for (const auto& claim : gold) {
    if (claim.gold_questions.empty()) {
      ++report.claims_without_gold;
      spdlog::warn("claim {} has no gold questions; left out of the report", claim.id);
      continue;
    }
    ClaimScores cs;
    cs.claim_id = claim.id;
    auto it = by_claim.find(claim.id);
    std::vector<const OutputQuestion*> questions;
    if (it != by_claim.end()) questions = it->second;
    std::stable_sort(questions.begin(), questions.end(), [](auto* a, auto* b) { return a->rank < b->rank; });
    if (questions.size() > top_k) questions.resize(top_k);

    for (Metric m : metrics) cs.scores[m] = 0.0;
    if (questions.empty()) {
      cs.missing_output = true;
      ++report.missing_output;
      if (cs.scores.count(Metric::Ter)) cs.scores[Metric::Ter] = 1.0;
    } else {
      for (const auto* q : questions) {
        MetricScores s = score_question(q->question, claim.gold_questions, metrics);
        for (Metric m : metrics) cs.scores[m] += s[m];
      }
      for (Metric m : metrics) cs.scores[m] /= static_cast<double>(questions.size());
    }
    cs.questions = questions.size();
    report.questions += questions.size();
    for (Metric m : metrics) sums[m] += cs.scores[m];
    report.per_claim.push_back(std::move(cs));
  }
  report.claims = report.per_claim.size();
  for (Metric m : metrics) report.corpus[m] = report.claims ? sums[m] / static_cast<double>(report.claims) : 0.0;
  return report;
}

double scaled(Metric metric, double value) { return metric == Metric::Ter ? value : 100.0 * value; }

io::Json report_to_json(const ScoreReport& report) {
  io::Json corpus = io::Json::object(), raw = io::Json::object();
  for (Metric m : report.metrics) {
    corpus[std::string(metric_name(m))] = scaled(m, report.corpus.at(m));
    raw[std::string(metric_name(m))] = report.corpus.at(m);
  }
  io::Json per_claim = io::Json::array();
  for (const auto& cs : report.per_claim) {
    io::Json scores = io::Json::object();
    for (Metric m : report.metrics) scores[std::string(metric_name(m))] = cs.scores.at(m);
    per_claim.push_back({{"claim_id", cs.claim_id},
                         {"questions", cs.questions},
                         {"missing_output", cs.missing_output},
                         {"scores", scores}});
  }
  return io::Json{{"scaled", corpus},
                  {"raw", raw},
                  {"counts",
                   {{"claims", report.claims},
                    {"questions", report.questions},
                    {"missing_output", report.missing_output},
                    {"claims_without_gold", report.claims_without_gold}}},
                  {"per_claim", per_claim}};
}

std::string report_to_table(const ScoreReport& report, std::string_view system_name) {
  static const std::map<Metric, const char*> headers{
      {Metric::Bleu2, "BLEU-2"},   {Metric::Bleu4, "BLEU-4"},   {Metric::Chrf, "chrF"},
      {Metric::Meteor, "METEOR"},  {Metric::Rouge1, "ROUGE-1"}, {Metric::Rouge2, "ROUGE-2"},
      {Metric::RougeL, "ROUGE-L"}, {Metric::Ter, "TER"}};
  std::size_t name_w = std::max<std::size_t>(6, system_name.size());
  std::string head = "System" + std::string(name_w - 6, ' ');
  std::string row(system_name);
  row.append(name_w - system_name.size(), ' ');
  char buf[64];
  for (Metric m : report.metrics) {
    std::snprintf(buf, sizeof buf, "  %8s", headers.at(m));
    head += buf;
    if (m == Metric::Ter)
      std::snprintf(buf, sizeof buf, "  %8.4f", report.corpus.at(m));
    else
      std::snprintf(buf, sizeof buf, "  %8.2f", scaled(m, report.corpus.at(m)));
    row += buf;
  }
  std::string out = head + "\n" + std::string(head.size(), '-') + "\n" + row + "\n";
  std::snprintf(buf, sizeof buf, "claims=%zu questions=%zu missing_output=%zu\n", report.claims, report.questions,
                report.missing_output);
  return out + buf;
}

}  // namespace focalqg
