#include "focalqg/analyze.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <set>
#include <unordered_map>

#include <spdlog/spdlog.h>

#include "focalqg/error.hpp"
#include "focalqg/text.hpp"

namespace focalqg {

FocalStats focal_count_stats(const std::vector<Claim>& claims, const std::map<std::string, ParsedSentence>& parses,
                             bool use_metadata) {
  FocalStats stats;
  if (claims.empty()) return stats;
  std::size_t total = 0;
  stats.min = std::numeric_limits<std::size_t>::max();
  for (const auto& claim : claims) {
    std::size_t n = extract_focal_points(claim, parses, use_metadata).points.size();
    stats.per_claim.emplace_back(claim.id, n);
    stats.min = std::min(stats.min, n);
    stats.max = std::max(stats.max, n);
    total += n;
  }
  stats.claims = claims.size();
  stats.mean = static_cast<double>(total) / static_cast<double>(claims.size());
  return stats;
}

std::string_view to_string(FocalSubset subset) { return subset == FocalSubset::NeOnly ? "ne_only" : "non_ne"; }

SubsetScores subset_scores(const std::vector<OutputQuestion>& output, const std::vector<Claim>& gold, std::size_t top_k,
                           FocalSubset subset, const std::vector<Metric>& metrics) {
  if (top_k == 0) fail(ErrorCode::InvalidArgument, "top_k must be >= 1");
  std::unordered_map<std::string, std::vector<const OutputQuestion*>> by_claim;
  for (const auto& q : output) by_claim[q.claim_id].push_back(&q);

  std::vector<OutputQuestion> kept;
  std::set<std::string> claim_ids;
  for (auto& [id, qs] : by_claim) {
    std::stable_sort(qs.begin(), qs.end(), [](auto* a, auto* b) { return a->rank < b->rank; });
    if (qs.size() > top_k) qs.resize(top_k);
  }
  for (const auto& q : output) {
    const auto& top = by_claim[q.claim_id];
    if (std::find(top.begin(), top.end(), &q) == top.end()) continue;
    if (q.is_named_entity != (subset == FocalSubset::NeOnly)) continue;
    kept.push_back(q);
    claim_ids.insert(q.claim_id);
  }

  SubsetScores out;
  out.subset = subset;
  out.questions = kept.size();
  if (kept.empty()) {
    out.empty = true;
    out.report.metrics = metrics;
    for (Metric m : metrics) out.report.corpus[m] = 0.0;
    spdlog::warn("subset {} is empty", to_string(subset));
    return out;
  }
  std::vector<Claim> subset_gold;
  for (const auto& c : gold)
    if (claim_ids.count(c.id)) subset_gold.push_back(c);
  out.report = corpus_evaluate(kept, subset_gold, std::numeric_limits<std::size_t>::max(), metrics);
  return out;
}

std::vector<TagMean> informativeness_by_tag(const std::vector<RatingRecord>& ratings,
                                            const std::map<std::string, std::string>& tag_of,
                                            const std::vector<std::string>& tags, const std::string& system_id) {
  validate_ratings(ratings);
  std::vector<TagMean> rows;
  for (const auto& t : tags) rows.push_back({t, 0, 0.0});
  TagMean all{"All", 0, 0.0};
  for (const auto& r : ratings) {
    if (!system_id.empty() && r.system_id != system_id) continue;
    auto it = tag_of.find(r.question_id);
    if (it == tag_of.end() || it->second.empty())
      fail(ErrorCode::UnmappedQuestion, "rated question " + r.question_id + " has no focal tag");
    std::string tag = ascii_lower(it->second);
    for (auto& row : rows)
      if (ascii_lower(row.tag) == tag) {
        ++row.ratings;
        row.mean += r.informativeness;
      }
    ++all.ratings;
    all.mean += r.informativeness;
  }
  rows.push_back(all);
  for (auto& row : rows)
    if (row.ratings) row.mean /= static_cast<double>(row.ratings);
  return rows;
}

namespace {

io::Json stats_json(const FocalStats& s) {
  io::Json per = io::Json::object();
  for (const auto& [id, n] : s.per_claim) per[id] = n;
  return {{"claims", s.claims}, {"min", s.min}, {"max", s.max}, {"mean", s.mean}, {"per_claim", per}};
}

}  // namespace

io::Json focal_stats_to_json(const FocalStats& without_meta, const FocalStats* with_meta) {
  io::Json j{{"without_metadata", stats_json(without_meta)}};
  if (with_meta) j["with_metadata"] = stats_json(*with_meta);
  return j;
}

std::string focal_stats_to_table(const FocalStats& without_meta, const FocalStats* with_meta) {
  std::string out = "Configuration          Min     Max     Mean\n";
  char buf[128];
  auto row = [&](const char* name, const FocalStats& s) {
    std::snprintf(buf, sizeof buf, "%-20s %5zu %7zu %8.2f\n", name, s.min, s.max, s.mean);
    out += buf;
  };
  row("Without metadata", without_meta);
  if (with_meta) row("With metadata", *with_meta);
  return out;
}

io::Json subset_scores_to_json(const std::vector<SubsetScores>& rows) {
  io::Json out = io::Json::object();
  for (const auto& r : rows) {
    io::Json scores = io::Json::object();
    for (Metric m : r.report.metrics) scores[std::string(metric_name(m))] = scaled(m, r.report.corpus.at(m));
    io::Json row{{"questions", r.questions}, {"claims", r.report.claims}, {"scores", scores}};
    if (r.empty) row["flag"] = "EmptySubset";
    out[std::string(to_string(r.subset))] = row;
  }
  return out;
}

std::string subset_scores_to_table(const std::vector<SubsetScores>& rows) {
  std::string out = "Subset      questions    BLEU-4   ROUGE-2    METEOR\n";
  char buf[160];
  for (const auto& r : rows) {
    auto get = [&](Metric m) {
      auto it = r.report.corpus.find(m);
      return it == r.report.corpus.end() ? 0.0 : scaled(m, it->second);
    };
    std::snprintf(buf, sizeof buf, "%-10s %10zu %9.2f %9.2f %9.2f%s\n", r.subset == FocalSubset::NeOnly ? "NE" : "Non NE",
                  r.questions, get(Metric::Bleu4), get(Metric::Rouge2), get(Metric::Meteor),
                  r.empty ? "  (empty)" : "");
    out += buf;
  }
  return out;
}

io::Json tag_means_to_json(const std::vector<TagMean>& rows) {
  io::Json out = io::Json::array();
  for (const auto& r : rows) {
    io::Json row{{"tag", r.tag}, {"ratings", r.ratings}};
    row["mean"] = r.ratings ? io::Json(r.mean) : io::Json(nullptr);
    out.push_back(row);
  }
  return out;
}

std::string tag_means_to_table(const std::vector<TagMean>& rows) {
  std::string out = "Tag          ratings  informativeness\n";
  char buf[128];
  for (const auto& r : rows) {
    if (r.ratings)
      std::snprintf(buf, sizeof buf, "%-12s %7zu  %15.2f\n", r.tag.c_str(), r.ratings, r.mean);
    else
      std::snprintf(buf, sizeof buf, "%-12s %7zu  %15s\n", r.tag.c_str(), r.ratings, "-");
    out += buf;
  }
  return out;
}

}  // namespace focalqg
