#include "focalqg/agreement.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include <spdlog/spdlog.h>

#include "focalqg/error.hpp"

namespace focalqg {

std::string_view to_string(Criterion criterion) {
  switch (criterion) {
    case Criterion::Intelligibility: return "intelligibility";
    case Criterion::Clarity: return "clarity";
    case Criterion::Relevance: return "relevance";
    case Criterion::Informativeness: return "informativeness";
  }
  return "?";
}

Criterion parse_criterion(std::string_view name) {
  for (Criterion c : {Criterion::Intelligibility, Criterion::Clarity, Criterion::Relevance, Criterion::Informativeness})
    if (to_string(c) == name) return c;
  if (name == "i") return Criterion::Intelligibility;
  if (name == "c") return Criterion::Clarity;
  if (name == "r") return Criterion::Relevance;
  if (name == "info") return Criterion::Informativeness;
  fail(ErrorCode::ConfigInvalid, "unknown criterion '" + std::string(name) + "'");
}

int RatingRecord::value(Criterion criterion) const {
  switch (criterion) {
    case Criterion::Intelligibility: return intelligibility;
    case Criterion::Clarity: return clarity;
    case Criterion::Relevance: return relevance;
    case Criterion::Informativeness: return informativeness;
  }
  return 0;
}

RatingRecord rating_from_json(const io::Json& j, std::size_t line_number) {
  RatingRecord r;
  try {
    r.rater_id = j.at("rater_id").get<std::string>();
    r.question_id = j.at("question_id").get<std::string>();
    r.system_id = j.at("system_id").get<std::string>();
    r.intelligibility = j.at("i").get<int>();
    r.clarity = j.at("c").get<int>();
    r.relevance = j.at("r").get<int>();
    r.informativeness = j.at("info").get<int>();
    if (j.contains("bundle_id") && j["bundle_id"].is_string()) r.bundle_id = j["bundle_id"].get<std::string>();
    r.partial = j.value("partial", false);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::ParseError, "rating on line " + std::to_string(line_number) + ": " + e.what());
  }
  return r;
}

io::Json rating_to_json(const RatingRecord& r) {
  io::Json j{{"rater_id", r.rater_id}, {"question_id", r.question_id}, {"system_id", r.system_id},
             {"i", r.intelligibility}, {"c", r.clarity},                {"r", r.relevance},
             {"info", r.informativeness}};
  if (r.bundle_id) j["bundle_id"] = *r.bundle_id;
  if (r.partial) j["partial"] = true;
  return j;
}

std::vector<RatingRecord> load_ratings(const std::filesystem::path& path) {
  std::vector<RatingRecord> out;
  for (const auto& line : io::read_jsonl(path)) out.push_back(rating_from_json(line.value, line.line_number));
  return out;
}

void validate_rating(const RatingRecord& r) {
  auto binary = [](int v) { return v == 0 || v == 1; };
  std::string who = r.rater_id + "/" + r.question_id;
  if (!binary(r.intelligibility) || !binary(r.clarity) || !binary(r.relevance))
    fail(ErrorCode::ParseError, who + ": I, C and R must be 0 or 1");
  if (r.informativeness < 0 || r.informativeness > 3) fail(ErrorCode::ParseError, who + ": info must be in 0..3");
  if (r.informativeness > 0 && std::min({r.intelligibility, r.clarity, r.relevance}) == 0)
    fail(ErrorCode::GateViolation, who + ": informativeness > 0 on a question failing I, C or R");
}

void validate_ratings(const std::vector<RatingRecord>& records) {
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& r : records) {
    validate_rating(r);
    if (!seen.emplace(r.rater_id, r.question_id).second)
      fail(ErrorCode::DuplicateRating, "rater " + r.rater_id + " rated " + r.question_id + " twice");
  }
}

std::vector<SystemMeans> aggregate_human_scores(const std::vector<RatingRecord>& records) {
  validate_ratings(records);
  std::map<std::string, SystemMeans> by_system;
  for (const auto& r : records) {
    SystemMeans& m = by_system[r.system_id];
    m.system_id = r.system_id;
    ++m.ratings;
    m.intelligibility += r.intelligibility;
    m.clarity += r.clarity;
    m.relevance += r.relevance;
    m.informativeness += r.informativeness;
  }
  std::vector<SystemMeans> out;
  for (auto& [id, m] : by_system) {
    double n = static_cast<double>(m.ratings);
    m.intelligibility /= n;
    m.clarity /= n;
    m.relevance /= n;
    m.informativeness /= n;
    out.push_back(m);
  }
  return out;
}

RatingMatrix make_rating_matrix(std::vector<std::vector<int>> counts) {
  if (counts.empty()) fail(ErrorCode::InvalidMatrix, "rating matrix has no items");
  RatingMatrix m;
  m.categories = static_cast<int>(counts.front().size());
  if (m.categories < 2) fail(ErrorCode::InvalidMatrix, "need at least two categories");
  for (const auto& row : counts) {
    if (static_cast<int>(row.size()) != m.categories) fail(ErrorCode::InvalidMatrix, "ragged rating matrix");
    int sum = 0;
    for (int c : row) {
      if (c < 0) fail(ErrorCode::InvalidMatrix, "negative count");
      sum += c;
    }
    if (&row == &counts.front()) m.raters = sum;
    if (sum != m.raters) fail(ErrorCode::InvalidMatrix, "items have different rater counts");
  }
  if (m.raters < 2) fail(ErrorCode::InvalidMatrix, "need at least two raters per item");
  for (std::size_t i = 0; i < counts.size(); ++i) m.item_ids.push_back(std::to_string(i));
  m.counts = std::move(counts);
  return m;
}

MatrixBuild build_rating_matrix(const std::vector<RatingRecord>& records, Criterion criterion) {
  validate_ratings(records);
  const int categories = criterion == Criterion::Informativeness ? 4 : 2;
  std::map<std::string, std::vector<int>> rows;
  std::map<std::string, int> raters;
  for (const auto& r : records) {
    auto& row = rows[r.question_id];
    row.resize(categories, 0);
    ++row[r.value(criterion)];
    ++raters[r.question_id];
  }
  std::map<int, std::size_t> freq;
  for (const auto& [id, n] : raters) ++freq[n];
  int n = 0;
  std::size_t best = 0;
  for (const auto& [k, count] : freq)
    if (count > best || (count == best && k > n)) {
      n = k;
      best = count;
    }

  MatrixBuild build;
  std::vector<std::vector<int>> counts;
  std::vector<std::string> ids;
  for (auto& [id, row] : rows) {
    if (raters[id] != n) {
      build.dropped_items.push_back(id);
      continue;
    }
    counts.push_back(row);
    ids.push_back(id);
  }
  if (!build.dropped_items.empty())
    spdlog::warn("{}: dropped {} item(s) without exactly {} ratings", to_string(criterion), build.dropped_items.size(),
                 n);
  build.matrix = make_rating_matrix(std::move(counts));
  build.matrix.item_ids = std::move(ids);
  return build;
}

double observed_agreement(const RatingMatrix& m) {
  const double n = m.raters;
  double total = 0.0;
  for (const auto& row : m.counts) {
    double sq = 0.0;
    for (int c : row) sq += static_cast<double>(c) * c;
    total += (sq - n) / (n * (n - 1.0));
  }
  return total / static_cast<double>(m.counts.size());
}

double fleiss_expected_agreement(const RatingMatrix& m) {
  const double total = static_cast<double>(m.raters) * static_cast<double>(m.counts.size());
  double pe = 0.0;
  for (int k = 0; k < m.categories; ++k) {
    double col = 0.0;
    for (const auto& row : m.counts) col += row[k];
    double p = col / total;
    pe += p * p;
  }
  return pe;
}

AgreementValue fleiss_kappa(const RatingMatrix& m) {
  double p_bar = observed_agreement(m);
  double p_e = fleiss_expected_agreement(m);
  if (p_e >= 1.0) return {0.0, false, "DegenerateMarginals"};
  return {(p_bar - p_e) / (1.0 - p_e), true, {}};
}

AgreementValue randolph_kappa(const RatingMatrix& m) {
  double p_bar = observed_agreement(m);
  double chance = 1.0 / m.categories;
  return {(p_bar - chance) / (1.0 - chance), true, {}};
}

AgreementValue krippendorff_alpha(const std::vector<std::vector<int>>& units, AlphaLevel level) {
  std::set<int> values;
  for (const auto& u : units)
    if (u.size() >= 2) values.insert(u.begin(), u.end());
  if (values.empty()) fail(ErrorCode::InvalidArgument, "alpha needs at least one unit with two ratings");
  std::vector<int> labels(values.begin(), values.end());
  const std::size_t v = labels.size();
  auto index = [&](int value) {
    return static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), value) - labels.begin());
  };

  std::vector<std::vector<double>> o(v, std::vector<double>(v, 0.0));
  for (const auto& u : units) {
    if (u.size() < 2) continue;
    const double w = 1.0 / static_cast<double>(u.size() - 1);
    for (std::size_t a = 0; a < u.size(); ++a)
      for (std::size_t b = 0; b < u.size(); ++b)
        if (a != b) o[index(u[a])][index(u[b])] += w;
  }
  std::vector<double> marg(v, 0.0);
  double n = 0.0;
  for (std::size_t c = 0; c < v; ++c) {
    for (std::size_t k = 0; k < v; ++k) marg[c] += o[c][k];
    n += marg[c];
  }
  auto delta = [&](std::size_t c, std::size_t k) {
    if (level == AlphaLevel::Nominal) return c == k ? 0.0 : 1.0;
    double d = static_cast<double>(labels[c] - labels[k]);
    return d * d;
  };
  double d_o = 0.0, d_e = 0.0;
  for (std::size_t c = 0; c < v; ++c)
    for (std::size_t k = 0; k < v; ++k) {
      d_o += o[c][k] * delta(c, k);
      d_e += marg[c] * marg[k] * delta(c, k);
    }
  d_o /= n;
  d_e /= n * (n - 1.0);
  if (d_e == 0.0) return {0.0, false, "NoVariation"};
  return {1.0 - d_o / d_e, true, {}};
}

AgreementValue krippendorff_alpha(const std::vector<RatingRecord>& records, Criterion criterion, AlphaLevel level) {
  validate_ratings(records);
  std::map<std::string, std::vector<int>> units;
  for (const auto& r : records) units[r.question_id].push_back(r.value(criterion));
  std::vector<std::vector<int>> list;
  for (auto& [id, u] : units) list.push_back(std::move(u));
  return krippendorff_alpha(list, level);
}

AgreementReport agreement_report(const std::vector<RatingRecord>& records, bool nominal_informativeness) {
  AgreementReport report;
  report.systems = aggregate_human_scores(records);
  for (Criterion c : {Criterion::Intelligibility, Criterion::Clarity, Criterion::Relevance, Criterion::Informativeness}) {
    CriterionAgreement ca;
    ca.criterion = c;
    MatrixBuild build = build_rating_matrix(records, c);
    ca.items = build.matrix.counts.size();
    ca.dropped_items = build.dropped_items.size();
    ca.observed = observed_agreement(build.matrix);
    ca.fleiss = fleiss_kappa(build.matrix);
    ca.randolph = randolph_kappa(build.matrix);
    ca.alpha_level =
        c == Criterion::Informativeness && !nominal_informativeness ? AlphaLevel::Interval : AlphaLevel::Nominal;
    ca.alpha = krippendorff_alpha(records, c, ca.alpha_level);
    report.criteria.push_back(ca);
  }
  return report;
}

namespace {

io::Json value_json(const AgreementValue& v) {
  if (!v.defined) return io::Json{{"value", nullptr}, {"flag", v.flag}};
  return io::Json{{"value", v.value}};
}

std::string value_text(const AgreementValue& v) {
  if (!v.defined) return v.flag;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v.value);
  return buf;
}

}  // namespace

io::Json agreement_report_to_json(const AgreementReport& report) {
  io::Json systems = io::Json::array();
  for (const auto& s : report.systems)
    systems.push_back({{"system_id", s.system_id},
                       {"ratings", s.ratings},
                       {"i", s.intelligibility},
                       {"c", s.clarity},
                       {"r", s.relevance},
                       {"info", s.informativeness}});
  io::Json criteria = io::Json::object();
  for (const auto& c : report.criteria)
    criteria[std::string(to_string(c.criterion))] = {
        {"items", c.items},
        {"dropped_items", c.dropped_items},
        {"observed_agreement", c.observed},
        {"fleiss_kappa", value_json(c.fleiss)},
        {"randolph_kappa", value_json(c.randolph)},
        {"krippendorff_alpha", value_json(c.alpha)},
        {"alpha_level", c.alpha_level == AlphaLevel::Interval ? "interval" : "nominal"}};
  return io::Json{{"systems", systems}, {"agreement", criteria}};
}

std::string agreement_report_to_table(const AgreementReport& report) {
  std::string out = "System                   n       I       C       R    Info\n";
  char buf[160];
  for (const auto& s : report.systems) {
    std::snprintf(buf, sizeof buf, "%-20s %5zu  %6.2f  %6.2f  %6.2f  %6.2f\n", s.system_id.c_str(), s.ratings,
                  s.intelligibility, s.clarity, s.relevance, s.informativeness);
    out += buf;
  }
  out += "\nCriterion          items   Fleiss  Randolph     alpha\n";
  for (const auto& c : report.criteria) {
    std::snprintf(buf, sizeof buf, "%-16s %7zu %8s  %8s  %8s\n", std::string(to_string(c.criterion)).c_str(), c.items,
                  value_text(c.fleiss).c_str(), value_text(c.randolph).c_str(), value_text(c.alpha).c_str());
    out += buf;
  }
  return out;
}

}  // namespace focalqg
