#include "focalqg/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <unordered_set>

#include <spdlog/spdlog.h>

#include "focalqg/error.hpp"
#include "focalqg/text.hpp"

namespace focalqg {

namespace {

std::string where(std::size_t line_number) {
  return line_number ? "line " + std::to_string(line_number) + ": " : std::string();
}

std::optional<std::string> optional_string(const io::Json& record, const char* key) {
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) fail(ErrorCode::ParseError, std::string("field '") + key + "' must be a string or null");
  std::string value = trim(it->get<std::string>());
  if (value.empty()) return std::nullopt;
  return value;
}

std::vector<std::string> string_list(const io::Json& record, const char* key, bool allow_null_items) {
  std::vector<std::string> out;
  auto it = record.find(key);
  if (it == record.end() || it->is_null()) return out;
  if (!it->is_array()) fail(ErrorCode::ParseError, std::string("field '") + key + "' must be an array");
  for (const auto& item : *it) {
    if (item.is_null() && allow_null_items) {
      out.emplace_back();
    } else if (item.is_string()) {
      out.push_back(trim(item.get<std::string>()));
    } else {
      fail(ErrorCode::ParseError, std::string("field '") + key + "' must hold strings");
    }
  }
  return out;
}

bool has_upper(std::string_view word) {
  return std::any_of(word.begin(), word.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

std::string strip_punct(std::string_view word) {
  auto punct = [](char c) {
    auto u = static_cast<unsigned char>(c);
    return u < 128 && !std::isalnum(u);
  };
  std::size_t b = 0, e = word.size();
  while (b < e && punct(word[b])) ++b;
  while (e > b && punct(word[e - 1])) --e;
  return std::string(word.substr(b, e - b));
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

}  // namespace

bool Claim::has_metadata() const { return source.has_value() && date.has_value(); }

DatasetFormat parse_dataset_format(std::string_view name) {
  if (name == "qabriefs-jsonl" || name == "qabriefs") return DatasetFormat::QaBriefsJsonl;
  if (name == "amazon-jsonl" || name == "amazon") return DatasetFormat::AmazonJsonl;
  fail(ErrorCode::ConfigInvalid, "unknown dataset format '" + std::string(name) + "'");
}

Claim claim_from_json(const io::Json& record, DatasetFormat format, std::size_t line_number) {
  if (!record.is_object()) fail(ErrorCode::ParseError, where(line_number) + "record is not a JSON object");
  const char* text_key = format == DatasetFormat::AmazonJsonl ? "description" : "claim";
  Claim claim;
  try {
    auto id = record.find("id");
    if (id == record.end() || id->is_null()) fail(ErrorCode::MissingField, where(line_number) + "missing field 'id'");
    // Numeric ids are common in exported datasets; keep them as text.
    claim.id = id->is_string() ? id->get<std::string>() : id->dump();
    auto text = record.find(text_key);
    if (text == record.end() || text->is_null() || !text->is_string())
      fail(ErrorCode::MissingField, where(line_number) + "missing field '" + text_key + "'");
    claim.text = trim(text->get<std::string>());
    if (claim.text.empty()) fail(ErrorCode::MissingField, where(line_number) + "field '" + text_key + "' is empty");
    if (format == DatasetFormat::QaBriefsJsonl) {
      claim.source = optional_string(record, "source");
      claim.date = optional_string(record, "date");
    }
    claim.gold_questions = string_list(record, "questions", false);
    claim.gold_answers = string_list(record, "answers", true);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ParseError || line_number == 0) throw;
    fail(ErrorCode::ParseError, where(line_number) + e.what());
  }
  if (!claim.gold_answers.empty() && claim.gold_answers.size() != claim.gold_questions.size())
    fail(ErrorCode::ParseError, where(line_number) + "claim '" + claim.id + "' has " +
                                    std::to_string(claim.gold_answers.size()) + " answers for " +
                                    std::to_string(claim.gold_questions.size()) + " questions");
  return claim;
}

io::Json claim_to_json(const Claim& claim) {
  io::Json j;
  j["id"] = claim.id;
  j["claim"] = claim.text;
  j["source"] = claim.source ? io::Json(*claim.source) : io::Json(nullptr);
  j["date"] = claim.date ? io::Json(*claim.date) : io::Json(nullptr);
  j["questions"] = claim.gold_questions;
  j["answers"] = claim.gold_answers;
  return j;
}

std::vector<Claim> parse_dataset(std::string_view content, DatasetFormat format, std::string_view origin) {
  std::vector<Claim> claims;
  std::unordered_set<std::string> seen;
  for (const auto& row : io::parse_jsonl(content, origin)) {
    Claim claim = claim_from_json(row.value, format, row.line_number);
    if (!seen.insert(claim.id).second)
      fail(ErrorCode::DuplicateId, "line " + std::to_string(row.line_number) + ": duplicate id '" + claim.id + "'");
    claims.push_back(std::move(claim));
  }
  return claims;
}

std::vector<Claim> load_dataset(const std::filesystem::path& path, DatasetFormat format) {
  return parse_dataset(io::read_file(path), format, path.string());
}

DatasetSplits make_splits(const std::vector<Claim>& claims, SplitSizes sizes, std::uint64_t seed) {
  std::size_t total = sizes.train + sizes.validation + sizes.test + sizes.holdout;
  if (total != claims.size())
    fail(ErrorCode::SizeMismatch, "split sizes sum to " + std::to_string(total) + " but dataset has " +
                                      std::to_string(claims.size()) + " claims");
  std::vector<std::size_t> order(claims.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(order);

  std::vector<std::size_t> with_meta;
  for (std::size_t idx : order)
    if (claims[idx].has_metadata()) with_meta.push_back(idx);
  if (with_meta.size() < sizes.test)
    fail(ErrorCode::InsufficientMetadataClaims, "test split needs " + std::to_string(sizes.test) +
                                                    " claims with source and date, only " +
                                                    std::to_string(with_meta.size()) + " available");

  DatasetSplits splits;
  std::vector<bool> taken(claims.size(), false);
  for (std::size_t k = 0; k < sizes.test; ++k) {
    splits.test.push_back(claims[with_meta[k]]);
    taken[with_meta[k]] = true;
  }
  std::vector<Claim>* targets[] = {&splits.train, &splits.validation, &splits.holdout};
  std::size_t quota[] = {sizes.train, sizes.validation, sizes.holdout};
  std::size_t slot = 0;
  for (std::size_t idx : order) {
    if (taken[idx]) continue;
    while (targets[slot]->size() == quota[slot]) ++slot;
    targets[slot]->push_back(claims[idx]);
  }
  return splits;
}

bool keeps_leading_capital(const Claim& claim) {
  auto words = split_ws(claim.text);
  if (words.empty()) return false;
  std::string first = strip_punct(words.front());
  if (first.empty() || !has_upper(first)) return false;
  for (const auto& question : claim.gold_questions) {
    auto qwords = split_ws(question);
    for (std::size_t i = 1; i < qwords.size(); ++i)
      if (strip_punct(qwords[i]) == first) return true;
  }
  return false;
}

CombinedContext render_metadata_template(const Claim& claim) {
  CombinedContext ctx;
  ctx.claim_id = claim.id;
  std::string body = trim(claim.text);

  if (!claim.has_metadata()) {
    ctx.text = body;
    ctx.claim_span = {0, body.size()};
    ctx.offset_map.reserve(body.size());
    for (std::size_t i = 0; i < body.size(); ++i) ctx.offset_map.push_back({Segment::Claim, i});
    return ctx;
  }

  ctx.uses_metadata = true;
  if (!keeps_leading_capital(claim)) {
    for (char& c : body) {
      if (std::isalpha(static_cast<unsigned char>(c))) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        break;
      }
      if (static_cast<unsigned char>(c) >= 128) break;
    }
  }

  std::size_t template_pos = 0;
  auto append = [&](std::string_view piece, Segment segment) {
    std::size_t start = ctx.text.size();
    for (std::size_t i = 0; i < piece.size(); ++i)
      ctx.offset_map.push_back({segment, segment == Segment::Template ? template_pos++ : i});
    ctx.text.append(piece);
    return Span{start, ctx.text.size()};
  };
  ctx.source_span = append(*claim.source, Segment::Source);
  append(" reported on ", Segment::Template);
  ctx.date_span = append(*claim.date, Segment::Date);
  append(" that ", Segment::Template);
  ctx.claim_span = append(body, Segment::Claim);
  return ctx;
}

}  // namespace focalqg
