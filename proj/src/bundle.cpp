#include "focalqg/bundle.hpp"

#include <algorithm>
#include <unordered_map>

#include "focalqg/error.hpp"
#include "focalqg/text.hpp"

namespace focalqg {

namespace {

std::string question_id(const std::string& claim_id, const std::string& system, std::size_t slot,
                        const std::string& text) {
  std::string key = claim_id + '\x1f' + system + '\x1f' + std::to_string(slot) + '\x1f' + text;
  return "q" + hex64(fnv1a64(key));
}

}  // namespace

AnnotationBundle make_bundle(const std::vector<Claim>& claims,
                             const std::map<std::string, std::vector<OutputQuestion>>& outputs_by_system,
                             std::size_t questions_per_system, std::uint64_t seed) {
  if (questions_per_system == 0) fail(ErrorCode::InvalidArgument, "questions_per_system must be >= 1");
  if (outputs_by_system.count(kGoldSystemId))
    fail(ErrorCode::InvalidArgument, std::string("system id '") + kGoldSystemId + "' is reserved");

  std::map<std::string, std::unordered_map<std::string, std::vector<const OutputQuestion*>>> index;
  for (const auto& [system, questions] : outputs_by_system) {
    auto& by_claim = index[system];
    for (const auto& q : questions) by_claim[q.claim_id].push_back(&q);
    for (auto& [id, qs] : by_claim)
      std::stable_sort(qs.begin(), qs.end(), [](auto* a, auto* b) { return a->rank < b->rank; });
  }

  AnnotationBundle bundle;
  bundle.shuffle_seed = seed;
  bundle.questions_per_system = questions_per_system;
  for (const auto& [system, _] : outputs_by_system) bundle.systems.push_back(system);

  Rng rng(seed);
  std::uint64_t content = fnv1a64(std::to_string(seed));
  for (const auto& claim : claims) {
    auto base = [&](std::string system, std::size_t slot, std::string text) {
      BundleItem item;
      item.question_id = question_id(claim.id, system, slot, text);
      item.claim_id = claim.id;
      item.claim_text = claim.text;
      item.source = claim.source;
      item.date = claim.date;
      item.question_text = std::move(text);
      item.hidden_system_id = std::move(system);
      return item;
    };
    std::vector<BundleItem> items;
    if (claim.gold_questions.size() < questions_per_system)
      fail(ErrorCode::InsufficientQuestions, "claim " + claim.id + " has fewer than " +
                                                 std::to_string(questions_per_system) + " gold questions");
    for (std::size_t k = 0; k < questions_per_system; ++k)
      items.push_back(base(kGoldSystemId, k, claim.gold_questions[k]));
    for (const auto& [system, by_claim] : index) {
      auto it = by_claim.find(claim.id);
      std::size_t have = it == by_claim.end() ? 0 : it->second.size();
      if (have < questions_per_system)
        fail(ErrorCode::InsufficientQuestions, "system " + system + " has " + std::to_string(have) +
                                                   " question(s) for claim " + claim.id);
      for (std::size_t k = 0; k < questions_per_system; ++k) {
        const OutputQuestion& q = *it->second[k];
        BundleItem item = base(system, k, q.question);
        item.dep_tag = q.dep_tag;
        item.is_named_entity = q.is_named_entity;
        items.push_back(std::move(item));
      }
    }
    rng.shuffle(items);
    for (auto& item : items) {
      content = fnv1a64(item.question_id, content);
      bundle.items.push_back(std::move(item));
    }
  }
  bundle.bundle_id = "b" + hex64(content);
  return bundle;
}

io::Json bundle_to_json(const AnnotationBundle& bundle) {
  io::Json items = io::Json::array();
  for (const auto& item : bundle.items) {
    io::Json meta = io::Json::object();
    meta["source"] = item.source ? io::Json(*item.source) : io::Json(nullptr);
    meta["date"] = item.date ? io::Json(*item.date) : io::Json(nullptr);
    items.push_back({{"question_id", item.question_id},
                     {"claim_id", item.claim_id},
                     {"claim_text", item.claim_text},
                     {"metadata", meta},
                     {"question_text", item.question_text},
                     {"hidden_system_id", item.hidden_system_id}});
  }
  return {{"bundle_id", bundle.bundle_id},
          {"shuffle_seed", bundle.shuffle_seed},
          {"questions_per_system", bundle.questions_per_system},
          {"items", items}};
}

std::vector<io::Json> bundle_key_rows(const AnnotationBundle& bundle) {
  std::vector<io::Json> rows;
  for (const auto& item : bundle.items)
    rows.push_back({{"question_id", item.question_id},
                    {"claim_id", item.claim_id},
                    {"system_id", item.hidden_system_id},
                    {"question", item.question_text},
                    {"dep_tag", item.dep_tag},
                    {"ne", item.is_named_entity}});
  return rows;
}

std::map<std::string, std::string> tags_from_key(const std::vector<io::Json>& rows) {
  std::map<std::string, std::string> out;
  for (const auto& row : rows) {
    std::string tag = row.value("dep_tag", std::string());
    if (!tag.empty()) out[row.at("question_id").get<std::string>()] = tag;
  }
  return out;
}

}  // namespace focalqg
