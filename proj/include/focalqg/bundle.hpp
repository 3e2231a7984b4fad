#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "focalqg/corpus.hpp"
#include "focalqg/evaluate.hpp"

namespace focalqg {

inline constexpr const char* kGoldSystemId = "gold";

struct BundleItem {
  std::string question_id;
  std::string claim_id;
  std::string claim_text;
  std::optional<std::string> source;
  std::optional<std::string> date;
  std::string question_text;
  std::string hidden_system_id;
  // Kept for the bundle key, not written into the bundle itself.
  std::string dep_tag;
  bool is_named_entity = false;
};

struct AnnotationBundle {
  std::string bundle_id;
  std::uint64_t shuffle_seed = 0;
  std::size_t questions_per_system = 2;
  std::vector<std::string> systems;
  std::vector<BundleItem> items;  // claims contiguous, shuffled inside a claim
};

// For each claim: questions_per_system gold questions plus the top
// questions_per_system ranked outputs of each system, shuffled with `seed`.
// Throws InsufficientQuestions when a claim lacks enough of either.
AnnotationBundle make_bundle(const std::vector<Claim>& claims,
                             const std::map<std::string, std::vector<OutputQuestion>>& outputs_by_system,
                             std::size_t questions_per_system, std::uint64_t seed);

// The file the annotation tool loads.
io::Json bundle_to_json(const AnnotationBundle& bundle);
// One row per item: question_id, claim_id, system_id, question, dep_tag, ne.
std::vector<io::Json> bundle_key_rows(const AnnotationBundle& bundle);
// question_id -> dep_tag, read back from bundle key rows.
std::map<std::string, std::string> tags_from_key(const std::vector<io::Json>& rows);

}  // namespace focalqg
