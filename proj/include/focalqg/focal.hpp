#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "focalqg/corpus.hpp"

namespace focalqg {

struct Token {
  int index = 0;  // 1-based
  std::string surface;
  int head = 0;  // 0 = root
  std::string dep_tag;
  bool ne_flag = false;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  bool space_after = true;
};

struct ParsedSentence {
  std::string sent_id;
  std::string text;  // "# text =" comment, may be empty
  std::vector<Token> tokens;
  // True when no token carried TokenRange offsets and they were rebuilt by
  // joining surfaces (respecting SpaceAfter=No).
  bool offsets_reconstructed = false;

  int root_index() const;
};

// One sentence block in 10-column CoNLL-U. MISC keys understood: NE=Yes,
// SpaceAfter=No, TokenRange=start:end. Multiword ranges and empty nodes are
// skipped.
ParsedSentence ingest_parse(std::string_view conllu_block);

// Sidecar file holding one block per claim, keyed by "# sent_id".
std::map<std::string, ParsedSentence> load_conllu(const std::filesystem::path& path);
std::map<std::string, ParsedSentence> parse_conllu(std::string_view content);
std::string to_conllu(const ParsedSentence& parsed);

// Re-anchors token offsets onto `text` by scanning each surface in order,
// skipping whitespace only. Throws SpanMismatch when a surface is not found
// where expected.
ParsedSentence anchor_to_text(const ParsedSentence& parsed, std::string_view text);

// Builds the parse of the metadata-combined context from the bare claim
// parse: source tokens hang off "reported" (last one as nsubj, the rest as
// compound), "on" is its prep with the last date token as pobj, "that" marks
// the claim root, and the claim root becomes a ccomp of "reported".
ParsedSentence graft_metadata_parse(const ParsedSentence& claim_parse, const CombinedContext& context);

enum class FocalOrigin { Claim, MetadataSource, MetadataDate };

std::string_view to_string(FocalOrigin origin);
FocalOrigin parse_focal_origin(std::string_view name);

struct FocalPoint {
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
  int root_token_index = 0;  // 0 for metadata points that match no subtree
  std::string dep_tag;
  bool is_named_entity = false;
  FocalOrigin origin = FocalOrigin::Claim;

  bool operator==(const FocalPoint&) const = default;
};

struct FocalPointSet {
  std::string claim_id;
  CombinedContext context;
  std::vector<FocalPoint> points;
};

FocalPointSet enumerate_focal_points(const ParsedSentence& parsed, const CombinedContext& context);

struct FocalFilter {
  enum class Kind { NeOnly, NonNe, Tags } kind = Kind::NeOnly;
  std::vector<std::string> tags;

  static FocalFilter ne_only() { return {Kind::NeOnly, {}}; }
  static FocalFilter non_ne() { return {Kind::NonNe, {}}; }
  static FocalFilter with_tags(std::vector<std::string> tags) { return {Kind::Tags, std::move(tags)}; }
};

FocalPointSet filter_focal_points(const FocalPointSet& set, const FocalFilter& filter);

// Context without metadata, regardless of what the claim carries.
CombinedContext plain_context(const Claim& claim);

// Looks up the claim's parse (or its "<id>#meta" parse for the combined
// text, grafting one when absent) and enumerates focal points.
FocalPointSet extract_focal_points(const Claim& claim, const std::map<std::string, ParsedSentence>& parses,
                                   bool use_metadata);

io::Json focal_point_to_json(const FocalPoint& point);
FocalPoint focal_point_from_json(const io::Json& j);

}  // namespace focalqg
