#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "focalqg/jsonl.hpp"

namespace focalqg {

struct Claim {
  std::string id;
  std::string text;
  std::optional<std::string> source;
  std::optional<std::string> date;
  std::vector<std::string> gold_questions;
  // Parallel to gold_questions when non-empty. An empty string marks a
  // question whose answer is missing in the source data.
  std::vector<std::string> gold_answers;

  bool has_metadata() const;
};

enum class DatasetFormat { QaBriefsJsonl, AmazonJsonl };

DatasetFormat parse_dataset_format(std::string_view name);

std::vector<Claim> load_dataset(const std::filesystem::path& path, DatasetFormat format);
std::vector<Claim> parse_dataset(std::string_view content, DatasetFormat format, std::string_view origin = "<memory>");
Claim claim_from_json(const io::Json& record, DatasetFormat format, std::size_t line_number = 0);
io::Json claim_to_json(const Claim& claim);

struct SplitSizes {
  std::size_t train = 0;
  std::size_t validation = 0;
  std::size_t test = 0;
  std::size_t holdout = 0;
};

struct DatasetSplits {
  std::vector<Claim> train;
  std::vector<Claim> validation;
  std::vector<Claim> test;
  std::vector<Claim> holdout;
};

DatasetSplits make_splits(const std::vector<Claim>& claims, SplitSizes sizes, std::uint64_t seed);

enum class Segment { Claim, Source, Date, Template };

struct OffsetEntry {
  Segment segment;
  std::size_t position;  // byte index inside the segment's own string
};

struct Span {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive

  bool operator==(const Span&) const = default;
  auto operator<=>(const Span&) const = default;
};

// Character positions are UTF-8 byte offsets throughout.
struct CombinedContext {
  std::string text;
  std::string claim_id;
  bool uses_metadata = false;
  std::vector<OffsetEntry> offset_map;  // one entry per byte of text
  Span claim_span;
  std::optional<Span> source_span;
  std::optional<Span> date_span;
};

CombinedContext render_metadata_template(const Claim& claim);

// True when the claim's first word should keep its capital in the template:
// it shows up capitalized somewhere other than sentence start in at least one
// gold question.
bool keeps_leading_capital(const Claim& claim);

}  // namespace focalqg
