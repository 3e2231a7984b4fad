#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace focalqg::io {

using Json = nlohmann::json;

struct JsonLine {
  std::size_t line_number = 0;  // 1-based
  Json value;
};

std::string read_file(const std::filesystem::path& path);
// Writes through a temporary sibling and renames, so readers never see a
// half-written artifact.
void write_file(const std::filesystem::path& path, std::string_view content);

// Blank lines are skipped. A line that is not valid JSON raises ParseError
// naming the file and line.
std::vector<JsonLine> read_jsonl(const std::filesystem::path& path);
std::vector<JsonLine> parse_jsonl(std::string_view content, std::string_view origin = "<memory>");

std::string to_jsonl(const std::vector<Json>& rows);
void write_jsonl(const std::filesystem::path& path, const std::vector<Json>& rows);
void write_json(const std::filesystem::path& path, const Json& value);

}  // namespace focalqg::io
