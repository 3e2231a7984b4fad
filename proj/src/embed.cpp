#include "focalqg/embed.hpp"

#include <algorithm>
#include <cmath>

#include "focalqg/error.hpp"
#include "focalqg/simd/kernels.hpp"
#include "focalqg/text.hpp"

namespace focalqg {

namespace {

void require_text(std::string_view text) {
  if (is_blank(text)) fail(ErrorCode::EmptyText, "cannot embed empty text");
}

}  // namespace

HashedEmbedder::HashedEmbedder(std::size_t dim, std::uint64_t seed) : dim_(dim), seed_(seed) {
  if (dim == 0) fail(ErrorCode::InvalidArgument, "embedding dimension must be positive");
}

std::size_t HashedEmbedder::bucket(std::string_view token) const {
  return static_cast<std::size_t>(fnv1a64(token, seed_) % dim_);
}

EmbeddingVector HashedEmbedder::embed(std::string_view text) const {
  require_text(text);
  EmbeddingVector v;
  v.values.assign(dim_, 0.0);
  for (const auto& tok : tokenize(text)) v.values[bucket(tok)] += 1.0;
  return v;
}

io::Json HashedEmbedder::config() const { return {{"kind", "hashed"}, {"dim", dim_}, {"seed", seed_}}; }

TableEmbedder::TableEmbedder(std::map<std::string, std::vector<double>> table) {
  for (auto& [text, vec] : table) {
    if (dim_ == 0) dim_ = vec.size();
    if (vec.size() != dim_ || dim_ == 0)
      fail(ErrorCode::DimensionMismatch, "embedding table rows must share one positive dimension");
    table_.emplace(text, std::move(vec));
  }
}

TableEmbedder TableEmbedder::from_jsonl(const std::filesystem::path& path) {
  std::map<std::string, std::vector<double>> table;
  for (const auto& row : io::read_jsonl(path)) {
    try {
      table[row.value.at("text").get<std::string>()] = row.value.at("embedding").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorCode::ParseError, path.string() + ":" + std::to_string(row.line_number) + ": " + e.what());
    }
  }
  TableEmbedder out(std::move(table));
  out.origin_ = path.string();
  return out;
}

EmbeddingVector TableEmbedder::embed(std::string_view text) const {
  require_text(text);
  auto it = table_.find(text);
  if (it == table_.end()) fail(ErrorCode::BackendUnavailable, "no embedding for '" + std::string(text) + "'");
  return {it->second};
}

io::Json TableEmbedder::config() const {
  io::Json j{{"kind", "table"}, {"dim", dim_}};
  if (!origin_.empty()) j["path"] = origin_;
  return j;
}

HttpEmbedder::HttpEmbedder(const std::string& url, std::size_t dim, http::CallOptions options)
    : url_(url), endpoint_(http::parse_url(url)), dim_(dim), options_(options) {}

EmbeddingVector HttpEmbedder::embed(std::string_view text) const {
  require_text(text);
  {
    std::lock_guard lock(mu_);
    auto it = cache_.find(text);
    if (it != cache_.end()) return {it->second};
  }
  io::Json reply = http::post_json(endpoint_, "/embed", io::Json{{"text", std::string(text)}}, options_);
  std::vector<double> values;
  try {
    values = reply.at("embedding").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::BackendUnavailable, std::string("embedding reply malformed: ") + e.what());
  }
  if (values.size() != dim_)
    fail(ErrorCode::DimensionMismatch, "service returned dim " + std::to_string(values.size()) + ", expected " +
                                           std::to_string(dim_));
  std::lock_guard lock(mu_);
  cache_.emplace(std::string(text), values);
  return {values};
}

io::Json HttpEmbedder::config() const { return {{"kind", "http"}, {"url", url_}, {"dim", dim_}}; }

std::unique_ptr<Embedder> make_embedder(const io::Json& config) {
  std::string kind = config.value("kind", std::string("hashed"));
  if (kind == "hashed")
    return std::make_unique<HashedEmbedder>(config.value("dim", std::size_t{256}), config.value("seed", std::uint64_t{0}));
  if (kind == "table") {
    if (!config.contains("path")) fail(ErrorCode::ConfigInvalid, "table embedder needs a path");
    return std::make_unique<TableEmbedder>(TableEmbedder::from_jsonl(config.at("path").get<std::string>()));
  }
  if (kind == "http") {
    if (!config.contains("url")) fail(ErrorCode::ConfigInvalid, "http embedder needs a url");
    return std::make_unique<HttpEmbedder>(config.at("url").get<std::string>(), config.value("dim", std::size_t{768}));
  }
  fail(ErrorCode::ConfigInvalid, "unknown embedder kind '" + kind + "'");
}

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    fail(ErrorCode::DimensionMismatch, "cosine of vectors with dims " + std::to_string(u.size()) + " and " +
                                           std::to_string(v.size()));
  double nu = simd::squared_norm(u), nv = simd::squared_norm(v);
  if (nu == 0.0 || nv == 0.0) fail(ErrorCode::ZeroVector, "cosine similarity of a zero vector");
  double c = simd::dot(u, v) / (std::sqrt(nu) * std::sqrt(nv));
  return std::clamp(c, -1.0, 1.0);
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
  return cosine_similarity(std::span<const double>(u.values), std::span<const double>(v.values));
}

}  // namespace focalqg
