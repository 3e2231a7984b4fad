#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "focalqg/http.hpp"
#include "focalqg/jsonl.hpp"

namespace focalqg {

struct EmbeddingVector {
  std::vector<double> values;

  std::size_t dim() const { return values.size(); }
};

class Embedder {
 public:
  virtual ~Embedder() = default;
  // Throws EmptyText on blank input.
  virtual EmbeddingVector embed(std::string_view text) const = 0;
  virtual std::size_t dim() const = 0;
  // Serialisable description, stored in model checkpoints.
  virtual io::Json config() const = 0;
};

// Bag of words over the shared tokenizer: each token adds 1 to bucket
// fnv1a64(token, seed) mod dim.
class HashedEmbedder final : public Embedder {
 public:
  explicit HashedEmbedder(std::size_t dim = 256, std::uint64_t seed = 0);

  EmbeddingVector embed(std::string_view text) const override;
  std::size_t dim() const override { return dim_; }
  io::Json config() const override;

  std::size_t bucket(std::string_view token) const;

 private:
  std::size_t dim_;
  std::uint64_t seed_;
};

// Fixed text -> vector table: hand-set vectors in tests, or embeddings
// precomputed offline by a sentence encoder (JSONL {"text", "embedding"}).
class TableEmbedder final : public Embedder {
 public:
  explicit TableEmbedder(std::map<std::string, std::vector<double>> table);
  static TableEmbedder from_jsonl(const std::filesystem::path& path);

  EmbeddingVector embed(std::string_view text) const override;
  std::size_t dim() const override { return dim_; }
  io::Json config() const override;

 private:
  std::map<std::string, std::vector<double>, std::less<>> table_;
  std::size_t dim_ = 0;
  std::string origin_;
};

// External sentence-embedding service: POST /embed {"text"} -> {"embedding"}.
// Replies are memoised per text.
class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(const std::string& url, std::size_t dim, http::CallOptions options = {});

  EmbeddingVector embed(std::string_view text) const override;
  std::size_t dim() const override { return dim_; }
  io::Json config() const override;

 private:
  std::string url_;
  http::Endpoint endpoint_;
  std::size_t dim_;
  http::CallOptions options_;
  mutable std::mutex mu_;
  mutable std::map<std::string, std::vector<double>, std::less<>> cache_;
};

std::unique_ptr<Embedder> make_embedder(const io::Json& config);

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);
double cosine_similarity(std::span<const double> u, std::span<const double> v);

}  // namespace focalqg
