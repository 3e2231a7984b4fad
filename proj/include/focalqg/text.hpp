#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace focalqg {

std::string trim(std::string_view s);
std::string collapse_whitespace(std::string_view s);
bool is_blank(std::string_view s);

// Word tokenizer shared by every word-level metric, the dedup filter and the
// hashed embedder: ASCII-lowercase, every ASCII punctuation character becomes
// its own token, whitespace separates tokens. Non-ASCII bytes are word
// characters.
std::vector<std::string> tokenize(std::string_view text);
std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

// Lenient UTF-8 decode; invalid bytes decode to themselves (Latin-1).
std::u32string utf8_decode(std::string_view s);

std::string ascii_lower(std::string_view s);

// FNV-1a, 64 bit. Stable across platforms; used for hashing features and
// content-addressing artifacts.
std::uint64_t fnv1a64(std::string_view data, std::uint64_t seed = 0);
std::string hex64(std::uint64_t value);

// Seeded PRNG with platform-independent derived draws (the standard
// distributions are implementation-defined, so they are not used).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  double uniform01();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  // Standard normal via Box-Muller on uniform01.
  double normal();
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace focalqg
