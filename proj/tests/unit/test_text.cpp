#include <doctest.h>

#include <algorithm>
#include <set>

#include "focalqg/text.hpp"

using namespace focalqg;

TEST_CASE("tokenize splits punctuation and lowercases ASCII") {
  CHECK(tokenize("Who is Miss Universe Guyana 2017?") ==
        std::vector<std::string>{"who", "is", "miss", "universe", "guyana", "2017", "?"});
  CHECK(tokenize("10,000 acres.") == std::vector<std::string>{"10", ",", "000", "acres", "."});
  CHECK(tokenize("  state-news.com  ") == std::vector<std::string>{"state", "-", "news", ".", "com"});
  CHECK(tokenize("Café") == std::vector<std::string>{"café"});
  CHECK(tokenize(" \t\n").empty());
}

TEST_CASE("whitespace helpers") {
  CHECK(trim("  a b \n") == "a b");
  CHECK(collapse_whitespace("a \t  b\n c") == "a b c");
  CHECK(is_blank(" \t"));
  CHECK_FALSE(is_blank(" x "));
  CHECK(join({"a", "b", "c"}) == "a b c");
  CHECK(join({"a", "b"}, "|") == "a|b");
}

TEST_CASE("utf8 decode counts code points") {
  CHECK(utf8_decode("abc").size() == 3);
  CHECK(utf8_decode("São").size() == 3);
  CHECK(utf8_decode("São")[1] == U'ã');
  // truncated sequence falls back to bytes instead of reading past the end
  std::string broken = "a\xC3";
  CHECK(utf8_decode(broken).size() == 2);
}

TEST_CASE("fnv1a64 matches the published test vectors at seed 0") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
  CHECK(fnv1a64("a", 1) != fnv1a64("a", 0));
  CHECK(hex64(0xabcULL) == "0000000000000abc");
}

TEST_CASE("Rng is reproducible and draws stay in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    double u = r.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(5) < 5);
  }
  std::vector<int> v{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  Rng s(3);
  s.shuffle(v);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  std::vector<int> w{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  Rng s2(3);
  s2.shuffle(w);
  CHECK(v == w);
}

TEST_CASE("Rng normal has roughly unit moments") {
  Rng r(11);
  double sum = 0, sq = 0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    double x = r.normal();
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.05);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
}
