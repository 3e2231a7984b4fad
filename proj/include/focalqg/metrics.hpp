#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace focalqg {

using Tokens = std::vector<std::string>;

enum class BleuSmoothing { None, AddOneHighOrder };

struct BleuResult {
  double score = 0.0;
  double brevity_penalty = 1.0;
  std::vector<double> precisions;
  bool empty_hypothesis = false;
};

// Sentence BLEU with clipped counts (per n-gram, the max count over
// references) and the closest reference length for the brevity penalty
// (ties go to the shorter reference).
BleuResult bleu_detail(const Tokens& hypothesis, const std::vector<Tokens>& references, int max_n,
                       BleuSmoothing smoothing);
double bleu(const Tokens& hypothesis, const std::vector<Tokens>& references, int max_n, BleuSmoothing smoothing);

// Character n-gram F-score over code points with whitespace removed.
// Precision and recall are averaged over the orders where both sides have
// n-grams, then combined into F_beta; the best reference wins.
double chrf(std::string_view hypothesis, const std::vector<std::string>& references, int max_char_n = 6,
            double beta = 2.0);

struct MeteorStages {
  bool exact = true;
  bool stem = true;
};

struct MeteorParams {
  double alpha = 0.9;
  double beta_frag = 3.0;
  double gamma = 0.5;
};

double meteor(const Tokens& hypothesis, const Tokens& reference, MeteorStages stages = {}, MeteorParams params = {});
double meteor(const Tokens& hypothesis, const std::vector<Tokens>& references, MeteorStages stages = {},
              MeteorParams params = {});

// Porter's original suffix-stripping algorithm.
std::string porter_stem(std::string_view word);

struct PrfScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

PrfScore rouge_n_detail(const Tokens& hypothesis, const Tokens& reference, int n);
PrfScore rouge_l_detail(const Tokens& hypothesis, const Tokens& reference);
// Max F1 over references.
double rouge_n(const Tokens& hypothesis, const std::vector<Tokens>& references, int n);
double rouge_l(const Tokens& hypothesis, const std::vector<Tokens>& references);

struct TerResult {
  int edits = 0;  // shifts + edit distance after shifting
  int shifts = 0;
  std::size_t reference_length = 0;
  double score = 0.0;
};

// Word-level TER against one reference: greedy block shifts (shift cost 1,
// at most 10 words per shift) followed by a beam-limited edit distance.
TerResult ter_detail(const Tokens& hypothesis, const Tokens& reference);
// Minimum over references of edits / reference length.
double ter(const Tokens& hypothesis, const std::vector<Tokens>& references);

}  // namespace focalqg
