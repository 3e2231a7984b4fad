#include "focalqg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>

#include "focalqg/error.hpp"
#include "focalqg/text.hpp"

namespace focalqg {

namespace {

using NgramCounts = std::map<std::vector<std::string>, int>;

NgramCounts count_ngrams(const Tokens& tokens, int n) {
  NgramCounts counts;
  const std::size_t len = static_cast<std::size_t>(n);
  for (std::size_t i = 0; i + len <= tokens.size(); ++i)
    ++counts[std::vector<std::string>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                      tokens.begin() + static_cast<std::ptrdiff_t>(i + len))];
  return counts;
}

double f_measure(double precision, double recall) {
  return precision + recall > 0 ? 2 * precision * recall / (precision + recall) : 0.0;
}

}  // namespace

// ---------------------------------------------------------------- BLEU

BleuResult bleu_detail(const Tokens& hypothesis, const std::vector<Tokens>& references, int max_n,
                       BleuSmoothing smoothing) {
  if (max_n < 1) fail(ErrorCode::InvalidArgument, "BLEU order must be >= 1");
  if (references.empty()) fail(ErrorCode::EmptyReference, "BLEU needs at least one reference");
  BleuResult result;
  result.precisions.assign(static_cast<std::size_t>(max_n), 0.0);
  if (hypothesis.empty()) {
    result.empty_hypothesis = true;
    result.brevity_penalty = 0.0;
    return result;
  }

  const std::size_t hyp_len = hypothesis.size();
  std::size_t ref_len = 0, best_diff = 0;
  bool first = true;
  for (const auto& ref : references) {
    std::size_t diff = ref.size() > hyp_len ? ref.size() - hyp_len : hyp_len - ref.size();
    if (first || diff < best_diff || (diff == best_diff && ref.size() < ref_len)) {
      best_diff = diff;
      ref_len = ref.size();
      first = false;
    }
  }
  if (hyp_len < ref_len) result.brevity_penalty = std::exp(1.0 - static_cast<double>(ref_len) / static_cast<double>(hyp_len));

  std::vector<double> correct(static_cast<std::size_t>(max_n), 0.0), total(static_cast<std::size_t>(max_n), 0.0);
  bool any_match = false;
  for (int n = 1; n <= max_n; ++n) {
    NgramCounts max_ref;
    for (const auto& ref : references)
      for (const auto& [gram, c] : count_ngrams(ref, n)) max_ref[gram] = std::max(max_ref[gram], c);
    auto k = static_cast<std::size_t>(n - 1);
    for (const auto& [gram, c] : count_ngrams(hypothesis, n)) {
      total[k] += c;
      auto it = max_ref.find(gram);
      if (it != max_ref.end()) correct[k] += std::min(c, it->second);
    }
    if (correct[k] > 0) any_match = true;
  }
  if (!any_match) return result;

  double product = 1.0;
  for (std::size_t k = 0; k < correct.size(); ++k) {
    if (smoothing == BleuSmoothing::AddOneHighOrder && k > 0) {
      correct[k] += 1.0;
      total[k] += 1.0;
    }
    if (total[k] == 0.0 || correct[k] == 0.0) return result;
    result.precisions[k] = correct[k] / total[k];
    product *= result.precisions[k];
  }
  result.score = result.brevity_penalty * std::pow(product, 1.0 / max_n);
  return result;
}

double bleu(const Tokens& hypothesis, const std::vector<Tokens>& references, int max_n, BleuSmoothing smoothing) {
  return bleu_detail(hypothesis, references, max_n, smoothing).score;
}

// ---------------------------------------------------------------- chrF

double chrf(std::string_view hypothesis, const std::vector<std::string>& references, int max_char_n, double beta) {
  if (beta <= 0) fail(ErrorCode::InvalidArgument, "chrF beta must be positive");
  if (max_char_n < 1) fail(ErrorCode::InvalidArgument, "chrF order must be >= 1");
  if (references.empty()) fail(ErrorCode::EmptyReference, "chrF needs at least one reference");

  auto squeeze = [](std::string_view s) {
    std::u32string out;
    for (char32_t c : utf8_decode(s))
      if (!(c == U' ' || c == U'\t' || c == U'\n' || c == U'\r' || c == U'\f' || c == U'\v')) out.push_back(c);
    return out;
  };
  auto grams = [max_char_n](const std::u32string& s) {
    std::vector<std::map<std::u32string, int>> out(static_cast<std::size_t>(max_char_n));
    for (int n = 1; n <= max_char_n; ++n) {
      auto len = static_cast<std::size_t>(n);
      for (std::size_t i = 0; i + len <= s.size(); ++i) ++out[len - 1][s.substr(i, len)];
    }
    return out;
  };

  const auto hyp = grams(squeeze(hypothesis));
  const double factor = beta * beta;
  double best = -1.0;
  for (const auto& ref_text : references) {
    const auto ref = grams(squeeze(ref_text));
    double avg_p = 0.0, avg_r = 0.0;
    int effective = 0;
    for (std::size_t k = 0; k < hyp.size(); ++k) {
      int n_hyp = 0, n_ref = 0, n_match = 0;
      for (const auto& [g, c] : hyp[k]) {
        n_hyp += c;
        auto it = ref[k].find(g);
        if (it != ref[k].end()) n_match += std::min(c, it->second);
      }
      for (const auto& [g, c] : ref[k]) n_ref += c;
      if (n_ref == 0) n_hyp = 0;
      if (n_hyp > 0 && n_ref > 0) {
        avg_p += static_cast<double>(n_match) / n_hyp;
        avg_r += static_cast<double>(n_match) / n_ref;
        ++effective;
      }
    }
    double f = 0.0;
    if (effective > 0) {
      avg_p /= effective;
      avg_r /= effective;
      if (avg_p + avg_r > 0) f = (1 + factor) * avg_p * avg_r / (factor * avg_p + avg_r);
    }
    best = std::max(best, f);
  }
  return best;
}

// ---------------------------------------------------------------- METEOR

namespace {

using Enumerated = std::vector<std::pair<std::size_t, std::string>>;

// Walks the hypothesis from the end; each word takes the highest-index
// unused reference word with the same form. Matched entries are removed
// from both lists.
std::vector<std::pair<std::size_t, std::size_t>> match_enums(Enumerated& hyp, Enumerated& ref) {
  std::map<std::string, std::vector<std::size_t>> positions;
  for (std::size_t j = 0; j < ref.size(); ++j) positions[ref[j].second].push_back(j);
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  std::vector<bool> hyp_used(hyp.size(), false), ref_used(ref.size(), false);
  for (std::size_t i = hyp.size(); i-- > 0;) {
    auto it = positions.find(hyp[i].second);
    if (it == positions.end() || it->second.empty()) continue;
    std::size_t j = it->second.back();
    it->second.pop_back();
    hyp_used[i] = ref_used[j] = true;
    matches.emplace_back(hyp[i].first, ref[j].first);
  }
  Enumerated hyp_left, ref_left;
  for (std::size_t i = 0; i < hyp.size(); ++i)
    if (!hyp_used[i]) hyp_left.push_back(hyp[i]);
  for (std::size_t j = 0; j < ref.size(); ++j)
    if (!ref_used[j]) ref_left.push_back(ref[j]);
  hyp = std::move(hyp_left);
  ref = std::move(ref_left);
  return matches;
}

}  // namespace

double meteor(const Tokens& hypothesis, const Tokens& reference, MeteorStages stages, MeteorParams params) {
  Enumerated hyp, ref;
  for (std::size_t i = 0; i < hypothesis.size(); ++i) hyp.emplace_back(i, ascii_lower(hypothesis[i]));
  for (std::size_t j = 0; j < reference.size(); ++j) ref.emplace_back(j, ascii_lower(reference[j]));
  if (hyp.empty() || ref.empty()) return 0.0;

  std::vector<std::pair<std::size_t, std::size_t>> matches;
  if (stages.exact) {
    auto m = match_enums(hyp, ref);
    matches.insert(matches.end(), m.begin(), m.end());
  }
  if (stages.stem) {
    Enumerated hyp_stems, ref_stems;
    for (const auto& [i, w] : hyp) hyp_stems.emplace_back(i, porter_stem(w));
    for (const auto& [j, w] : ref) ref_stems.emplace_back(j, porter_stem(w));
    auto m = match_enums(hyp_stems, ref_stems);
    matches.insert(matches.end(), m.begin(), m.end());
  }
  if (matches.empty()) return 0.0;
  std::stable_sort(matches.begin(), matches.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  int chunks = 1;
  for (std::size_t i = 0; i + 1 < matches.size(); ++i)
    if (!(matches[i + 1].first == matches[i].first + 1 && matches[i + 1].second == matches[i].second + 1)) ++chunks;

  const double m = static_cast<double>(matches.size());
  const double precision = m / static_cast<double>(hypothesis.size());
  const double recall = m / static_cast<double>(reference.size());
  const double fmean = precision * recall / (params.alpha * precision + (1 - params.alpha) * recall);
  const double penalty = params.gamma * std::pow(chunks / m, params.beta_frag);
  return (1 - penalty) * fmean;
}

double meteor(const Tokens& hypothesis, const std::vector<Tokens>& references, MeteorStages stages, MeteorParams params) {
  if (references.empty()) fail(ErrorCode::EmptyReference, "METEOR needs at least one reference");
  double best = 0.0;
  for (const auto& ref : references) best = std::max(best, meteor(hypothesis, ref, stages, params));
  return best;
}

// ---------------------------------------------------------------- ROUGE

PrfScore rouge_n_detail(const Tokens& hypothesis, const Tokens& reference, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "ROUGE-N order must be >= 1");
  auto hyp = count_ngrams(hypothesis, n);
  auto ref = count_ngrams(reference, n);
  int overlap = 0, hyp_total = 0, ref_total = 0;
  for (const auto& [g, c] : ref) {
    ref_total += c;
    auto it = hyp.find(g);
    if (it != hyp.end()) overlap += std::min(c, it->second);
  }
  for (const auto& [g, c] : hyp) hyp_total += c;
  PrfScore s;
  s.precision = static_cast<double>(overlap) / std::max(hyp_total, 1);
  s.recall = static_cast<double>(overlap) / std::max(ref_total, 1);
  s.f1 = f_measure(s.precision, s.recall);
  return s;
}

PrfScore rouge_l_detail(const Tokens& hypothesis, const Tokens& reference) {
  PrfScore s;
  if (hypothesis.empty() || reference.empty()) return s;
  const std::size_t rows = reference.size(), cols = hypothesis.size();
  std::vector<std::vector<int>> table(rows + 1, std::vector<int>(cols + 1, 0));
  for (std::size_t i = 1; i <= rows; ++i)
    for (std::size_t j = 1; j <= cols; ++j)
      table[i][j] = reference[i - 1] == hypothesis[j - 1] ? table[i - 1][j - 1] + 1
                                                           : std::max(table[i - 1][j], table[i][j - 1]);
  const double lcs = table[rows][cols];
  s.precision = lcs / static_cast<double>(cols);
  s.recall = lcs / static_cast<double>(rows);
  s.f1 = f_measure(s.precision, s.recall);
  return s;
}

double rouge_n(const Tokens& hypothesis, const std::vector<Tokens>& references, int n) {
  if (references.empty()) fail(ErrorCode::EmptyReference, "ROUGE needs at least one reference");
  double best = 0.0;
  for (const auto& ref : references) best = std::max(best, rouge_n_detail(hypothesis, ref, n).f1);
  return best;
}

double rouge_l(const Tokens& hypothesis, const std::vector<Tokens>& references) {
  if (references.empty()) fail(ErrorCode::EmptyReference, "ROUGE needs at least one reference");
  double best = 0.0;
  for (const auto& ref : references) best = std::max(best, rouge_l_detail(hypothesis, ref).f1);
  return best;
}

// ---------------------------------------------------------------- TER

namespace {

constexpr int kMaxShiftSize = 10;
constexpr int kMaxShiftDist = 50;
constexpr int kBeamWidth = 25;
constexpr int kMaxShiftCandidates = 1000;
constexpr long long kInfinity = 10'000'000'000'000'000LL;

enum Op : char { kIns = 'i', kDel = 'd', kNop = ' ', kSub = 's', kUndef = 'x' };

struct Cell {
  long long cost = kInfinity;
  char op = kUndef;
};

// Edit distance from hyp to ref, restricted to a band around the length
// diagonal. Returns the cost and the operation trace ('d' consumes a
// hypothesis word, 'i' a reference word).
std::pair<int, std::string> beam_edit_distance(const Tokens& hyp, const Tokens& ref) {
  const std::size_t nh = hyp.size(), nr = ref.size();
  std::vector<std::vector<Cell>> dist(nh + 1, std::vector<Cell>(nr + 1));
  for (std::size_t j = 0; j <= nr; ++j) dist[0][j] = {static_cast<long long>(j), kIns};
  const double ratio = nh ? static_cast<double>(nr) / static_cast<double>(nh) : 1.0;
  long long beam = kBeamWidth;
  if (kBeamWidth < ratio / 2) beam = static_cast<long long>(std::ceil(ratio / 2 + kBeamWidth));

  for (std::size_t i = 1; i <= nh; ++i) {
    long long diag = static_cast<long long>(std::floor(static_cast<double>(i) * ratio));
    long long min_j = std::max(0LL, diag - beam);
    long long max_j = std::min(static_cast<long long>(nr) + 1, diag + beam);
    if (i == nh) max_j = static_cast<long long>(nr) + 1;
    for (long long jj = min_j; jj < max_j; ++jj) {
      auto j = static_cast<std::size_t>(jj);
      if (j == 0) {
        dist[i][0] = {dist[i - 1][0].cost + 1, kDel};
        continue;
      }
      bool same = hyp[i - 1] == ref[j - 1];
      const Cell options[3] = {{dist[i - 1][j - 1].cost + (same ? 0 : 1), same ? kNop : kSub},
                               {dist[i - 1][j].cost + 1, kDel},
                               {dist[i][j - 1].cost + 1, kIns}};
      for (const auto& o : options)
        if (dist[i][j].cost > o.cost) dist[i][j] = o;
    }
  }

  std::string trace;
  std::size_t i = nh, j = nr;
  while (i > 0 || j > 0) {
    char op = dist[i][j].op;
    trace.push_back(op);
    if (op == kSub || op == kNop) {
      --i;
      --j;
    } else if (op == kIns) {
      --j;
    } else if (op == kDel) {
      --i;
    } else {
      fail(ErrorCode::InvalidArgument, "TER beam search left the cell undefined");
    }
  }
  std::reverse(trace.begin(), trace.end());
  return {static_cast<int>(dist[nh][nr].cost), trace};
}

struct Alignment {
  std::vector<long long> align;  // reference position -> hypothesis position
  std::vector<int> ref_err;
  std::vector<int> hyp_err;
};

Alignment trace_to_alignment(const std::string& flipped) {
  Alignment a;
  long long ph = -1, pr = -1;
  for (char op : flipped) {
    if (op == kNop || op == kSub) {
      ++ph;
      ++pr;
      a.align.push_back(ph);
      a.hyp_err.push_back(op == kSub);
      a.ref_err.push_back(op == kSub);
    } else if (op == kIns) {
      ++ph;
      a.hyp_err.push_back(1);
    } else {
      ++pr;
      a.align.push_back(ph);
      a.ref_err.push_back(1);
    }
  }
  return a;
}

Tokens slice(const Tokens& w, long long from, long long to) {
  const auto n = static_cast<long long>(w.size());
  from = std::clamp(from, 0LL, n);
  to = std::clamp(to, 0LL, n);
  if (to <= from) return {};
  return Tokens(w.begin() + from, w.begin() + to);
}

Tokens perform_shift(const Tokens& w, long long start, long long length, long long target) {
  Tokens out;
  auto add = [&out](const Tokens& part) { out.insert(out.end(), part.begin(), part.end()); };
  const auto n = static_cast<long long>(w.size());
  if (target < start) {
    add(slice(w, 0, target));
    add(slice(w, start, start + length));
    add(slice(w, target, start));
    add(slice(w, start + length, n));
  } else if (target > start + length) {
    add(slice(w, 0, start));
    add(slice(w, start + length, target));
    add(slice(w, start, start + length));
    add(slice(w, target, n));
  } else {
    add(slice(w, 0, start));
    add(slice(w, start + length, length + target));
    add(slice(w, start, start + length));
    add(slice(w, length + target, n));
  }
  return out;
}

struct ShiftCandidate {
  int gain;
  long long length;
  long long neg_start_h;
  long long neg_idx;
  Tokens words;

  auto key() const { return std::tie(gain, length, neg_start_h, neg_idx, words); }
};

struct ShiftOutcome {
  int gain = 0;
  Tokens words;
};

ShiftOutcome best_shift(const Tokens& hyp, const Tokens& ref, int& checked) {
  auto [pre_score, inv_trace] = beam_edit_distance(hyp, ref);
  std::string trace = inv_trace;
  for (char& op : trace) op = op == kIns ? char(kDel) : op == kDel ? char(kIns) : op;
  Alignment a = trace_to_alignment(trace);

  std::optional<ShiftCandidate> best;
  const auto nh = static_cast<long long>(hyp.size()), nr = static_cast<long long>(ref.size());
  auto sum = [](const std::vector<int>& v, long long from, long long len) {
    int s = 0;
    for (long long k = from; k < from + len && k < static_cast<long long>(v.size()); ++k) s += v[static_cast<std::size_t>(k)];
    return s;
  };
  bool stop = false;
  for (long long sh = 0; sh < nh && !stop; ++sh) {
    for (long long sr = 0; sr < nr && !stop; ++sr) {
      if (std::llabs(sr - sh) > kMaxShiftDist) continue;
      for (long long length = 1; length <= kMaxShiftSize; ++length) {
        if (hyp[static_cast<std::size_t>(sh + length - 1)] != ref[static_cast<std::size_t>(sr + length - 1)]) break;
        // One (start_h, start_r, length) pair.
        bool skip = sum(a.hyp_err, sh, length) == 0 || sum(a.ref_err, sr, length) == 0;
        long long aligned = a.align[static_cast<std::size_t>(sr)];
        if (!skip && sh <= aligned && aligned < sh + length) skip = true;
        if (!skip) {
          long long prev_idx = -1;
          for (long long offset = -1; offset < length; ++offset) {
            long long idx;
            if (sr + offset == -1)
              idx = 0;
            else if (sr + offset < static_cast<long long>(a.align.size()))
              idx = a.align[static_cast<std::size_t>(sr + offset)] + 1;
            else
              break;
            if (idx == prev_idx) continue;
            prev_idx = idx;
            Tokens shifted = perform_shift(hyp, sh, length, idx);
            ShiftCandidate cand{pre_score - beam_edit_distance(shifted, ref).first, length, -sh, -idx, std::move(shifted)};
            ++checked;
            if (!best || cand.key() > best->key()) best = std::move(cand);
          }
          if (checked >= kMaxShiftCandidates) {
            stop = true;
            break;
          }
        }
        if (sh + length == nh || sr + length == nr) break;
      }
    }
  }
  if (!best) return {0, hyp};
  return {best->gain, std::move(best->words)};
}

}  // namespace

TerResult ter_detail(const Tokens& hypothesis, const Tokens& reference) {
  TerResult r;
  r.reference_length = reference.size();
  if (reference.empty()) {
    r.edits = static_cast<int>(hypothesis.size());
    r.score = r.edits > 0 ? 1.0 : 0.0;
    return r;
  }
  Tokens current = hypothesis;
  int checked = 0;
  while (true) {
    ShiftOutcome out = best_shift(current, reference, checked);
    if (checked >= kMaxShiftCandidates) break;
    if (out.gain <= 0) break;
    ++r.shifts;
    current = std::move(out.words);
  }
  r.edits = r.shifts + beam_edit_distance(current, reference).first;
  r.score = static_cast<double>(r.edits) / static_cast<double>(reference.size());
  return r;
}

double ter(const Tokens& hypothesis, const std::vector<Tokens>& references) {
  if (references.empty()) fail(ErrorCode::EmptyReference, "TER needs at least one reference");
  double best = 0.0;
  for (std::size_t k = 0; k < references.size(); ++k) {
    double s = ter_detail(hypothesis, references[k]).score;
    if (k == 0 || s < best) best = s;
  }
  return best;
}

}  // namespace focalqg
