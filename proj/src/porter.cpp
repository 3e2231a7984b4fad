#include <functional>
#include <string>
#include <vector>

#include "focalqg/metrics.hpp"

namespace focalqg {

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool is_consonant(const std::string& w, std::size_t i) {
  if (is_vowel(w[i])) return false;
  if (w[i] == 'y') {
    bool negate = false;
    while (i > 0 && w[i] == 'y') {
      negate = !negate;
      --i;
    }
    return !is_vowel(w[i]) != negate;
  }
  return true;
}

std::vector<bool> consonant_flags(const std::string& w) {
  std::vector<bool> flags;
  flags.reserve(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (is_vowel(w[i]))
      flags.push_back(false);
    else if (w[i] == 'y')
      flags.push_back(i == 0 ? true : !flags[i - 1]);
    else
      flags.push_back(true);
  }
  return flags;
}

// Number of VC sequences in [C](VC)^m[V].
int measure(const std::string& stem) {
  auto flags = consonant_flags(stem);
  int m = 0;
  for (std::size_t i = 1; i < flags.size(); ++i)
    if (!flags[i - 1] && flags[i]) ++m;
  return m;
}

bool contains_vowel(const std::string& stem) {
  for (bool c : consonant_flags(stem))
    if (!c) return true;
  return false;
}

bool ends_double_consonant(const std::string& w) {
  return w.size() >= 2 && w[w.size() - 1] == w[w.size() - 2] && is_consonant(w, w.size() - 1);
}

bool ends_cvc(const std::string& w) {
  if (w.size() < 3) return false;
  std::size_t n = w.size();
  char last = w[n - 1];
  return is_consonant(w, n - 3) && !is_consonant(w, n - 2) && is_consonant(w, n - 1) && last != 'w' && last != 'x' &&
         last != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() && w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

using Condition = std::function<bool(const std::string&)>;

struct Rule {
  std::string_view suffix;  // "*d" = any doubled consonant
  std::string replacement;
  Condition condition;
};

// The first rule whose suffix matches decides; a failed condition leaves the
// word unchanged rather than trying later rules.
std::string apply_rules(const std::string& word, const std::vector<Rule>& rules) {
  for (const auto& rule : rules) {
    if (rule.suffix == "*d" && ends_double_consonant(word)) {
      std::string stem = word.substr(0, word.size() - 2);
      if (!rule.condition || rule.condition(stem)) return stem + rule.replacement;
      return word;
    }
    if (ends_with(word, rule.suffix)) {
      std::string stem = word.substr(0, word.size() - rule.suffix.size());
      if (!rule.condition || rule.condition(stem)) return stem + rule.replacement;
      return word;
    }
  }
  return word;
}

bool positive_measure(const std::string& stem) { return measure(stem) > 0; }
bool measure_gt_1(const std::string& stem) { return measure(stem) > 1; }

std::string step1a(const std::string& w) {
  return apply_rules(w, {{"sses", "ss", nullptr}, {"ies", "i", nullptr}, {"ss", "ss", nullptr}, {"s", "", nullptr}});
}

std::string step1b(const std::string& w) {
  if (ends_with(w, "eed")) {
    std::string stem = w.substr(0, w.size() - 3);
    return measure(stem) > 0 ? stem + "ee" : w;
  }
  std::string stem;
  bool removed = false;
  for (std::string_view suffix : {std::string_view("ed"), std::string_view("ing")}) {
    if (ends_with(w, suffix)) {
      stem = w.substr(0, w.size() - suffix.size());
      if (contains_vowel(stem)) {
        removed = true;
        break;
      }
    }
  }
  if (!removed) return w;
  char last = stem.empty() ? '\0' : stem.back();
  return apply_rules(stem, {{"at", "ate", nullptr},
                            {"bl", "ble", nullptr},
                            {"iz", "ize", nullptr},
                            {"*d", std::string(1, last), [last](const std::string&) { return last != 'l' && last != 's' && last != 'z'; }},
                            {"", "e", [](const std::string& s) { return measure(s) == 1 && ends_cvc(s); }}});
}

std::string step1c(const std::string& w) { return apply_rules(w, {{"y", "i", contains_vowel}}); }

std::string step2(const std::string& w) {
  return apply_rules(w, {{"ational", "ate", positive_measure}, {"tional", "tion", positive_measure},
                         {"enci", "ence", positive_measure},   {"anci", "ance", positive_measure},
                         {"izer", "ize", positive_measure},     {"abli", "able", positive_measure},
                         {"alli", "al", positive_measure},      {"entli", "ent", positive_measure},
                         {"eli", "e", positive_measure},        {"ousli", "ous", positive_measure},
                         {"ization", "ize", positive_measure},  {"ation", "ate", positive_measure},
                         {"ator", "ate", positive_measure},     {"alism", "al", positive_measure},
                         {"iveness", "ive", positive_measure},  {"fulness", "ful", positive_measure},
                         {"ousness", "ous", positive_measure},  {"aliti", "al", positive_measure},
                         {"iviti", "ive", positive_measure},    {"biliti", "ble", positive_measure}});
}

std::string step3(const std::string& w) {
  return apply_rules(w, {{"icate", "ic", positive_measure},
                         {"ative", "", positive_measure},
                         {"alize", "al", positive_measure},
                         {"iciti", "ic", positive_measure},
                         {"ical", "ic", positive_measure},
                         {"ful", "", positive_measure},
                         {"ness", "", positive_measure}});
}

std::string step4(const std::string& w) {
  return apply_rules(w, {{"al", "", measure_gt_1},
                         {"ance", "", measure_gt_1},
                         {"ence", "", measure_gt_1},
                         {"er", "", measure_gt_1},
                         {"ic", "", measure_gt_1},
                         {"able", "", measure_gt_1},
                         {"ible", "", measure_gt_1},
                         {"ant", "", measure_gt_1},
                         {"ement", "", measure_gt_1},
                         {"ment", "", measure_gt_1},
                         {"ent", "", measure_gt_1},
                         {"ion", "", [](const std::string& s) { return measure(s) > 1 && (s.back() == 's' || s.back() == 't'); }},
                         {"ou", "", measure_gt_1},
                         {"ism", "", measure_gt_1},
                         {"ate", "", measure_gt_1},
                         {"iti", "", measure_gt_1},
                         {"ous", "", measure_gt_1},
                         {"ive", "", measure_gt_1},
                         {"ize", "", measure_gt_1}});
}

std::string step5a(const std::string& w) {
  if (ends_with(w, "e")) {
    std::string stem = w.substr(0, w.size() - 1);
    int m = measure(stem);
    if (m > 1) return stem;
    if (m == 1 && !ends_cvc(stem)) return stem;
  }
  return w;
}

std::string step5b(const std::string& w) {
  return apply_rules(w, {{"ll", "l", [&w](const std::string&) { return measure(w.substr(0, w.size() - 1)) > 1; }}});
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w(word);
  for (char& c : w)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  if (w.empty()) return w;
  w = step1a(w);
  w = step1b(w);
  w = step1c(w);
  w = step2(w);
  w = step3(w);
  w = step4(w);
  w = step5a(w);
  w = step5b(w);
  return w;
}

}  // namespace focalqg
