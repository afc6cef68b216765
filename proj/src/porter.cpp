#include "coocnet/porter.hpp"

#include <array>
#include <cstddef>

namespace coocnet {

namespace {

// A letter is a consonant unless it is a/e/i/o/u, or a 'y' preceded by a
// consonant (so the y in "toy" is a consonant, the y in "syzygy" is not).
bool is_consonant(const std::string& w, std::size_t i) {
  switch (w[i]) {
    case 'a':
    case 'e':
    case 'i':
    case 'o':
    case 'u':
      return false;
    case 'y':
      return i == 0 ? true : !is_consonant(w, i - 1);
    default:
      return true;
  }
}

// Number of VC sequences in w[0..len): [C](VC)^m[V].
int measure(const std::string& w, std::size_t len) {
  std::size_t i = 0;
  int m = 0;
  while (i < len && is_consonant(w, i)) ++i;
  for (;;) {
    while (i < len && !is_consonant(w, i)) ++i;
    if (i >= len) return m;
    while (i < len && is_consonant(w, i)) ++i;
    ++m;
  }
}

bool contains_vowel(const std::string& w, std::size_t len) {
  for (std::size_t i = 0; i < len; ++i) {
    if (!is_consonant(w, i)) return true;
  }
  return false;
}

// *d: ends with a double consonant.
bool double_consonant(const std::string& w, std::size_t len) {
  if (len < 2) return false;
  return w[len - 1] == w[len - 2] && is_consonant(w, len - 1);
}

// *o: ends consonant-vowel-consonant where the final consonant is not w/x/y.
bool ends_cvc(const std::string& w, std::size_t len) {
  if (len < 3) return false;
  if (!is_consonant(w, len - 3) || is_consonant(w, len - 2) ||
      !is_consonant(w, len - 1)) {
    return false;
  }
  const char c = w[len - 1];
  return c != 'w' && c != 'x' && c != 'y';
}

bool ends_with(const std::string& w, std::string_view suffix) {
  return w.size() >= suffix.size() &&
         w.compare(w.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

// Within a step the longest matching suffix picks the (only) candidate rule;
// if its measure condition fails, the step does nothing. Tables below are
// ordered longest suffix first.
void apply_rule_table(std::string& w, std::initializer_list<Rule> rules,
                      int min_measure) {
  for (const Rule& rule : rules) {
    if (!ends_with(w, rule.suffix)) continue;
    const std::size_t stem_len = w.size() - rule.suffix.size();
    if (measure(w, stem_len) > min_measure) {
      w.replace(stem_len, rule.suffix.size(), rule.replacement);
    }
    return;
  }
}

void step1a(std::string& w) {
  if (ends_with(w, "sses")) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ies")) {
    w.erase(w.size() - 2);
  } else if (ends_with(w, "ss")) {
    // keep
  } else if (ends_with(w, "s")) {
    w.pop_back();
  }
}

void step1b(std::string& w) {
  if (ends_with(w, "eed")) {
    if (measure(w, w.size() - 3) > 0) w.pop_back();
    return;
  }
  bool stripped = false;
  if (ends_with(w, "ed") && contains_vowel(w, w.size() - 2)) {
    w.erase(w.size() - 2);
    stripped = true;
  } else if (ends_with(w, "ing") && contains_vowel(w, w.size() - 3)) {
    w.erase(w.size() - 3);
    stripped = true;
  }
  if (!stripped) return;

  if (ends_with(w, "at") || ends_with(w, "bl") || ends_with(w, "iz")) {
    w.push_back('e');
  } else if (double_consonant(w, w.size())) {
    const char c = w.back();
    if (c != 'l' && c != 's' && c != 'z') w.pop_back();
  } else if (measure(w, w.size()) == 1 && ends_cvc(w, w.size())) {
    w.push_back('e');
  }
}

void step1c(std::string& w) {
  if (ends_with(w, "y") && contains_vowel(w, w.size() - 1)) {
    w.back() = 'i';
  }
}

void step2(std::string& w) {
  apply_rule_table(w,
                   {
                       {"ational", "ate"},
                       {"ization", "ize"},
                       {"iveness", "ive"},
                       {"fulness", "ful"},
                       {"ousness", "ous"},
                       {"tional", "tion"},
                       {"biliti", "ble"},
                       {"ation", "ate"},
                       {"alism", "al"},
                       {"aliti", "al"},
                       {"iviti", "ive"},
                       {"ousli", "ous"},
                       {"entli", "ent"},
                       {"enci", "ence"},
                       {"anci", "ance"},
                       {"izer", "ize"},
                       {"abli", "able"},
                       {"alli", "al"},
                       {"ator", "ate"},
                       {"eli", "e"},
                   },
                   0);
}

void step3(std::string& w) {
  apply_rule_table(w,
                   {
                       {"icate", "ic"},
                       {"ative", ""},
                       {"alize", "al"},
                       {"iciti", "ic"},
                       {"ical", "ic"},
                       {"ness", ""},
                       {"ful", ""},
                   },
                   0);
}

void step4(std::string& w) {
  static constexpr std::array<std::string_view, 19> suffixes = {
      "ement", "ance", "ence", "able", "ible", "ment", "ant",
      "ent",   "ion",  "ism",  "ate",  "iti",  "ous",  "ive",
      "ize",   "al",   "er",   "ic",   "ou"};
  for (std::string_view suffix : suffixes) {
    if (!ends_with(w, suffix)) continue;
    const std::size_t stem_len = w.size() - suffix.size();
    // ion is deleted only after an s or t.
    if (suffix == "ion" &&
        (stem_len == 0 || (w[stem_len - 1] != 's' && w[stem_len - 1] != 't'))) {
      return;
    }
    if (measure(w, stem_len) > 1) w.erase(stem_len);
    return;
  }
}

void step5a(std::string& w) {
  if (!ends_with(w, "e")) return;
  const int m = measure(w, w.size() - 1);
  if (m > 1 || (m == 1 && !ends_cvc(w, w.size() - 1))) w.pop_back();
}

void step5b(std::string& w) {
  if (w.size() >= 2 && w.back() == 'l' && double_consonant(w, w.size()) &&
      measure(w, w.size() - 1) > 1) {
    w.pop_back();
  }
}

} // namespace

std::string porter_stem(std::string_view word) {
  std::string w(word);
  if (w.size() <= 2) return w;
  step1a(w);
  step1b(w);
  step1c(w);
  step2(w);
  step3(w);
  step4(w);
  step5a(w);
  step5b(w);
  return w;
}

} // namespace coocnet
