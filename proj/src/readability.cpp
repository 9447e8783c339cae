#include "mgtd/readability.hpp"

#include <cmath>

#include "mgtd/error.hpp"

namespace mgtd {

namespace {

bool is_vowel(char32_t c) {
  switch (c) {
    case U'a': case U'e': case U'i': case U'o': case U'u': case U'y':
    case U'à': case U'á': case U'â': case U'ä': case U'è': case U'é': case U'ê': case U'ë':
    case U'ì': case U'í': case U'î': case U'ï': case U'ò': case U'ó': case U'ô': case U'ö':
    case U'ù': case U'ú': case U'û': case U'ü':
      return true;
    default:
      return false;
  }
}

bool is_ascii_letter(char32_t c) { return (c >= U'a' && c <= U'z'); }

void require_words(const TextCounts& c, const char* what) {
  if (c.sentences == 0 || c.words == 0) throw InputError(std::string(what) + ": degenerate document");
}

}  // namespace

int count_syllables(std::string_view word) {
  std::u32string w;
  for (char32_t c : to_u32(to_lower(word))) {
    if (c != U'\'' && c != U'-') w.push_back(c);
  }
  int groups = 0;
  bool in_group = false;
  for (char32_t c : w) {
    const bool v = is_vowel(c);
    if (v && !in_group) ++groups;
    in_group = v;
  }
  const std::size_t n = w.size();
  if (n >= 2 && w[n - 1] == U'e' && !is_vowel(w[n - 2])) {
    const bool consonant_le = n >= 3 && w[n - 2] == U'l' && !is_vowel(w[n - 3]) && is_ascii_letter(w[n - 3]);
    if (!consonant_le) --groups;
  }
  return groups < 1 ? 1 : groups;
}

bool is_easy_word(std::string_view lower_word, const std::unordered_set<std::string>& easy_words) {
  const std::string w(lower_word);
  if (easy_words.contains(w)) return true;
  auto strip = [&](std::string_view suffix) -> bool {
    if (w.size() <= suffix.size() + 1 || !w.ends_with(suffix)) return false;
    return easy_words.contains(w.substr(0, w.size() - suffix.size()));
  };
  return strip("s") || strip("es") || strip("ed") || strip("ing");
}

TextCounts text_counts(const std::vector<std::string>& sentences, const std::unordered_set<std::string>& easy_words) {
  TextCounts c;
  for (const auto& sentence : sentences) {
    bool first = true;
    std::size_t words_here = 0;
    for (const auto& w : scan_words(sentence)) {
      if (w.is_digit_run) continue;
      ++words_here;
      const int syl = count_syllables(w.text);
      c.syllables += static_cast<std::size_t>(syl);
      c.letters += count_letters(w.text);
      const bool proper = w.starts_upper && !first;
      const bool hyphenated = w.text.find('-') != std::string::npos;
      if (syl >= 3) {
        ++c.polysyllables;
        if (!proper && !hyphenated) ++c.complex_words;
      }
      if (!is_easy_word(to_lower(w.text), easy_words)) ++c.difficult_words;
      first = false;
    }
    c.words += words_here;
    if (words_here > 0) ++c.sentences;
  }
  return c;
}

double gunning_fog(const TextCounts& c) {
  require_words(c, "gunning_fog");
  const double words = static_cast<double>(c.words);
  return 0.4 * (words / static_cast<double>(c.sentences) + 100.0 * static_cast<double>(c.complex_words) / words);
}

double smog(const TextCounts& c) {
  if (c.sentences == 0) throw InputError("smog: degenerate document");
  return 1.0430 * std::sqrt(static_cast<double>(c.polysyllables) * 30.0 / static_cast<double>(c.sentences)) + 3.1291;
}

double dale_chall(const TextCounts& c) {
  require_words(c, "dale_chall");
  const double words = static_cast<double>(c.words);
  const double pct_difficult = 100.0 * static_cast<double>(c.difficult_words) / words;
  double score = 0.1579 * pct_difficult + 0.0496 * (words / static_cast<double>(c.sentences));
  if (pct_difficult > 5.0) score += 3.6365;
  return score;
}

double flesch_reading_ease(const TextCounts& c) {
  require_words(c, "flesch_reading_ease");
  const double words = static_cast<double>(c.words);
  return 206.835 - 1.015 * (words / static_cast<double>(c.sentences)) -
         84.6 * (static_cast<double>(c.syllables) / words);
}

double coleman_liau(const TextCounts& c) {
  if (c.words == 0) throw InputError("coleman_liau: degenerate document");
  const double words = static_cast<double>(c.words);
  const double letters_per_100 = 100.0 * static_cast<double>(c.letters) / words;
  const double sentences_per_100 = 100.0 * static_cast<double>(c.sentences) / words;
  return 0.0588 * letters_per_100 - 0.296 * sentences_per_100 - 15.8;
}

ReadabilityScores readability(const CleanDocument& doc, const TextResources& res) {
  if (res.easy_words.empty()) throw InputError("dale_chall: easy-word list is empty");
  const TextCounts c = text_counts(doc.sentences, res.easy_words);
  ReadabilityScores s;
  s.gunning_fog = gunning_fog(c);
  s.smog = smog(c);
  s.dale_chall = dale_chall(c);
  s.flesch_reading_ease = flesch_reading_ease(c);
  s.coleman_liau = coleman_liau(c);
  s.smog_short_sample = c.sentences < 30;
  return s;
}

std::array<double, 5> as_array(const ReadabilityScores& s) {
  return {s.gunning_fog, s.smog, s.dale_chall, s.flesch_reading_ease, s.coleman_liau};
}

}  // namespace mgtd
