#pragma once

#include <array>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "mgtd/corpus.hpp"
#include "mgtd/text.hpp"

namespace mgtd {

// Vowel-group syllable heuristic: groups of a/e/i/o/u/y, a trailing lone
// silent 'e' dropped unless the word ends in consonant+"le"; minimum 1.
int count_syllables(std::string_view word);

/// Surface counts every readability index is built from. Words are the
/// letter-initial tokens of each sentence with stopwords retained; digit
/// runs are not words here.
struct TextCounts {
  std::size_t sentences = 0;
  std::size_t words = 0;
  std::size_t syllables = 0;
  std::size_t letters = 0;
  std::size_t complex_words = 0;   // >=3 syllables, not proper, not hyphenated
  std::size_t polysyllables = 0;   // >=3 syllables
  std::size_t difficult_words = 0; // not on the easy-word list
};

TextCounts text_counts(const std::vector<std::string>& sentences,
                       const std::unordered_set<std::string>& easy_words);

double gunning_fog(const TextCounts& c);
double smog(const TextCounts& c);
double dale_chall(const TextCounts& c);
double flesch_reading_ease(const TextCounts& c);
double coleman_liau(const TextCounts& c);

// True if the word, or the word with -s/-es/-ed/-ing stripped, is listed.
bool is_easy_word(std::string_view lower_word, const std::unordered_set<std::string>& easy_words);

struct ReadabilityScores {
  double gunning_fog = 0.0;
  double smog = 0.0;
  double dale_chall = 0.0;
  double flesch_reading_ease = 0.0;
  double coleman_liau = 0.0;
  bool smog_short_sample = false;  // fewer than 30 sentences
};

inline constexpr std::array<const char*, 5> kReadabilityNames = {
    "gunning_fog", "smog", "dale_chall", "flesch_reading_ease", "coleman_liau"};

ReadabilityScores readability(const CleanDocument& doc, const TextResources& res = TextResources::defaults());

std::array<double, 5> as_array(const ReadabilityScores& s);

}  // namespace mgtd
