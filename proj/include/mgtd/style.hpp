#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "mgtd/corpus.hpp"
#include "mgtd/execution.hpp"
#include "mgtd/matrix.hpp"

namespace mgtd {

enum class CoarsePos : int {
  Noun, Verb, Adjective, Adverb, Pronoun, Determiner, Preposition, Conjunction, Number, Punctuation, Proper, Other
};

inline constexpr std::size_t kPosCount = 12;
inline constexpr std::array<const char*, kPosCount> kPosNames = {
    "noun", "verb", "adjective", "adverb", "pronoun", "determiner", "preposition", "conjunction",
    "number", "punctuation", "proper", "other"};

/// Rule-based coarse tagger: closed-class lookup, then suffix rules
/// (-ly adverb; inflected known verb stems; -tion/-ness/-ment noun;
/// -ous/-ful/-ive/-al adjective), then capitalized mid-sentence -> proper,
/// digits -> number, otherwise noun.
CoarsePos tag_word(std::string_view word, bool sentence_initial);

std::vector<CoarsePos> tag_sentence(std::string_view sentence);

struct StyleFeatures {
  double mean_sentence_length = 0;  // tokens
  double sd_sentence_length = 0;    // sample SD, 0 for one sentence
  double mean_word_length = 0;      // characters
  double type_token_ratio = 0;
  std::array<double, kPosCount> pos{};  // proportions, sum to 1

  static constexpr std::size_t kWidth = 4 + kPosCount;
  std::array<double, kWidth> values() const;
  static std::array<std::string, kWidth> names();  // "style:<name>"
};

StyleFeatures style_features(const std::vector<std::string>& sentences);
StyleFeatures style_features(const CleanDocument& doc);

// Rows of style features, unscaled.
std::vector<std::array<double, StyleFeatures::kWidth>> style_rows(const std::vector<CleanDocument>& docs,
                                                                 Execution exec = Execution::Parallel);

}  // namespace mgtd
