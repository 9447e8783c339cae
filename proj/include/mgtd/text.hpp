#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace mgtd {

/// Versioned word lists shipped under data/ that fix the behaviour of the
/// cleaning, tokenizing, and sentence-splitting rules.
struct TextResources {
  std::unordered_set<std::string> stopwords;
  std::unordered_set<std::string> easy_words;
  std::vector<std::string> abbreviations;  // lowercase, each ends with '.'

  static TextResources load(const std::filesystem::path& data_dir);

  // Loaded once from default_data_dir().
  static const TextResources& defaults();
};

// MGTD_DATA_DIR environment variable if set, else the compiled-in path.
std::filesystem::path default_data_dir();

// Reads a one-entry-per-line list; '#' lines and blank lines skipped.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

/// NFC-normalize, drop control characters and symbols, collapse whitespace,
/// remove isolated single digits, trim. Total and idempotent.
std::string clean_text(std::string_view raw);

bool is_english(std::string_view text, const TextResources& res = TextResources::defaults());

/// A word token with its original casing, as found in the text.
struct WordSpan {
  std::string text;
  bool starts_upper = false;
  bool is_digit_run = false;
};

// Tokens of the grammar letter(letter|digit|'|-)* plus digit runs, case kept.
std::vector<WordSpan> scan_words(std::string_view text);

std::vector<std::string> tokenize(std::string_view text, bool drop_stopwords,
                                  const TextResources& res = TextResources::defaults());

std::vector<std::string> split_sentences(std::string_view text,
                                         const TextResources& res = TextResources::defaults());

// Lowercase a UTF-8 string code point by code point.
std::string to_lower(std::string_view s);

// Number of alphabetic code points.
std::size_t count_letters(std::string_view s);

// Decoded code points; invalid sequences become U+FFFD.
std::u32string to_u32(std::string_view s);

// Code point count.
std::size_t utf8_length(std::string_view s);

}  // namespace mgtd
