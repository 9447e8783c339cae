#include "mgtd/text.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>

#include "mgtd/error.hpp"

#ifndef MGTD_DATA_DIR
#define MGTD_DATA_DIR "data"
#endif

namespace mgtd {

namespace {

std::vector<UChar32> decode(std::string_view s) {
  std::vector<UChar32> out;
  out.reserve(s.size());
  const auto* p = reinterpret_cast<const uint8_t*>(s.data());
  const int32_t n = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < n) {
    UChar32 c;
    U8_NEXT(p, i, n, c);
    if (c < 0) c = 0xFFFD;
    out.push_back(c);
  }
  return out;
}

void append_utf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(reinterpret_cast<uint8_t*>(buf), len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

bool is_letter(UChar32 c) { return u_isalpha(c) != 0; }
bool is_digit(UChar32 c) { return c >= '0' && c <= '9'; }
bool is_alnum(UChar32 c) { return is_letter(c) || u_isdigit(c) != 0; }
bool is_space(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

bool is_basic_punct(UChar32 c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '!': case '?':
    case '\'': case '"': case '(': case ')': case '-':
      return true;
    default:
      return false;
  }
}

UChar32 fold_typography(UChar32 c) {
  switch (c) {
    case 0x2018: case 0x2019: case 0x02BC: return '\'';
    case 0x201C: case 0x201D: return '"';
    case 0x2010: case 0x2011: case 0x2013: case 0x2014: return '-';
    default: return c;
  }
}

std::string nfc(std::string_view s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return std::string(s);
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(icu::StringPiece(s.data(), static_cast<int32_t>(s.size())));
  icu::UnicodeString out = norm->normalize(u, status);
  if (U_FAILURE(status)) return std::string(s);
  std::string result;
  out.toUTF8String(result);
  return result;
}

bool is_decimal_sep(UChar32 c) { return c == '.' || c == ','; }

}  // namespace

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("MGTD_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return MGTD_DATA_DIR;
}

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read word list: " + path.string());
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    words.push_back(line);
  }
  return words;
}

TextResources TextResources::load(const std::filesystem::path& data_dir) {
  TextResources res;
  for (auto& w : read_word_list(data_dir / "stopwords.txt")) res.stopwords.insert(to_lower(w));
  for (auto& w : read_word_list(data_dir / "easy_words.txt")) res.easy_words.insert(to_lower(w));
  for (auto& w : read_word_list(data_dir / "abbreviations.txt")) res.abbreviations.push_back(to_lower(w));
  if (res.easy_words.empty()) throw InputError("easy word list is empty");
  return res;
}

const TextResources& TextResources::defaults() {
  static const TextResources instance = load(default_data_dir());
  return instance;
}

std::string to_lower(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (UChar32 c : decode(s)) append_utf8(out, u_tolower(c));
  return out;
}

std::size_t count_letters(std::string_view s) {
  std::size_t n = 0;
  for (UChar32 c : decode(s)) n += is_letter(c) ? 1 : 0;
  return n;
}

std::size_t utf8_length(std::string_view s) { return decode(s).size(); }

std::u32string to_u32(std::string_view s) {
  const auto cps = decode(s);
  return std::u32string(cps.begin(), cps.end());
}

std::string clean_text(std::string_view raw) {
  const std::vector<UChar32> cps = decode(nfc(raw));

  // Keep letters, digits, basic punctuation; whitespace becomes ' '.
  std::vector<UChar32> kept;
  kept.reserve(cps.size());
  for (UChar32 c0 : cps) {
    const UChar32 c = fold_typography(c0);
    if (is_space(c) || c == '\t' || c == '\n' || c == '\r') {
      kept.push_back(' ');
    } else if (is_alnum(c) || is_basic_punct(c) || u_getCombiningClass(c) > 0) {
      kept.push_back(c);
    }
  }

  // Isolated single digits: neither neighbour is alphanumeric, and the
  // digit is not one side of a decimal such as 3.5 or 1,2.
  std::vector<UChar32> no_digits;
  no_digits.reserve(kept.size());
  const std::size_t n = kept.size();
  for (std::size_t i = 0; i < n; ++i) {
    const UChar32 c = kept[i];
    if (is_digit(c)) {
      const bool prev_alnum = i > 0 && is_alnum(kept[i - 1]);
      const bool next_alnum = i + 1 < n && is_alnum(kept[i + 1]);
      const bool decimal_after = i + 2 < n && is_decimal_sep(kept[i + 1]) && is_digit(kept[i + 2]);
      const bool decimal_before = i >= 2 && is_decimal_sep(kept[i - 1]) && is_digit(kept[i - 2]);
      if (!prev_alnum && !next_alnum && !decimal_after && !decimal_before) continue;
    }
    no_digits.push_back(c);
  }

  std::string out;
  out.reserve(no_digits.size());
  bool pending_space = false;
  for (UChar32 c : no_digits) {
    if (c == ' ') {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    append_utf8(out, c);
  }
  return out;
}

bool is_english(std::string_view text, const TextResources& res) {
  std::size_t letters = 0;
  std::size_t latin = 0;
  for (UChar32 c : decode(text)) {
    if (!is_letter(c)) continue;
    ++letters;
    UErrorCode status = U_ZERO_ERROR;
    if (uscript_getScript(c, &status) == USCRIPT_LATIN) ++latin;
  }
  if (letters == 0) return false;
  if (static_cast<double>(latin) / static_cast<double>(letters) < 0.9) return false;

  const auto tokens = tokenize(text, false, res);
  if (tokens.empty()) return false;
  std::size_t known = 0;
  for (const auto& t : tokens) {
    if (res.stopwords.contains(t) || res.easy_words.contains(t)) ++known;
  }
  return static_cast<double>(known) / static_cast<double>(tokens.size()) >= 0.05;
}

std::vector<WordSpan> scan_words(std::string_view text) {
  const std::vector<UChar32> cps = decode(text);
  std::vector<WordSpan> words;
  const std::size_t n = cps.size();
  std::size_t i = 0;
  while (i < n) {
    const UChar32 c = cps[i];
    if (is_letter(c)) {
      std::size_t j = i + 1;
      while (j < n && (is_letter(cps[j]) || u_isdigit(cps[j]) || cps[j] == '\'' || cps[j] == '-' ||
                       u_getCombiningClass(cps[j]) > 0)) {
        ++j;
      }
      std::size_t end = j;
      while (end > i + 1 && (cps[end - 1] == '\'' || cps[end - 1] == '-')) --end;
      WordSpan w;
      for (std::size_t k = i; k < end; ++k) append_utf8(w.text, cps[k]);
      w.starts_upper = u_isupper(c) != 0 || u_istitle(c) != 0;
      words.push_back(std::move(w));
      i = j;
    } else if (is_digit(c)) {
      std::size_t j = i + 1;
      while (j < n && is_digit(cps[j])) ++j;
      WordSpan w;
      for (std::size_t k = i; k < j; ++k) append_utf8(w.text, cps[k]);
      w.is_digit_run = true;
      words.push_back(std::move(w));
      i = j;
    } else {
      ++i;
    }
  }
  return words;
}

std::vector<std::string> tokenize(std::string_view text, bool drop_stopwords, const TextResources& res) {
  std::vector<std::string> tokens;
  for (auto& w : scan_words(text)) {
    std::string t = w.is_digit_run ? std::move(w.text) : to_lower(w.text);
    if (drop_stopwords && res.stopwords.contains(t)) continue;
    tokens.push_back(std::move(t));
  }
  return tokens;
}

std::vector<std::string> split_sentences(std::string_view text, const TextResources& res) {
  const std::vector<UChar32> cps = decode(text);
  const std::size_t n = cps.size();
  std::vector<std::string> sentences;

  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && is_space(cps[begin])) ++begin;
    while (end > begin && is_space(cps[end - 1])) --end;
    if (begin == end) return;
    std::string s;
    for (std::size_t k = begin; k < end; ++k) append_utf8(s, cps[k]);
    sentences.push_back(std::move(s));
  };

  auto ends_with_abbreviation = [&](std::size_t begin, std::size_t period) {
    // Lowercased text from the sentence start through the period.
    std::string tail;
    for (std::size_t k = begin; k <= period; ++k) append_utf8(tail, u_tolower(cps[k]));
    for (const auto& abbr : res.abbreviations) {
      if (tail.size() < abbr.size()) continue;
      if (tail.compare(tail.size() - abbr.size(), abbr.size(), abbr) != 0) continue;
      const std::size_t at = tail.size() - abbr.size();
      if (at == 0) return true;
      const unsigned char before = static_cast<unsigned char>(tail[at - 1]);
      if (before < 0x80 && !std::isalnum(before)) return true;
    }
    return false;
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < n) {
    const UChar32 c = cps[i];
    if (c != '.' && c != '!' && c != '?') {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && (cps[j + 1] == '.' || cps[j + 1] == '!' || cps[j + 1] == '?')) ++j;
    while (j + 1 < n && (cps[j + 1] == '"' || cps[j + 1] == '\'' || cps[j + 1] == ')')) ++j;
    // j is the last character of the terminal cluster.
    bool boundary = false;
    if (j + 1 >= n) {
      boundary = true;
    } else if (is_space(cps[j + 1])) {
      std::size_t k = j + 1;
      while (k < n && is_space(cps[k])) ++k;
      boundary = k >= n || u_isupper(cps[k]) != 0 || u_istitle(cps[k]) != 0;
    }
    if (boundary && c == '.' && i == j && ends_with_abbreviation(start, i)) boundary = false;
    if (boundary) {
      emit(start, j + 1);
      start = j + 1;
    }
    i = j + 1;
  }
  emit(start, n);
  return sentences;
}

}  // namespace mgtd
