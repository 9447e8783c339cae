#include "mgtd/style.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "mgtd/error.hpp"
#include "mgtd/text.hpp"

namespace mgtd {

namespace {

using WordSet = std::unordered_set<std::string_view>;

const WordSet& determiners() {
  static const WordSet s = {"a",    "an",   "the",     "this",    "that", "these", "those",   "each",
                            "every", "some", "any",     "no",      "all",  "both",  "either",  "neither",
                            "another", "such", "much", "many", "few", "several", "what", "which", "whose"};
  return s;
}

const WordSet& pronouns() {
  static const WordSet s = {"i",        "me",        "my",       "mine",     "myself",     "you",      "your",
                            "yours",    "yourself",  "yourselves", "he",     "him",        "his",      "himself",
                            "she",      "her",       "hers",     "herself",  "it",         "its",      "itself",
                            "we",       "us",        "our",      "ours",     "ourselves",  "they",     "them",
                            "their",    "theirs",    "themselves", "who",    "whom",       "someone",  "anyone",
                            "everyone", "nobody",    "something", "anything", "everything", "nothing", "somebody",
                            "anybody",  "everybody"};
  return s;
}

const WordSet& prepositions() {
  static const WordSet s = {"about",   "above",  "across", "after",  "against", "along",   "among",      "around",
                            "at",      "before", "behind", "below",  "beneath", "beside",  "between",    "beyond",
                            "by",      "despite", "down",  "during", "except",  "for",     "from",       "in",
                            "inside",  "into",   "like",   "near",   "of",      "off",     "on",         "onto",
                            "out",     "outside", "over",  "past",   "since",   "through", "throughout", "to",
                            "toward",  "towards", "under", "underneath", "until", "up",    "upon",       "with",
                            "within",  "without", "via"};
  return s;
}

const WordSet& conjunctions() {
  static const WordSet s = {"and",    "but",    "or",    "nor",  "so",   "yet",      "because", "although",
                            "though", "while",  "whereas", "if", "unless", "whether", "than",    "as",
                            "once",   "when",   "whenever", "where", "wherever"};
  return s;
}

const WordSet& interjections() {
  static const WordSet s = {"oh", "ah", "wow", "hey", "hello", "yes", "ok", "okay", "um", "uh"};
  return s;
}

const WordSet& verb_stems() {
  static const WordSet s = {
      "be",      "is",      "are",     "was",     "were",    "am",       "been",     "being",   "have",
      "has",     "had",     "do",      "does",    "did",     "will",     "would",    "can",     "could",
      "shall",   "should",  "may",     "might",   "must",    "say",      "said",     "go",      "went",
      "gone",    "get",     "got",     "make",    "made",    "know",     "knew",     "known",   "think",
      "thought", "take",    "took",    "taken",   "see",     "saw",      "seen",     "come",    "came",
      "want",    "look",    "use",     "find",    "found",   "give",     "gave",     "given",   "tell",
      "told",    "work",    "call",    "try",     "ask",     "need",     "feel",     "felt",    "become",
      "became",  "leave",   "left",    "put",     "mean",    "meant",    "keep",     "kept",    "let",
      "begin",   "began",   "seem",    "help",    "talk",    "turn",     "start",    "show",    "hear",
      "heard",   "play",    "run",     "ran",     "move",    "like",     "live",     "believe", "hold",
      "held",    "bring",   "brought", "happen",  "write",   "wrote",    "written",  "provide", "sit",
      "sat",     "stand",   "stood",   "lose",    "lost",    "pay",      "paid",     "meet",    "met",
      "include", "continue", "set",    "learn",   "change",  "lead",     "led",      "understand",
      "understood", "watch", "follow", "stop",    "create",  "speak",    "spoke",    "read",    "allow",
      "add",     "spend",   "spent",   "grow",    "grew",    "open",     "walk",     "win",     "won",
      "offer",   "remember", "love",   "consider", "appear", "buy",      "bought",   "wait",    "serve",
      "die",     "send",    "sent",    "expect",  "build",   "built",    "stay",     "fall",    "fell",
      "cut",     "reach",   "kill",    "remain",  "suggest", "raise",    "pass",     "sell",    "sold",
      "require", "report",  "decide",  "pull",    "develop", "describe", "explain",  "improve", "increase",
      "reduce",  "produce", "support", "affect",  "receive", "involve",  "indicate", "result",  "study",
      "analyze", "identify", "compare", "observe", "suffer", "protect",  "argue",    "claim",   "discuss",
      "present", "determine", "contain", "achieve", "jump",  "eat",      "ate",      "drink",   "sleep",
      "sing",    "dance",   "cry",     "laugh",   "smile",   "shine",    "fly",      "flew",    "hope",
      "wish",    "dream",   "fear",    "rise",    "rose",    "drive",    "drove",    "swim",    "climb"};
  return s;
}

bool ends_with(std::string_view w, std::string_view suffix) {
  return w.size() > suffix.size() && w.substr(w.size() - suffix.size()) == suffix;
}

bool is_inflected_verb(std::string_view w) {
  const auto& stems = verb_stems();
  if (stems.contains(w)) return true;
  auto try_strip = [&](std::string_view suffix, std::string_view append) {
    if (!ends_with(w, suffix)) return false;
    std::string stem(w.substr(0, w.size() - suffix.size()));
    stem += append;
    if (stems.contains(stem)) return true;
    // Doubled final consonant: running -> run.
    if (append.empty() && stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2]) {
      stem.pop_back();
      return stems.contains(stem);
    }
    return false;
  };
  return try_strip("s", "") || try_strip("es", "") || try_strip("ies", "y") || try_strip("ed", "") ||
         try_strip("d", "") || try_strip("ied", "y") || try_strip("ing", "") || try_strip("ing", "e");
}

bool all_digits(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool any_digit(std::string_view w) {
  return std::any_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; });
}

bool is_punctuation(std::string_view w) {
  return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) {
    return std::ispunct(static_cast<unsigned char>(c)) != 0;
  });
}

}  // namespace

CoarsePos tag_word(std::string_view word, bool sentence_initial) {
  if (is_punctuation(word)) return CoarsePos::Punctuation;
  const std::string lower = to_lower(word);
  const std::string_view w = lower;
  if (determiners().contains(w)) return CoarsePos::Determiner;
  if (pronouns().contains(w)) return CoarsePos::Pronoun;
  if (prepositions().contains(w)) return CoarsePos::Preposition;
  if (conjunctions().contains(w)) return CoarsePos::Conjunction;
  if (all_digits(w)) return CoarsePos::Number;

  if (ends_with(w, "ly")) return CoarsePos::Adverb;
  if (is_inflected_verb(w)) return CoarsePos::Verb;
  if (ends_with(w, "tion") || ends_with(w, "ness") || ends_with(w, "ment")) return CoarsePos::Noun;
  if (ends_with(w, "ous") || ends_with(w, "ful") || ends_with(w, "ive") || ends_with(w, "al")) {
    return CoarsePos::Adjective;
  }

  const std::u32string cps = to_u32(word);
  const bool capitalized = !cps.empty() && to_lower(word.substr(0, 1)) != word.substr(0, 1);
  if (capitalized && !sentence_initial) return CoarsePos::Proper;
  if (interjections().contains(w) || any_digit(w)) return CoarsePos::Other;
  return CoarsePos::Noun;
}

std::vector<CoarsePos> tag_sentence(std::string_view sentence) {
  std::vector<CoarsePos> tags;
  bool first = true;
  for (const auto& w : scan_words(sentence)) {
    tags.push_back(w.is_digit_run ? CoarsePos::Number : tag_word(w.text, first));
    first = false;
  }
  return tags;
}

std::array<double, StyleFeatures::kWidth> StyleFeatures::values() const {
  std::array<double, kWidth> v{};
  v[0] = mean_sentence_length;
  v[1] = sd_sentence_length;
  v[2] = mean_word_length;
  v[3] = type_token_ratio;
  std::copy(pos.begin(), pos.end(), v.begin() + 4);
  return v;
}

std::array<std::string, StyleFeatures::kWidth> StyleFeatures::names() {
  std::array<std::string, kWidth> n;
  n[0] = "style:mean_sentence_length";
  n[1] = "style:sd_sentence_length";
  n[2] = "style:mean_word_length";
  n[3] = "style:type_token_ratio";
  for (std::size_t i = 0; i < kPosCount; ++i) n[4 + i] = std::string("style:pos_") + kPosNames[i];
  return n;
}

StyleFeatures style_features(const std::vector<std::string>& sentences) {
  std::vector<double> lengths;
  std::size_t chars = 0;
  std::size_t words = 0;
  std::unordered_set<std::string> types;
  std::array<std::size_t, kPosCount> pos_counts{};
  for (const auto& s : sentences) {
    const auto spans = scan_words(s);
    if (spans.empty()) continue;
    lengths.push_back(static_cast<double>(spans.size()));
    bool first = true;
    for (const auto& w : spans) {
      chars += utf8_length(w.text);
      ++words;
      types.insert(to_lower(w.text));
      const CoarsePos tag = w.is_digit_run ? CoarsePos::Number : tag_word(w.text, first);
      ++pos_counts[static_cast<std::size_t>(tag)];
      first = false;
    }
  }
  if (words == 0) throw InputError("style_features: degenerate document");
  StyleFeatures f;
  f.mean_sentence_length = mean(lengths);
  f.sd_sentence_length = sample_sd(lengths);
  f.mean_word_length = static_cast<double>(chars) / static_cast<double>(words);
  f.type_token_ratio = static_cast<double>(types.size()) / static_cast<double>(words);
  for (std::size_t i = 0; i < kPosCount; ++i) {
    f.pos[i] = static_cast<double>(pos_counts[i]) / static_cast<double>(words);
  }
  return f;
}

StyleFeatures style_features(const CleanDocument& doc) { return style_features(doc.sentences); }

std::vector<std::array<double, StyleFeatures::kWidth>> style_rows(const std::vector<CleanDocument>& docs,
                                                                 Execution exec) {
  std::vector<std::array<double, StyleFeatures::kWidth>> rows(docs.size());
  for_each_index(docs.size(), exec, [&](std::size_t i) { rows[i] = style_features(docs[i]).values(); });
  return rows;
}

}  // namespace mgtd
