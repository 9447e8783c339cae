#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mgtd/corpus.hpp"
#include "mgtd/execution.hpp"
#include "mgtd/lexicon.hpp"
#include "mgtd/readability.hpp"
#include "mgtd/stats.hpp"

namespace mgtd {

inline constexpr std::array<const char*, 5> kBiasNames = {"bias_words", "assertives", "factives", "hedges",
                                                          "implicatives"};
inline constexpr std::array<const char*, 11> kAffectNames = {"pos",  "neg",  "vadneg", "vadneu", "vadpos", "wneg",
                                                             "wpos", "wneu", "sneg",   "spos",   "sneu"};
inline constexpr std::array<const char*, 11> kMoralNames = {
    "HarmVirtue",      "HarmVice",      "FairnessVirtue", "FairnessVice", "IngroupVirtue",  "IngroupVice",
    "AuthorityVirtue", "AuthorityVice", "PurityVirtue",   "PurityVice",   "MoralityGeneral"};

/// All lexicons the bias, affect, and moral scorers read.
struct LexiconSet {
  std::array<Lexicon, 5> bias;  // order of kBiasNames
  Lexicon opinion_positive;
  Lexicon opinion_negative;
  Lexicon valence;
  std::array<Lexicon, 11> moral;  // order of kMoralNames

  // Expects bias_words.txt, assertives.txt, factives.txt, hedges.txt,
  // implicatives.txt, opinion_positive.txt, opinion_negative.txt,
  // valence.txt, moral_foundations.txt.
  static LexiconSet load(const std::filesystem::path& dir);
  static const LexiconSet& defaults();
};

struct LexFeatureOptions {
  double neutral_threshold = 0.1;
  bool bias_on_content_tokens = true;   // stopword-removed tokens
  bool moral_on_content_tokens = true;
};

struct BiasFeatures {
  double bias_words = 0, assertives = 0, factives = 0, hedges = 0, implicatives = 0;
  std::array<double, 5> values() const { return {bias_words, assertives, factives, hedges, implicatives}; }
};

struct AffectFeatures {
  double pos = 0, neg = 0;
  double vadneg = 0, vadneu = 1, vadpos = 0;
  double wneg = 0, wpos = 0, wneu = 0;
  double sneg = 0, spos = 0, sneu = 0;
  std::array<double, 11> values() const { return {pos, neg, vadneg, vadneu, vadpos, wneg, wpos, wneu, sneg, spos, sneu}; }
};

struct MoralFeatures {
  std::array<double, 11> values{};  // order of kMoralNames
};

BiasFeatures bias_features(std::span<const std::string> tokens, const LexiconSet& lex);
BiasFeatures bias_features(const CleanDocument& doc, const LexiconSet& lex = LexiconSet::defaults(),
                           const LexFeatureOptions& opts = {});

// tokens: full document tokens; sentence_tokens: tokens of each sentence.
AffectFeatures affect_features(std::span<const std::string> tokens,
                               const std::vector<std::vector<std::string>>& sentence_tokens, const LexiconSet& lex,
                               double neutral_threshold = 0.1);
AffectFeatures affect_features(const CleanDocument& doc, const LexiconSet& lex = LexiconSet::defaults(),
                               const LexFeatureOptions& opts = {});

MoralFeatures moral_features(std::span<const std::string> tokens, const LexiconSet& lex);
MoralFeatures moral_features(const CleanDocument& doc, const LexiconSet& lex = LexiconSet::defaults(),
                             const LexFeatureOptions& opts = {});

/// One row of a mean (SD) comparison table.
struct MetricRow {
  std::string group;  // readability, bias, affect, moral
  std::string metric;
  double human_mean = 0, human_sd = 0;
  double machine_mean = 0, machine_sd = 0;
  std::size_t human_n = 0, machine_n = 0;
  std::optional<TestResult> test;  // absent for single-class corpora
};

struct CharacterizationReport {
  std::vector<MetricRow> rows;
  std::size_t smog_short_documents = 0;  // documents with fewer than 30 sentences
};

// Per-class mean (SD) of each metric given per-document values.
MetricRow summarize_metric(std::string group, std::string metric, const std::vector<double>& values,
                           const std::vector<Label>& labels);

CharacterizationReport readability_report(const Corpus& corpus, const TextResources& res = TextResources::defaults(),
                                          Execution exec = Execution::Parallel);

CharacterizationReport characterize(const Corpus& corpus, const LexiconSet& lex = LexiconSet::defaults(),
                                    const LexFeatureOptions& opts = {},
                                    const TextResources& res = TextResources::defaults(),
                                    Execution exec = Execution::Parallel);

nlohmann::json to_json(const CharacterizationReport& report);
void write_characterization_csv(const CharacterizationReport& report, const std::filesystem::path& path);

}  // namespace mgtd
