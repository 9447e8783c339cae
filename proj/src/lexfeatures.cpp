#include "mgtd/lexfeatures.hpp"

#include <cmath>
#include <fstream>

#include "mgtd/csv.hpp"
#include "mgtd/error.hpp"
#include "mgtd/execution.hpp"

namespace mgtd {

namespace {

std::vector<std::vector<std::string>> sentence_tokens(const CleanDocument& doc) {
  std::vector<std::vector<std::string>> out;
  out.reserve(doc.sentences.size());
  for (const auto& s : doc.sentences) {
    auto toks = tokenize(s, false);
    std::erase_if(toks, [](const std::string& t) { return t.size() == 1 && t[0] >= '0' && t[0] <= '9'; });
    out.push_back(std::move(toks));
  }
  return out;
}

constexpr std::size_t kMetricCount = 5 + 5 + 11 + 11;

using MetricVector = std::array<double, kMetricCount>;

MetricVector document_metrics(const CleanDocument& doc, const LexiconSet& lex, const LexFeatureOptions& opts,
                              const TextResources& res, bool& smog_short) {
  MetricVector v{};
  std::size_t k = 0;
  const ReadabilityScores r = readability(doc, res);
  smog_short = r.smog_short_sample;
  for (double x : as_array(r)) v[k++] = x;
  for (double x : bias_features(doc, lex, opts).values()) v[k++] = x;
  for (double x : affect_features(doc, lex, opts).values()) v[k++] = x;
  for (double x : moral_features(doc, lex, opts).values) v[k++] = x;
  return v;
}

}  // namespace

LexiconSet LexiconSet::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) throw InputError("lexicon directory not found: " + dir.string());
  LexiconSet set;
  const char* bias_files[] = {"bias_words.txt", "assertives.txt", "factives.txt", "hedges.txt", "implicatives.txt"};
  for (std::size_t i = 0; i < 5; ++i) set.bias[i] = load_lexicon(dir / bias_files[i], LexiconKind::Plain);
  set.opinion_positive = load_lexicon(dir / "opinion_positive.txt", LexiconKind::Plain);
  set.opinion_negative = load_lexicon(dir / "opinion_negative.txt", LexiconKind::Plain);
  set.valence = load_lexicon(dir / "valence.txt", LexiconKind::Valenced);
  auto moral = load_categorized_lexicon(dir / "moral_foundations.txt");
  for (std::size_t i = 0; i < kMoralNames.size(); ++i) {
    auto it = moral.find(kMoralNames[i]);
    if (it == moral.end()) {
      throw InputError(std::string("moral_foundations.txt: missing category ") + kMoralNames[i]);
    }
    set.moral[i] = std::move(it->second);
  }
  return set;
}

const LexiconSet& LexiconSet::defaults() {
  static const LexiconSet instance = load(default_data_dir() / "lexicons");
  return instance;
}

BiasFeatures bias_features(std::span<const std::string> tokens, const LexiconSet& lex) {
  BiasFeatures f;
  f.bias_words = match_proportion(tokens, lex.bias[0]);
  f.assertives = match_proportion(tokens, lex.bias[1]);
  f.factives = match_proportion(tokens, lex.bias[2]);
  f.hedges = match_proportion(tokens, lex.bias[3]);
  f.implicatives = match_proportion(tokens, lex.bias[4]);
  return f;
}

BiasFeatures bias_features(const CleanDocument& doc, const LexiconSet& lex, const LexFeatureOptions& opts) {
  const auto& tokens = opts.bias_on_content_tokens && !doc.tokens_nostop.empty() ? doc.tokens_nostop : doc.tokens;
  return bias_features(tokens, lex);
}

AffectFeatures affect_features(std::span<const std::string> tokens,
                               const std::vector<std::vector<std::string>>& sentences, const LexiconSet& lex,
                               double theta) {
  if (tokens.empty() || sentences.empty()) throw InputError("affect_features: degenerate document");
  AffectFeatures f;
  f.pos = match_proportion(tokens, lex.opinion_positive);
  f.neg = match_proportion(tokens, lex.opinion_negative);

  const double n = static_cast<double>(tokens.size());
  double pos_mass = 0.0;
  double neg_mass = 0.0;
  std::size_t wpos = 0, wneg = 0, wneu = 0;
  for (const auto& t : tokens) {
    const double v = lex.valence.score(t).value_or(0.0);
    if (v > 0) pos_mass += v;
    if (v < 0) neg_mass -= v;
    if (v > theta) {
      ++wpos;
    } else if (v < -theta) {
      ++wneg;
    } else if (v != 0.0) {
      ++wneu;
    }
  }
  f.vadpos = std::min(pos_mass / n, 1.0);
  f.vadneg = std::min(neg_mass / n, 1.0 - f.vadpos);
  f.vadneu = 1.0 - f.vadpos - f.vadneg;
  f.wpos = static_cast<double>(wpos) / n;
  f.wneg = static_cast<double>(wneg) / n;
  f.wneu = static_cast<double>(wneu) / n;

  std::size_t spos = 0, sneg = 0, sneu = 0;
  for (const auto& sentence : sentences) {
    if (sentence.empty()) continue;
    double sum = 0.0;
    for (const auto& t : sentence) sum += lex.valence.score(t).value_or(0.0);
    const double s = sum / static_cast<double>(sentence.size());
    if (s > theta) {
      ++spos;
    } else if (s < -theta) {
      ++sneg;
    } else if (s != 0.0) {
      ++sneu;
    }
  }
  const double ns = static_cast<double>(sentences.size());
  f.spos = static_cast<double>(spos) / ns;
  f.sneg = static_cast<double>(sneg) / ns;
  f.sneu = static_cast<double>(sneu) / ns;
  return f;
}

AffectFeatures affect_features(const CleanDocument& doc, const LexiconSet& lex, const LexFeatureOptions& opts) {
  return affect_features(doc.tokens, sentence_tokens(doc), lex, opts.neutral_threshold);
}

MoralFeatures moral_features(std::span<const std::string> tokens, const LexiconSet& lex) {
  MoralFeatures f;
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = match_proportion(tokens, lex.moral[i]);
  return f;
}

MoralFeatures moral_features(const CleanDocument& doc, const LexiconSet& lex, const LexFeatureOptions& opts) {
  const auto& tokens = opts.moral_on_content_tokens && !doc.tokens_nostop.empty() ? doc.tokens_nostop : doc.tokens;
  return moral_features(tokens, lex);
}

MetricRow summarize_metric(std::string group, std::string metric, const std::vector<double>& values,
                           const std::vector<Label>& labels) {
  std::array<std::vector<double>, 2> by_class;
  for (std::size_t i = 0; i < values.size(); ++i) by_class[static_cast<std::size_t>(to_int(labels[i]))].push_back(values[i]);
  MetricRow row;
  row.group = std::move(group);
  row.metric = std::move(metric);
  row.human_n = by_class[0].size();
  row.machine_n = by_class[1].size();
  row.human_mean = mean(by_class[0]);
  row.human_sd = sample_sd(by_class[0]);
  row.machine_mean = mean(by_class[1]);
  row.machine_sd = sample_sd(by_class[1]);
  if (by_class[0].size() >= 2 && by_class[1].size() >= 2) {
    // Machine minus human, so a positive t means the machine mean is larger.
    row.test = welch_t_test(by_class[1], by_class[0]);
  }
  return row;
}

namespace {

CharacterizationReport build_report(const Corpus& corpus, std::size_t metric_count, const LexiconSet* lex,
                                    const LexFeatureOptions& opts, const TextResources& res, Execution exec) {
  if (corpus.documents.empty()) throw InputError("characterize: corpus is empty");
  const std::size_t n = corpus.documents.size();
  std::vector<MetricVector> per_doc(n);
  std::vector<char> short_flags(n, 0);

  for_each_index(n, exec, [&](std::size_t i) {
    const auto& doc = corpus.documents[i];
    bool smog_short = false;
    if (lex != nullptr) {
      per_doc[i] = document_metrics(doc, *lex, opts, res, smog_short);
    } else {
      const ReadabilityScores r = readability(doc, res);
      smog_short = r.smog_short_sample;
      const auto a = as_array(r);
      std::copy(a.begin(), a.end(), per_doc[i].begin());
    }
    short_flags[i] = smog_short ? 1 : 0;
  });

  std::vector<std::pair<const char*, const char*>> names;
  for (auto m : kReadabilityNames) names.emplace_back("readability", m);
  for (auto m : kBiasNames) names.emplace_back("bias", m);
  for (auto m : kAffectNames) names.emplace_back("affect", m);
  for (auto m : kMoralNames) names.emplace_back("moral", m);

  const auto labels = corpus.labels();
  CharacterizationReport report;
  for (std::size_t k = 0; k < metric_count; ++k) {
    std::vector<double> column(n);
    for (std::size_t i = 0; i < n; ++i) column[i] = per_doc[i][k];
    report.rows.push_back(summarize_metric(names[k].first, names[k].second, column, labels));
  }
  for (char f : short_flags) report.smog_short_documents += f ? 1 : 0;
  return report;
}

}  // namespace

CharacterizationReport readability_report(const Corpus& corpus, const TextResources& res, Execution exec) {
  return build_report(corpus, 5, nullptr, {}, res, exec);
}

CharacterizationReport characterize(const Corpus& corpus, const LexiconSet& lex, const LexFeatureOptions& opts,
                                    const TextResources& res, Execution exec) {
  return build_report(corpus, kMetricCount, &lex, opts, res, exec);
}

nlohmann::json to_json(const CharacterizationReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    nlohmann::json j = {{"group", r.group},
                        {"metric", r.metric},
                        {"human_n", r.human_n},
                        {"human_mean", r.human_mean},
                        {"human_sd", r.human_sd},
                        {"machine_n", r.machine_n},
                        {"machine_mean", r.machine_mean},
                        {"machine_sd", r.machine_sd}};
    if (r.test) {
      j["t_statistic"] = r.test->t_statistic;
      j["degrees_freedom"] = r.test->degrees_freedom;
      j["p_value"] = r.test->p_value;
      j["significant_at_05"] = r.test->significant_at_05;
    } else {
      j["p_value"] = nullptr;
    }
    rows.push_back(std::move(j));
  }
  return {{"rows", rows}, {"smog_short_documents", report.smog_short_documents}};
}

void write_characterization_csv(const CharacterizationReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  csv::write_row(out, {"group", "metric", "human_mean", "human_sd", "machine_mean", "machine_sd", "t_statistic",
                       "degrees_freedom", "p_value", "significant_at_05"});
  for (const auto& r : report.rows) {
    std::vector<std::string> row = {r.group,
                                    r.metric,
                                    csv::format_double(r.human_mean),
                                    csv::format_double(r.human_sd),
                                    csv::format_double(r.machine_mean),
                                    csv::format_double(r.machine_sd)};
    if (r.test) {
      row.push_back(csv::format_double(r.test->t_statistic));
      row.push_back(csv::format_double(r.test->degrees_freedom));
      row.push_back(csv::format_double(r.test->p_value));
      row.push_back(r.test->significant_at_05 ? "1" : "0");
    } else {
      row.insert(row.end(), {"", "", "", ""});
    }
    csv::write_row(out, row);
  }
}

}  // namespace mgtd
