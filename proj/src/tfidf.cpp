#include "mgtd/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

#include "mgtd/error.hpp"

namespace mgtd {

std::vector<std::string> ngrams(std::span<const std::string> tokens, int ngram_max) {
  std::vector<std::string> out(tokens.begin(), tokens.end());
  for (int n = 2; n <= ngram_max; ++n) {
    if (tokens.size() < static_cast<std::size_t>(n)) break;
    for (std::size_t i = 0; i + static_cast<std::size_t>(n) <= tokens.size(); ++i) {
      std::string g = tokens[i];
      for (int k = 1; k < n; ++k) {
        g.push_back(' ');
        g += tokens[i + static_cast<std::size_t>(k)];
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

const std::vector<std::string>& featurized_tokens(const CleanDocument& doc, bool drop_stopwords) {
  return drop_stopwords ? doc.tokens_nostop : doc.tokens;
}

TfidfModel TfidfModel::fit(const std::vector<std::vector<std::string>>& docs, const TfidfConfig& config) {
  if (docs.empty()) throw InputError("fit_tfidf: corpus is empty");
  if (config.ngram_max < 1) throw InputError("fit_tfidf: ngram_max must be >= 1");
  std::unordered_map<std::string, std::size_t> df;
  std::unordered_map<std::string, std::size_t> total;
  for (const auto& tokens : docs) {
    const auto terms = ngrams(tokens, config.ngram_max);
    std::unordered_set<std::string> seen;
    for (const auto& t : terms) {
      ++total[t];
      if (seen.insert(t).second) ++df[t];
    }
  }
  std::vector<std::string> kept;
  for (const auto& [term, d] : df) {
    if (d >= static_cast<std::size_t>(std::max(config.min_df, 1))) kept.push_back(term);
  }
  if (config.max_features && kept.size() > *config.max_features) {
    std::sort(kept.begin(), kept.end(), [&](const std::string& a, const std::string& b) {
      const auto ta = total.at(a);
      const auto tb = total.at(b);
      return ta != tb ? ta > tb : a < b;
    });
    kept.resize(*config.max_features);
  }
  if (kept.empty()) throw InputError("fit_tfidf: empty vocabulary after filtering");
  std::sort(kept.begin(), kept.end());

  TfidfModel model;
  model.config_ = config;
  const double n = static_cast<double>(docs.size());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    model.vocabulary_.emplace(kept[i], static_cast<std::uint32_t>(i));
    model.idf_.push_back(std::log((1.0 + n) / (1.0 + static_cast<double>(df.at(kept[i])))) + 1.0);
  }
  return model;
}

TfidfModel TfidfModel::fit(const std::vector<CleanDocument>& docs, const TfidfConfig& config) {
  std::vector<std::vector<std::string>> token_lists;
  token_lists.reserve(docs.size());
  for (const auto& d : docs) token_lists.push_back(featurized_tokens(d, config.drop_stopwords));
  return fit(token_lists, config);
}

SparseVector TfidfModel::transform(std::span<const std::string> tokens) const {
  std::map<std::uint32_t, double> counts;
  for (const auto& t : ngrams(tokens, config_.ngram_max)) {
    auto it = vocabulary_.find(t);
    if (it != vocabulary_.end()) counts[it->second] += 1.0;
  }
  SparseVector v;
  if (counts.empty()) {
    v.all_out_of_vocabulary = true;
    return v;
  }
  double norm2 = 0.0;
  for (const auto& [col, count] : counts) {
    const double tf = config_.sublinear ? 1.0 + std::log(count) : count;
    const double x = tf * idf_[col];
    v.indices.push_back(col);
    v.values.push_back(x);
    norm2 += x * x;
  }
  const double norm = std::sqrt(norm2);
  for (double& x : v.values) x /= norm;
  return v;
}

SparseVector TfidfModel::transform(const CleanDocument& doc) const {
  return transform(featurized_tokens(doc, config_.drop_stopwords));
}

FeatureMatrix TfidfModel::transform_all(const std::vector<CleanDocument>& docs, Execution exec) const {
  std::vector<SparseVector> rows(docs.size());
  for_each_index(docs.size(), exec, [&](std::size_t i) { rows[i] = transform(docs[i]); });
  FeatureMatrix m(feature_names());
  for (std::size_t i = 0; i < docs.size(); ++i) m.add_row(rows[i], docs[i].label);
  return m;
}

std::vector<std::string> TfidfModel::feature_names() const {
  std::vector<std::string> names(vocabulary_.size());
  for (const auto& [term, col] : vocabulary_) names[col] = "tfidf:" + term;
  return names;
}

nlohmann::json TfidfModel::to_json() const {
  nlohmann::json vocab = nlohmann::json::array();
  std::vector<std::string> terms(vocabulary_.size());
  for (const auto& [term, col] : vocabulary_) terms[col] = term;
  nlohmann::json cfg = {{"min_df", config_.min_df},
                        {"sublinear", config_.sublinear},
                        {"ngram_max", config_.ngram_max},
                        {"drop_stopwords", config_.drop_stopwords}};
  cfg["max_features"] = config_.max_features ? nlohmann::json(*config_.max_features) : nlohmann::json(nullptr);
  return {{"format", "mgtd-tfidf"}, {"version", 1}, {"vocabulary", terms}, {"idf", idf_}, {"config", cfg}};
}

TfidfModel TfidfModel::from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "mgtd-tfidf" || j.value("version", 0) != 1) {
    throw ModelError("unsupported TF-IDF model format or version");
  }
  TfidfModel m;
  const auto terms = j.at("vocabulary").get<std::vector<std::string>>();
  m.idf_ = j.at("idf").get<std::vector<double>>();
  if (terms.size() != m.idf_.size()) throw ModelError("TF-IDF model: vocabulary and idf lengths differ");
  for (std::size_t i = 0; i < terms.size(); ++i) m.vocabulary_.emplace(terms[i], static_cast<std::uint32_t>(i));
  const auto& cfg = j.at("config");
  m.config_.min_df = cfg.at("min_df").get<int>();
  m.config_.sublinear = cfg.at("sublinear").get<bool>();
  m.config_.ngram_max = cfg.at("ngram_max").get<int>();
  m.config_.drop_stopwords = cfg.at("drop_stopwords").get<bool>();
  if (!cfg.at("max_features").is_null()) m.config_.max_features = cfg.at("max_features").get<std::size_t>();
  return m;
}

}  // namespace mgtd
