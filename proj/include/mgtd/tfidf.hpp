#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mgtd/corpus.hpp"
#include "mgtd/execution.hpp"
#include "mgtd/matrix.hpp"

namespace mgtd {

struct TfidfConfig {
  int min_df = 2;
  std::optional<std::size_t> max_features;
  bool sublinear = false;
  int ngram_max = 1;
  bool drop_stopwords = true;  // featurize tokens_nostop rather than tokens
};

/// Smoothed idf, idf(t) = ln((1 + N) / (1 + df(t))) + 1, and L2-normalized
/// tf * idf rows. Vocabulary columns are in lexicographic order.
class TfidfModel {
 public:
  static TfidfModel fit(const std::vector<std::vector<std::string>>& docs, const TfidfConfig& config);
  static TfidfModel fit(const std::vector<CleanDocument>& docs, const TfidfConfig& config);

  SparseVector transform(std::span<const std::string> tokens) const;
  SparseVector transform(const CleanDocument& doc) const;

  FeatureMatrix transform_all(const std::vector<CleanDocument>& docs, Execution exec = Execution::Parallel) const;

  const std::map<std::string, std::uint32_t>& vocabulary() const { return vocabulary_; }
  const std::vector<double>& idf() const { return idf_; }
  const TfidfConfig& config() const { return config_; }
  std::vector<std::string> feature_names() const;  // "tfidf:<term>"

  nlohmann::json to_json() const;
  static TfidfModel from_json(const nlohmann::json& j);

 private:
  std::map<std::string, std::uint32_t> vocabulary_;
  std::vector<double> idf_;
  TfidfConfig config_;
};

// Terms of a token sequence: unigrams through n-grams joined by ' '.
std::vector<std::string> ngrams(std::span<const std::string> tokens, int ngram_max);

const std::vector<std::string>& featurized_tokens(const CleanDocument& doc, bool drop_stopwords);

}  // namespace mgtd
