#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "mgtd/corpus.hpp"

namespace mgtd {

struct Word2VecConfig {
  std::size_t dimension = 100;
  std::size_t window = 5;
  std::size_t negatives = 5;
  std::size_t epochs = 5;
  double learning_rate = 0.025;  // decays linearly to lr * 1e-4
  std::size_t min_count = 1;
  std::uint64_t seed = 1;
  bool drop_stopwords = true;
};

/// Skip-gram with negative sampling. Input vectors are the embeddings;
/// output (context) vectors are kept only during training.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(std::size_t dimension, Word2VecConfig config) : dimension_(dimension), config_(config) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return words_.size(); }
  const Word2VecConfig& config() const { return config_; }
  const std::vector<std::string>& words() const { return words_; }
  const std::vector<double>& epoch_losses() const { return epoch_losses_; }

  bool contains(const std::string& word) const { return index_.contains(word); }
  std::optional<std::size_t> index_of(const std::string& word) const {
    auto it = index_.find(word);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  std::span<const double> vector(const std::string& word) const;
  std::span<const double> vector(std::size_t index) const {
    return {vectors_.data() + index * dimension_, dimension_};
  }

  void add(const std::string& word, std::span<const double> v);

  // Text format: header line "mgtd-embeddings 1 <dim> <vocab> <seed> <window>
  // <negatives> <epochs> <learning_rate>", then "token v1 ... vd" rows.
  void save(const std::filesystem::path& path) const;
  static EmbeddingTable load(const std::filesystem::path& path);

 private:
  friend EmbeddingTable train_word2vec(const std::vector<std::vector<std::string>>&, const Word2VecConfig&);

  std::size_t dimension_ = 0;
  Word2VecConfig config_;
  std::vector<std::string> words_;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<double> vectors_;
  std::vector<double> epoch_losses_;
};

EmbeddingTable train_word2vec(const std::vector<std::vector<std::string>>& sentences, const Word2VecConfig& config);
EmbeddingTable train_word2vec(const std::vector<CleanDocument>& docs, const Word2VecConfig& config);

/// Loss and gradients of one skip-gram negative-sampling example:
///   L = -log s(u_o . v_c) - sum_k log s(-u_k . v_c).
struct SgnsGradient {
  double loss = 0.0;
  std::vector<double> center;                 // dL/dv_c
  std::vector<double> context;                // dL/du_o
  std::vector<std::vector<double>> negatives; // dL/du_k
};

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           const std::vector<std::span<const double>>& negatives);

struct DocEmbedding {
  std::vector<double> values;
  bool all_out_of_vocabulary = false;
};

// Mean of in-vocabulary token vectors; zero vector (flagged) if none.
DocEmbedding doc_embedding(const EmbeddingTable& table, std::span<const std::string> tokens);

double cosine(std::span<const double> a, std::span<const double> b);

}  // namespace mgtd
