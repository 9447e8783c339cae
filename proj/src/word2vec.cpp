#include "mgtd/word2vec.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "mgtd/error.hpp"
#include "mgtd/rng.hpp"
#include "mgtd/tfidf.hpp"

namespace mgtd {

namespace {

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

// -log(sigmoid(x)), stable for large |x|.
double neg_log_sigmoid(double x) { return x >= 0 ? std::log1p(std::exp(-x)) : -x + std::log1p(std::exp(x)); }

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

std::span<const double> EmbeddingTable::vector(const std::string& word) const {
  auto it = index_.find(word);
  if (it == index_.end()) throw InputError("word not in embedding table: " + word);
  return vector(it->second);
}

void EmbeddingTable::add(const std::string& word, std::span<const double> v) {
  if (v.size() != dimension_) throw InputError("embedding dimension mismatch for " + word);
  if (index_.contains(word)) throw InputError("duplicate embedding for " + word);
  index_.emplace(word, words_.size());
  words_.push_back(word);
  vectors_.insert(vectors_.end(), v.begin(), v.end());
}

void EmbeddingTable::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  out << fmt::format("mgtd-embeddings 1 {} {} {} {} {} {} {}\n", dimension_, words_.size(), config_.seed,
                     config_.window, config_.negatives, config_.epochs, config_.learning_rate);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    out << words_[i];
    for (double x : vector(i)) out << ' ' << fmt::format("{}", x);
    out << '\n';
  }
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read " + path.string());
  std::string header;
  std::getline(in, header);
  std::istringstream hs(header);
  std::string magic;
  int version = 0;
  std::size_t dim = 0, vocab = 0;
  Word2VecConfig cfg;
  hs >> magic >> version >> dim >> vocab >> cfg.seed >> cfg.window >> cfg.negatives >> cfg.epochs >> cfg.learning_rate;
  if (magic != "mgtd-embeddings" || version != 1 || !hs) throw ModelError("unsupported embedding file: " + path.string());
  cfg.dimension = dim;
  EmbeddingTable table(dim, cfg);
  std::string line;
  std::vector<double> v(dim);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    for (auto& x : v) {
      if (!(ls >> x)) throw InputError(fmt::format("{}:{}: expected {} values", path.string(), line_no, dim));
    }
    table.add(word, v);
  }
  if (table.size() != vocab) throw InputError(path.string() + ": vocabulary size does not match header");
  return table;
}

SgnsGradient sgns_gradient(std::span<const double> center, std::span<const double> context,
                           const std::vector<std::span<const double>>& negatives) {
  const std::size_t d = center.size();
  SgnsGradient g;
  g.center.assign(d, 0.0);
  g.context.assign(d, 0.0);

  const double fo = dot(center.data(), context.data(), d);
  g.loss += neg_log_sigmoid(fo);
  const double co = sigmoid(fo) - 1.0;  // dL/dfo
  for (std::size_t i = 0; i < d; ++i) {
    g.context[i] = co * center[i];
    g.center[i] += co * context[i];
  }
  for (const auto& neg : negatives) {
    const double fk = dot(center.data(), neg.data(), d);
    g.loss += neg_log_sigmoid(-fk);
    const double ck = sigmoid(fk);  // dL/dfk
    std::vector<double> gk(d);
    for (std::size_t i = 0; i < d; ++i) {
      gk[i] = ck * center[i];
      g.center[i] += ck * neg[i];
    }
    g.negatives.push_back(std::move(gk));
  }
  return g;
}

EmbeddingTable train_word2vec(const std::vector<std::vector<std::string>>& sentences, const Word2VecConfig& config) {
  if (config.dimension == 0) throw InputError("train_word2vec: dimension must be positive");
  std::map<std::string, std::size_t> counts;
  std::size_t total_tokens = 0;
  for (const auto& s : sentences) {
    for (const auto& t : s) ++counts[t];
    total_tokens += s.size();
  }
  if (total_tokens < config.window + 1) throw InputError("train_word2vec: corpus too small for the window");

  EmbeddingTable table(config.dimension, config);
  std::vector<double> unigram;
  for (const auto& [word, count] : counts) {
    if (count < config.min_count) continue;
    table.index_.emplace(word, table.words_.size());
    table.words_.push_back(word);
    unigram.push_back(std::pow(static_cast<double>(count), 0.75));
  }
  const std::size_t vocab = table.words_.size();
  if (vocab < 2) throw InputError("train_word2vec: vocabulary too small");
  std::vector<double> cumulative(vocab);
  std::partial_sum(unigram.begin(), unigram.end(), cumulative.begin());
  const double mass = cumulative.back();

  std::vector<std::vector<std::size_t>> encoded;
  std::size_t train_words = 0;
  for (const auto& s : sentences) {
    std::vector<std::size_t> ids;
    for (const auto& t : s) {
      auto it = table.index_.find(t);
      if (it != table.index_.end()) ids.push_back(it->second);
    }
    train_words += ids.size();
    if (ids.size() >= 2) encoded.push_back(std::move(ids));
  }

  const std::size_t d = config.dimension;
  Rng rng(config.seed);
  std::vector<double>& input = table.vectors_;
  input.resize(vocab * d);
  for (double& x : input) x = (rng.uniform() - 0.5) / static_cast<double>(d);
  std::vector<double> output(vocab * d, 0.0);
  std::vector<double> center_grad(d);

  const double total_steps = static_cast<double>(config.epochs * train_words) + 1.0;
  std::size_t processed = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    double loss_sum = 0.0;
    std::size_t pairs = 0;
    for (const auto& ids : encoded) {
      for (std::size_t pos = 0; pos < ids.size(); ++pos) {
        const double lr = config.learning_rate * std::max(1e-4, 1.0 - static_cast<double>(processed) / total_steps);
        ++processed;
        double* vc = &input[ids[pos] * d];
        const std::size_t lo = pos >= config.window ? pos - config.window : 0;
        const std::size_t hi = std::min(ids.size(), pos + config.window + 1);
        for (std::size_t ctx = lo; ctx < hi; ++ctx) {
          if (ctx == pos) continue;
          std::fill(center_grad.begin(), center_grad.end(), 0.0);
          // One positive target then the sampled negatives.
          for (std::size_t k = 0; k <= config.negatives; ++k) {
            std::size_t target;
            double label;
            if (k == 0) {
              target = ids[ctx];
              label = 1.0;
            } else {
              const double r = rng.uniform() * mass;
              target = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), r) -
                                                cumulative.begin());
              if (target >= vocab) target = vocab - 1;
              if (target == ids[ctx]) continue;
              label = 0.0;
            }
            double* ut = &output[target * d];
            const double f = dot(vc, ut, d);
            loss_sum += label > 0 ? neg_log_sigmoid(f) : neg_log_sigmoid(-f);
            const double g = sigmoid(f) - label;  // dL/df
            for (std::size_t i = 0; i < d; ++i) {
              center_grad[i] += g * ut[i];
              ut[i] -= lr * g * vc[i];
            }
          }
          for (std::size_t i = 0; i < d; ++i) vc[i] -= lr * center_grad[i];
          ++pairs;
        }
      }
    }
    table.epoch_losses_.push_back(pairs > 0 ? loss_sum / static_cast<double>(pairs) : 0.0);
  }
  return table;
}

EmbeddingTable train_word2vec(const std::vector<CleanDocument>& docs, const Word2VecConfig& config) {
  std::vector<std::vector<std::string>> sentences;
  sentences.reserve(docs.size());
  for (const auto& d : docs) sentences.push_back(featurized_tokens(d, config.drop_stopwords));
  return train_word2vec(sentences, config);
}

DocEmbedding doc_embedding(const EmbeddingTable& table, std::span<const std::string> tokens) {
  DocEmbedding e;
  e.values.assign(table.dimension(), 0.0);
  // Summing in table order makes the result independent of token order.
  std::map<std::size_t, std::size_t> counts;
  std::size_t hits = 0;
  for (const auto& t : tokens) {
    auto idx = table.index_of(t);
    if (!idx) continue;
    ++counts[*idx];
    ++hits;
  }
  if (hits == 0) {
    e.all_out_of_vocabulary = true;
    return e;
  }
  for (const auto& [idx, count] : counts) {
    const auto v = table.vector(idx);
    for (std::size_t i = 0; i < v.size(); ++i) e.values[i] += static_cast<double>(count) * v[i];
  }
  for (double& x : e.values) x /= static_cast<double>(hits);
  return e;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  const double ab = dot(a.data(), b.data(), a.size());
  const double aa = dot(a.data(), a.data(), a.size());
  const double bb = dot(b.data(), b.data(), b.size());
  if (aa == 0.0 || bb == 0.0) return 0.0;
  return ab / std::sqrt(aa * bb);
}

}  // namespace mgtd
