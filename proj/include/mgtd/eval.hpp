#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mgtd/ablation.hpp"
#include "mgtd/corpus.hpp"
#include "mgtd/lexfeatures.hpp"
#include "mgtd/models.hpp"
#include "mgtd/projection.hpp"
#include "mgtd/tfidf.hpp"
#include "mgtd/word2vec.hpp"

namespace mgtd {

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;  // document index -> fold

  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> test_indices(std::size_t fold) const;
};

/// Shuffles each class with the seeded generator and deals its members
/// round-robin over the folds, continuing the deal position across classes.
FoldPlan stratified_kfold(const std::vector<Label>& labels, std::size_t k, std::uint64_t seed);

struct Metrics {
  double accuracy = 0, precision = 0, recall = 0, f1 = 0;
  bool precision_undefined = false;  // no positive predictions; precision reported as 0
  std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

// Positive class is machine (1).
Metrics compute_metrics(std::span<const Label> predictions, std::span<const Label> truth);

// Arithmetic mean of each metric; counts are summed.
Metrics mean_metrics(const std::vector<Metrics>& folds);

struct FeaturizerSpec {
  bool tfidf = true;
  bool style = false;
  bool embeddings = false;
  TfidfConfig tfidf_config;
  Word2VecConfig word2vec;
};

/// A featurizer fitted on training documents. Style and embedding columns
/// are min-max scaled with the training range and clipped to [0, 1] so
/// every block stays nonnegative.
class Featurizer {
 public:
  static Featurizer fit(const std::vector<CleanDocument>& train, const FeaturizerSpec& spec, std::uint64_t seed,
                        Execution exec = Execution::Parallel);

  FeatureMatrix transform(const std::vector<CleanDocument>& docs, Execution exec = Execution::Parallel) const;
  std::vector<std::string> feature_names() const;

  const FeaturizerSpec& spec() const { return spec_; }
  const std::optional<TfidfModel>& tfidf() const { return tfidf_; }
  const std::optional<EmbeddingTable>& embeddings() const { return embeddings_; }

  // Throws InvariantError if any fitted term or embedding word is absent
  // from the given training documents.
  void assert_no_leakage(const std::vector<CleanDocument>& train) const;

  nlohmann::json to_json() const;
  static Featurizer from_json(const nlohmann::json& j);

 private:
  std::vector<std::vector<double>> dense_block(const std::vector<CleanDocument>& docs, Execution exec) const;

  FeaturizerSpec spec_;
  std::optional<TfidfModel> tfidf_;
  std::optional<EmbeddingTable> embeddings_;
  std::vector<double> dense_min_;
  std::vector<double> dense_max_;
};

struct ModelResult {
  ModelKind kind = ModelKind::LogReg;
  std::vector<Metrics> folds;
  Metrics mean;
  // Mean over folds per feature name, when the kind supports it.
  std::optional<ImportanceRanking> importance;
};

struct EvalReport {
  std::string name;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<ModelResult> models;
  std::vector<std::string> notes;
};

struct ExperimentConfig {
  FeaturizerSpec features;
  std::vector<ModelKind> models = {ModelKind::LogReg, ModelKind::SvmLinear, ModelKind::Forest, ModelKind::Mnb};
  std::size_t k = 5;
  std::uint64_t seed = 1;
  ModelConfig model;  // seed is replaced per fold and kind
  bool check_leakage = true;
};

EvalReport run_experiment(const Corpus& corpus, const ExperimentConfig& config);
EvalReport run_experiment(const Corpus& corpus, const FeaturizerSpec& features, const std::vector<ModelKind>& kinds,
                          std::size_t k, std::uint64_t seed);

struct AblationArmDelta {
  ModelKind kind = ModelKind::LogReg;
  double accuracy_a = 0, accuracy_b = 0, accuracy_c = 0;
  double drop = 0;                  // a - b
  std::optional<double> recovery;   // (c - b) / (a - b) when the drop is positive
};

struct AblationReport {
  AblationMap map;
  std::array<EvalReport, 3> arms;  // A raw tokens, B ablated tokens, C ablated + style + embeddings
  std::vector<AblationArmDelta> deltas;
};

struct AblationConfig {
  std::vector<ModelKind> models = {ModelKind::LogReg, ModelKind::SvmLinear, ModelKind::Forest};
  std::size_t k = 5;
  std::uint64_t seed = 1;
  TfidfConfig tfidf;
  Word2VecConfig word2vec;
  ModelConfig model;
};

AblationReport run_ablation_experiment(const Corpus& corpus, const AblationConfig& config);
AblationReport run_ablation_experiment(const Corpus& corpus, std::size_t k, std::uint64_t seed);

// Uniform sample of up to per_source documents from each corpus, then
// concatenated in input order.
Corpus merge_corpora(const std::vector<Corpus>& corpora, std::optional<std::size_t> per_source, std::uint64_t seed);

struct ProjectionData {
  Projection projection;
  std::vector<std::string> ids;
  std::vector<Label> labels;
};

struct ReportInputs {
  const EvalReport* evaluation = nullptr;
  const AblationReport* ablation = nullptr;
  const CharacterizationReport* characterization = nullptr;
  const CorpusStats* stats = nullptr;
  const ProjectionData* embedding_2d = nullptr;
  nlohmann::json config;  // echoed into the manifest
};

/// Writes <out>/report/*.csv and manifest.json. Returns the manifest.
nlohmann::json emit_reports(const ReportInputs& inputs, const std::filesystem::path& out);

}  // namespace mgtd
