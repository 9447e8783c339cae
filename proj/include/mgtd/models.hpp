#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mgtd/execution.hpp"
#include "mgtd/matrix.hpp"

namespace mgtd {

enum class ModelKind { LogReg, Tree, Forest, Mnb, SgdLinear, SvmLinear, Voting, Mlp };

inline constexpr std::array<ModelKind, 8> kAllModelKinds = {ModelKind::LogReg,    ModelKind::Tree,
                                                             ModelKind::Forest,    ModelKind::Mnb,
                                                             ModelKind::SgdLinear, ModelKind::SvmLinear,
                                                             ModelKind::Voting,    ModelKind::Mlp};

const char* to_string(ModelKind kind);
std::optional<ModelKind> parse_model_kind(std::string_view name);

bool supports_proba(ModelKind kind);
bool supports_importance(ModelKind kind);

struct ModelConfig {
  std::uint64_t seed = 1;
  bool balanced_class_weight = false;
  Execution execution = Execution::Parallel;

  // Objectives use the weighted mean loss plus (l2 / 2) * |w|^2.
  double logreg_l2 = 1e-4;
  int logreg_max_epochs = 2000;
  double logreg_tolerance = 1e-6;

  double mnb_alpha = 1.0;

  std::size_t min_samples_split = 2;
  std::optional<std::size_t> max_depth;
  std::size_t forest_trees = 100;
  std::optional<std::size_t> forest_max_features;  // default floor(sqrt(m))

  int sgd_epochs = 20;
  double sgd_l2 = 1e-4;
  double sgd_eta0 = 0.5;

  int svm_epochs = 20;
  double svm_l2 = 1e-4;
  double svm_eta0 = 0.5;

  std::size_t mlp_hidden = 64;
  std::size_t mlp_max_inputs = 5000;
  int mlp_epochs = 20;
  std::size_t mlp_min_updates = 600;  // small training sets get extra epochs
  std::size_t mlp_batch = 32;
  double mlp_learning_rate = 5e-3;
  double mlp_l2 = 1e-5;

  std::vector<ModelKind> voting_members = {ModelKind::LogReg, ModelKind::Forest, ModelKind::Mnb};
  bool voting_tie_positive = true;
};

struct TreeNode {
  std::int32_t feature = -1;  // -1 for leaves
  double threshold = 0.0;     // x <= threshold goes left
  std::int32_t left = -1;
  std::int32_t right = -1;
  double positive_fraction = 0.0;  // weighted share of label 1
};

struct DecisionTree {
  std::vector<TreeNode> nodes;
  std::vector<double> importance;  // normalized impurity decrease per column; all zero if no split

  double leaf_value(std::span<const std::uint32_t> indices, std::span<const double> values) const;
};

struct LinearParams {
  std::vector<double> weights;
  double bias = 0.0;
};

struct MnbParams {
  std::array<double, 2> log_prior{};
  std::array<std::vector<double>, 2> log_prob;
};

struct MlpParams {
  std::vector<std::uint32_t> inputs;  // selected columns, ascending
  std::size_t hidden = 0;
  std::vector<double> w1;  // inputs.size() x hidden, row per input
  std::vector<double> b1;
  std::vector<double> w2;
  double b2 = 0.0;
};

struct TrainedModel {
  ModelKind kind = ModelKind::LogReg;
  std::uint64_t seed = 0;
  std::string fingerprint;
  std::vector<std::string> feature_names;

  LinearParams linear;            // logreg, sgd_linear, svm_linear
  MnbParams mnb;                  // mnb
  std::vector<DecisionTree> trees;  // tree (one), forest
  MlpParams mlp;                  // mlp
  std::vector<TrainedModel> members;  // voting
  bool voting_tie_positive = true;
};

using ImportanceRanking = std::vector<std::pair<std::string, double>>;

TrainedModel train(ModelKind kind, const FeatureMatrix& x, const ModelConfig& config);

// Throws ModelError when the matrix columns differ from the training columns.
void check_fingerprint(const TrainedModel& model, const FeatureMatrix& x);

std::vector<Label> predict(const TrainedModel& model, const FeatureMatrix& x);
// P(label = 1) per row.
std::vector<double> predict_proba(const TrainedModel& model, const FeatureMatrix& x);
// w.x + b for the linear kinds.
std::vector<double> decision_function(const TrainedModel& model, const FeatureMatrix& x);
// predict_proba where supported, otherwise decision_function.
std::vector<double> score(const TrainedModel& model, const FeatureMatrix& x);

ImportanceRanking feature_importance(const TrainedModel& model);

nlohmann::json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);

// Objectives exposed for gradient checks. Sample weights may be empty (all 1).
struct LinearObjective {
  double loss = 0.0;
  std::vector<double> grad_weights;
  double grad_bias = 0.0;
};

LinearObjective logistic_objective(const FeatureMatrix& x, std::span<const double> sample_weights,
                                   const LinearParams& p, double l2);
// Subgradient; differentiable wherever no margin equals 1.
LinearObjective hinge_objective(const FeatureMatrix& x, std::span<const double> sample_weights,
                                const LinearParams& p, double l2);

struct MlpObjective {
  double loss = 0.0;
  MlpParams grad;
};

// Mean binary cross-entropy over the listed rows plus (l2 / 2) * |W|^2.
MlpObjective mlp_objective(const FeatureMatrix& x, std::span<const std::size_t> rows,
                           std::span<const double> sample_weights, const MlpParams& p, double l2);

// Columns with the largest total absolute value, returned ascending.
std::vector<std::uint32_t> top_columns_by_mass(const FeatureMatrix& x, std::size_t k);

// Per-row weights: all 1, or n / (2 n_c) when balanced.
std::vector<double> class_weights(const FeatureMatrix& x, bool balanced);

DecisionTree fit_tree(const FeatureMatrix& x, std::span<const double> row_weights, const ModelConfig& config,
                      std::optional<std::size_t> max_features, std::uint64_t seed);

}  // namespace mgtd
