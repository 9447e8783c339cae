#include "mgtd/models.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "mgtd/error.hpp"
#include "mgtd/rng.hpp"

namespace mgtd {

namespace {

constexpr const char* kModelFormat = "mgtd-model";
constexpr int kModelVersion = 1;

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

double label_value(Label l) { return l == Label::Machine ? 1.0 : 0.0; }

double weight_at(std::span<const double> w, std::size_t i) { return w.empty() ? 1.0 : w[i]; }

void require_trainable(const FeatureMatrix& x) {
  if (x.rows() < 2) throw InputError("train: need at least 2 documents");
  if (x.cols() == 0) throw InputError("train: feature matrix has no columns");
  bool has[2] = {false, false};
  for (auto l : x.labels()) has[to_int(l)] = true;
  if (!has[0] || !has[1]) throw InputError("train: both labels must be present (single-class input)");
  if (!x.all_finite()) throw InputError("train: feature matrix contains NaN or infinite values");
}

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double linear_value(const LinearParams& p, const FeatureMatrix& x, std::size_t r) { return x.dot(r, p.weights) + p.bias; }

LinearParams train_logreg(const FeatureMatrix& x, std::span<const double> sw, const ModelConfig& cfg) {
  const std::size_t m = x.cols();
  double total_weight = 0.0;
  double lipschitz = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double s = weight_at(sw, r);
    total_weight += s;
    lipschitz += s * (squared_norm(x.row_values(r)) + 1.0);
  }
  lipschitz = 0.25 * lipschitz / total_weight + cfg.logreg_l2;
  const double step = 1.0 / lipschitz;

  // Nesterov-accelerated gradient descent with function-value restart.
  LinearParams w{std::vector<double>(m, 0.0), 0.0};
  LinearParams prev = w;
  LinearParams y = w;
  double prev_loss = logistic_objective(x, sw, w, cfg.logreg_l2).loss;
  double momentum_k = 0.0;
  for (int epoch = 0; epoch < cfg.logreg_max_epochs; ++epoch) {
    const LinearObjective g = logistic_objective(x, sw, y, cfg.logreg_l2);
    const double gnorm = std::sqrt(squared_norm(g.grad_weights) + g.grad_bias * g.grad_bias);
    if (gnorm < cfg.logreg_tolerance) {
      w = y;
      break;
    }
    prev = w;
    for (std::size_t j = 0; j < m; ++j) w.weights[j] = y.weights[j] - step * g.grad_weights[j];
    w.bias = y.bias - step * g.grad_bias;
    const double loss = logistic_objective(x, sw, w, cfg.logreg_l2).loss;
    if (loss > prev_loss) {
      // Restart momentum from the last good point.
      w = prev;
      y = prev;
      momentum_k = 0.0;
      continue;
    }
    prev_loss = loss;
    momentum_k += 1.0;
    const double beta = (momentum_k - 1.0) / (momentum_k + 2.0);
    for (std::size_t j = 0; j < m; ++j) y.weights[j] = w.weights[j] + beta * (w.weights[j] - prev.weights[j]);
    y.bias = w.bias + beta * (w.bias - prev.bias);
  }
  return w;
}

// Per-sample SGD on a linear model with L2 shrinkage. The weight vector is
// kept as scale * v so the shrinkage step stays O(1).
template <typename LossGrad>
LinearParams train_linear_sgd(const FeatureMatrix& x, std::span<const double> sw, int epochs, double l2, double eta0,
                              std::uint64_t seed, LossGrad dloss) {
  const std::size_t n = x.rows();
  std::vector<double> v(x.cols(), 0.0);
  double scale = 1.0;
  double bias = 0.0;
  Rng rng(seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::size_t t = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t r : order) {
      ++t;
      const double eta = eta0 / (1.0 + eta0 * l2 * static_cast<double>(t));
      const double z = scale * x.dot(r, v) + bias;
      const double g = weight_at(sw, r) * dloss(z, label_value(x.labels()[r]));
      scale *= 1.0 - eta * l2;
      if (g != 0.0) {
        const auto idx = x.row_indices(r);
        const auto val = x.row_values(r);
        for (std::size_t k = 0; k < idx.size(); ++k) v[idx[k]] -= eta * g * val[k] / scale;
        bias -= eta * g;
      }
      if (scale < 1e-9) {
        for (double& e : v) e *= scale;
        scale = 1.0;
      }
    }
  }
  for (double& e : v) e *= scale;
  return {std::move(v), bias};
}

MnbParams train_mnb(const FeatureMatrix& x, std::span<const double> sw, double alpha) {
  if (!x.all_nonnegative()) throw ModelError("mnb: feature values must be nonnegative");
  if (!(alpha > 0.0)) throw ModelError("mnb: smoothing alpha must be positive");
  const std::size_t m = x.cols();
  std::array<std::vector<double>, 2> counts = {std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  std::array<double, 2> class_weight{};
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto c = static_cast<std::size_t>(to_int(x.labels()[r]));
    const double s = weight_at(sw, r);
    class_weight[c] += s;
    const auto idx = x.row_indices(r);
    const auto val = x.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) counts[c][idx[k]] += s * val[k];
  }
  MnbParams p;
  const double total = class_weight[0] + class_weight[1];
  for (std::size_t c = 0; c < 2; ++c) {
    p.log_prior[c] = std::log(class_weight[c] / total);
    const double denom = std::accumulate(counts[c].begin(), counts[c].end(), 0.0) + alpha * static_cast<double>(m);
    p.log_prob[c].resize(m);
    for (std::size_t j = 0; j < m; ++j) p.log_prob[c][j] = std::log((counts[c][j] + alpha) / denom);
  }
  return p;
}

double mnb_proba(const MnbParams& p, const FeatureMatrix& x, std::size_t r) {
  double joint[2] = {p.log_prior[0], p.log_prior[1]};
  const auto idx = x.row_indices(r);
  const auto val = x.row_values(r);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t k = 0; k < idx.size(); ++k) joint[c] += val[k] * p.log_prob[c][idx[k]];
  }
  // P(1 | x) = 1 / (1 + exp(joint0 - joint1)).
  return sigmoid(joint[1] - joint[0]);
}

std::vector<double> forest_row_weights(const FeatureMatrix& x, std::span<const double> sw, Rng& rng) {
  const std::size_t n = x.rows();
  std::vector<double> counts(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) counts[rng.uniform_index(n)] += 1.0;
  for (std::size_t i = 0; i < n; ++i) counts[i] *= weight_at(sw, i);
  return counts;
}

std::vector<DecisionTree> train_forest(const FeatureMatrix& x, std::span<const double> sw, const ModelConfig& cfg) {
  if (cfg.forest_trees == 0) throw ModelError("forest: need at least one tree");
  const std::size_t m = x.cols();
  const std::size_t k =
      cfg.forest_max_features.value_or(std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(m)))));
  std::vector<DecisionTree> trees(cfg.forest_trees);
  for_each_index(trees.size(), cfg.execution, [&](std::size_t t) {
    Rng rng(derive_seed(cfg.seed, t));
    const auto weights = forest_row_weights(x, sw, rng);
    trees[t] = fit_tree(x, weights, cfg, k, rng.next());
  });
  return trees;
}

MlpParams init_mlp(std::vector<std::uint32_t> inputs, std::size_t hidden, Rng& rng) {
  MlpParams p;
  p.inputs = std::move(inputs);
  p.hidden = hidden;
  const double s1 = std::sqrt(2.0 / static_cast<double>(std::max<std::size_t>(1, p.inputs.size())));
  const double s2 = std::sqrt(2.0 / static_cast<double>(hidden));
  p.w1.resize(p.inputs.size() * hidden);
  for (double& w : p.w1) w = s1 * rng.normal();
  p.b1.assign(hidden, 0.0);
  p.w2.resize(hidden);
  for (double& w : p.w2) w = s2 * rng.normal();
  p.b2 = 0.0;
  return p;
}

// Flattened views for the optimizer.
template <typename F>
void for_each_param(MlpParams& p, F f) {
  for (double& w : p.w1) f(w);
  for (double& w : p.b1) f(w);
  for (double& w : p.w2) f(w);
  f(p.b2);
}

MlpParams train_mlp(const FeatureMatrix& x, std::span<const double> sw, const ModelConfig& cfg) {
  if (cfg.mlp_hidden == 0 || cfg.mlp_batch == 0) throw ModelError("mlp: hidden width and batch size must be positive");
  Rng rng(cfg.seed);
  MlpParams p = init_mlp(top_columns_by_mass(x, cfg.mlp_max_inputs), cfg.mlp_hidden, rng);
  const std::size_t count = p.w1.size() + p.b1.size() + p.w2.size() + 1;
  std::vector<double> m1(count, 0.0), m2(count, 0.0);
  const double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  std::vector<std::size_t> order(x.rows());
  std::iota(order.begin(), order.end(), 0);
  std::size_t step = 0;
  const std::size_t per_epoch = (x.rows() + cfg.mlp_batch - 1) / cfg.mlp_batch;
  const std::size_t epochs = std::max<std::size_t>(static_cast<std::size_t>(std::max(cfg.mlp_epochs, 0)),
                                                   per_epoch ? (cfg.mlp_min_updates + per_epoch - 1) / per_epoch : 0);
  for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < order.size(); start += cfg.mlp_batch) {
      const std::size_t end = std::min(order.size(), start + cfg.mlp_batch);
      MlpObjective obj = mlp_objective(x, std::span<const std::size_t>(order).subspan(start, end - start), sw, p, cfg.mlp_l2);
      ++step;
      const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
      std::vector<double> grads;
      grads.reserve(count);
      for_each_param(obj.grad, [&](double& g) { grads.push_back(g); });
      std::size_t i = 0;
      for_each_param(p, [&](double& w) {
        const double g = grads[i];
        m1[i] = beta1 * m1[i] + (1.0 - beta1) * g;
        m2[i] = beta2 * m2[i] + (1.0 - beta2) * g * g;
        w -= cfg.mlp_learning_rate * (m1[i] / c1) / (std::sqrt(m2[i] / c2) + eps);
        ++i;
      });
    }
  }
  return p;
}

double mlp_forward(const MlpParams& p, const std::vector<std::int64_t>& local, const FeatureMatrix& x, std::size_t r,
                   std::vector<double>& pre) {
  pre = p.b1;
  const auto idx = x.row_indices(r);
  const auto val = x.row_values(r);
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const auto li = local[idx[k]];
    if (li < 0) continue;
    const double* row = &p.w1[static_cast<std::size_t>(li) * p.hidden];
    for (std::size_t h = 0; h < p.hidden; ++h) pre[h] += val[k] * row[h];
  }
  double z = p.b2;
  for (std::size_t h = 0; h < p.hidden; ++h) z += p.w2[h] * std::max(0.0, pre[h]);
  return z;
}

std::vector<std::int64_t> local_index(const MlpParams& p, std::size_t cols) {
  std::vector<std::int64_t> local(cols, -1);
  for (std::size_t i = 0; i < p.inputs.size(); ++i) {
    if (p.inputs[i] >= cols) throw ModelError("mlp: input column out of range");
    local[p.inputs[i]] = static_cast<std::int64_t>(i);
  }
  return local;
}

std::vector<double> vote_fraction(const std::vector<DecisionTree>& trees, const FeatureMatrix& x) {
  std::vector<double> out(x.rows());
  for_each_index(x.rows(), Execution::Parallel, [&](std::size_t r) {
    std::size_t votes = 0;
    for (const auto& t : trees) votes += t.leaf_value(x.row_indices(r), x.row_values(r)) >= 0.5 ? 1 : 0;
    out[r] = static_cast<double>(votes) / static_cast<double>(trees.size());
  });
  return out;
}

std::vector<double> member_vote_fraction(const TrainedModel& model, const FeatureMatrix& x) {
  std::vector<double> votes(x.rows(), 0.0);
  for (const auto& member : model.members) {
    const auto p = predict(member, x);
    for (std::size_t r = 0; r < p.size(); ++r) votes[r] += label_value(p[r]);
  }
  for (double& v : votes) v /= static_cast<double>(model.members.size());
  return votes;
}

nlohmann::json tree_to_json(const DecisionTree& t) {
  nlohmann::json feature = nlohmann::json::array(), threshold = nlohmann::json::array(),
                 left = nlohmann::json::array(), right = nlohmann::json::array(), value = nlohmann::json::array();
  for (const auto& n : t.nodes) {
    feature.push_back(n.feature);
    threshold.push_back(n.threshold);
    left.push_back(n.left);
    right.push_back(n.right);
    value.push_back(n.positive_fraction);
  }
  nlohmann::json importance = nlohmann::json::array();
  for (std::size_t j = 0; j < t.importance.size(); ++j) {
    if (t.importance[j] != 0.0) importance.push_back({j, t.importance[j]});
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left},
          {"right", right},     {"value", value},         {"importance", importance}};
}

DecisionTree tree_from_json(const nlohmann::json& j, std::size_t cols) {
  DecisionTree t;
  const auto& feature = j.at("feature");
  const std::size_t n = feature.size();
  t.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    auto& node = t.nodes[i];
    node.feature = feature[i].get<std::int32_t>();
    node.threshold = j.at("threshold")[i].get<double>();
    node.left = j.at("left")[i].get<std::int32_t>();
    node.right = j.at("right")[i].get<std::int32_t>();
    node.positive_fraction = j.at("value")[i].get<double>();
    const auto limit = static_cast<std::int32_t>(n);
    if (node.feature >= static_cast<std::int32_t>(cols) ||
        (node.feature >= 0 && (node.left <= static_cast<std::int32_t>(i) || node.left >= limit ||
                               node.right <= static_cast<std::int32_t>(i) || node.right >= limit))) {
      throw ModelError("model file: malformed tree node");
    }
  }
  if (n == 0) throw ModelError("model file: empty tree");
  t.importance.assign(cols, 0.0);
  for (const auto& e : j.at("importance")) {
    const auto idx = e.at(0).get<std::size_t>();
    if (idx >= cols) throw ModelError("model file: importance index out of range");
    t.importance[idx] = e.at(1).get<double>();
  }
  return t;
}

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::LogReg: return "logreg";
    case ModelKind::Tree: return "tree";
    case ModelKind::Forest: return "forest";
    case ModelKind::Mnb: return "mnb";
    case ModelKind::SgdLinear: return "sgd_linear";
    case ModelKind::SvmLinear: return "svm_linear";
    case ModelKind::Voting: return "voting";
    case ModelKind::Mlp: return "mlp";
  }
  return "unknown";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) {
  for (auto k : kAllModelKinds) {
    if (name == to_string(k)) return k;
  }
  return std::nullopt;
}

bool supports_proba(ModelKind kind) {
  return kind == ModelKind::LogReg || kind == ModelKind::Mnb || kind == ModelKind::Forest ||
         kind == ModelKind::SgdLinear || kind == ModelKind::Mlp || kind == ModelKind::Tree;
}

bool supports_importance(ModelKind kind) {
  return kind == ModelKind::Tree || kind == ModelKind::Forest || kind == ModelKind::LogReg ||
         kind == ModelKind::SgdLinear || kind == ModelKind::SvmLinear;
}

std::vector<double> class_weights(const FeatureMatrix& x, bool balanced) {
  std::vector<double> w(x.rows(), 1.0);
  if (!balanced) return w;
  std::array<double, 2> n{};
  for (auto l : x.labels()) n[static_cast<std::size_t>(to_int(l))] += 1.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    w[r] = static_cast<double>(x.rows()) / (2.0 * n[static_cast<std::size_t>(to_int(x.labels()[r]))]);
  }
  return w;
}

std::vector<std::uint32_t> top_columns_by_mass(const FeatureMatrix& x, std::size_t k) {
  std::vector<double> mass(x.cols(), 0.0);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const auto idx = x.row_indices(r);
    const auto val = x.row_values(r);
    for (std::size_t i = 0; i < idx.size(); ++i) mass[idx[i]] += std::abs(val[i]);
  }
  std::vector<std::uint32_t> cols(x.cols());
  std::iota(cols.begin(), cols.end(), 0U);
  if (k < cols.size()) {
    std::stable_sort(cols.begin(), cols.end(), [&](auto a, auto b) { return mass[a] > mass[b]; });
    cols.resize(k);
    std::sort(cols.begin(), cols.end());
  }
  return cols;
}

LinearObjective logistic_objective(const FeatureMatrix& x, std::span<const double> sw, const LinearParams& p,
                                   double l2) {
  LinearObjective out;
  out.grad_weights.assign(x.cols(), 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double s = weight_at(sw, r);
    const double z = linear_value(p, x, r);
    const double y = label_value(x.labels()[r]);
    out.loss += s * (softplus(z) - y * z);
    const double g = s * (sigmoid(z) - y);
    const auto idx = x.row_indices(r);
    const auto val = x.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) out.grad_weights[idx[k]] += g * val[k];
    out.grad_bias += g;
    total += s;
  }
  out.loss /= total;
  out.grad_bias /= total;
  for (std::size_t j = 0; j < x.cols(); ++j) out.grad_weights[j] = out.grad_weights[j] / total + l2 * p.weights[j];
  out.loss += 0.5 * l2 * squared_norm(p.weights);
  return out;
}

LinearObjective hinge_objective(const FeatureMatrix& x, std::span<const double> sw, const LinearParams& p, double l2) {
  LinearObjective out;
  out.grad_weights.assign(x.cols(), 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double s = weight_at(sw, r);
    const double y = x.labels()[r] == Label::Machine ? 1.0 : -1.0;
    const double margin = y * linear_value(p, x, r);
    total += s;
    if (margin >= 1.0) continue;
    out.loss += s * (1.0 - margin);
    const auto idx = x.row_indices(r);
    const auto val = x.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) out.grad_weights[idx[k]] -= s * y * val[k];
    out.grad_bias -= s * y;
  }
  out.loss /= total;
  out.grad_bias /= total;
  for (std::size_t j = 0; j < x.cols(); ++j) out.grad_weights[j] = out.grad_weights[j] / total + l2 * p.weights[j];
  out.loss += 0.5 * l2 * squared_norm(p.weights);
  return out;
}

MlpObjective mlp_objective(const FeatureMatrix& x, std::span<const std::size_t> rows, std::span<const double> sw,
                           const MlpParams& p, double l2) {
  const auto local = local_index(p, x.cols());
  MlpObjective out;
  out.grad.inputs = p.inputs;
  out.grad.hidden = p.hidden;
  out.grad.w1.assign(p.w1.size(), 0.0);
  out.grad.b1.assign(p.hidden, 0.0);
  out.grad.w2.assign(p.hidden, 0.0);
  double total = 0.0;
  for (std::size_t r : rows) total += weight_at(sw, r);
  if (!(total > 0.0)) throw InvariantError("mlp_objective: empty batch");

  std::vector<double> pre;
  std::vector<double> dh(p.hidden);
  for (std::size_t r : rows) {
    const double s = weight_at(sw, r) / total;
    const double z = mlp_forward(p, local, x, r, pre);
    const double y = label_value(x.labels()[r]);
    out.loss += s * (softplus(z) - y * z);
    const double dz = s * (sigmoid(z) - y);
    out.grad.b2 += dz;
    for (std::size_t h = 0; h < p.hidden; ++h) {
      const double act = std::max(0.0, pre[h]);
      out.grad.w2[h] += dz * act;
      dh[h] = pre[h] > 0.0 ? dz * p.w2[h] : 0.0;
      out.grad.b1[h] += dh[h];
    }
    const auto idx = x.row_indices(r);
    const auto val = x.row_values(r);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto li = local[idx[k]];
      if (li < 0) continue;
      double* g = &out.grad.w1[static_cast<std::size_t>(li) * p.hidden];
      for (std::size_t h = 0; h < p.hidden; ++h) g[h] += val[k] * dh[h];
    }
  }
  if (l2 > 0.0) {
    out.loss += 0.5 * l2 * (squared_norm(p.w1) + squared_norm(p.w2));
    for (std::size_t i = 0; i < p.w1.size(); ++i) out.grad.w1[i] += l2 * p.w1[i];
    for (std::size_t i = 0; i < p.w2.size(); ++i) out.grad.w2[i] += l2 * p.w2[i];
  }
  return out;
}

TrainedModel train(ModelKind kind, const FeatureMatrix& x, const ModelConfig& config) {
  require_trainable(x);
  TrainedModel model;
  model.kind = kind;
  model.seed = config.seed;
  model.fingerprint = x.fingerprint();
  model.feature_names = x.column_names();
  const auto sw = class_weights(x, config.balanced_class_weight);

  switch (kind) {
    case ModelKind::LogReg:
      model.linear = train_logreg(x, sw, config);
      break;
    case ModelKind::SgdLinear:
      model.linear = train_linear_sgd(x, sw, config.sgd_epochs, config.sgd_l2, config.sgd_eta0, config.seed,
                                      [](double z, double y) { return sigmoid(z) - y; });
      break;
    case ModelKind::SvmLinear:
      model.linear = train_linear_sgd(x, sw, config.svm_epochs, config.svm_l2, config.svm_eta0, config.seed,
                                      [](double z, double y) {
                                        const double s = y > 0.5 ? 1.0 : -1.0;
                                        return s * z < 1.0 ? -s : 0.0;
                                      });
      break;
    case ModelKind::Mnb:
      model.mnb = train_mnb(x, sw, config.mnb_alpha);
      break;
    case ModelKind::Tree:
      model.trees.push_back(fit_tree(x, sw, config, std::nullopt, config.seed));
      break;
    case ModelKind::Forest:
      model.trees = train_forest(x, sw, config);
      break;
    case ModelKind::Mlp:
      model.mlp = train_mlp(x, sw, config);
      break;
    case ModelKind::Voting: {
      if (config.voting_members.empty()) throw ModelError("voting: no member models");
      if (config.voting_members.size() % 2 == 0 && !config.voting_tie_positive) {
        throw ModelError("voting: an even number of members can tie and the tie rule is disabled");
      }
      model.voting_tie_positive = config.voting_tie_positive;
      for (std::size_t i = 0; i < config.voting_members.size(); ++i) {
        const ModelKind member = config.voting_members[i];
        if (member == ModelKind::Voting) throw ModelError("voting: members cannot be voting models");
        ModelConfig member_config = config;
        member_config.seed = derive_seed(config.seed, 1000 + i);
        model.members.push_back(train(member, x, member_config));
      }
      break;
    }
  }
  return model;
}

void check_fingerprint(const TrainedModel& model, const FeatureMatrix& x) {
  if (x.fingerprint() != model.fingerprint) {
    throw ModelError("feature fingerprint mismatch: model " + model.fingerprint + ", input " + x.fingerprint());
  }
}

std::vector<double> predict_proba(const TrainedModel& model, const FeatureMatrix& x) {
  check_fingerprint(model, x);
  std::vector<double> out(x.rows());
  switch (model.kind) {
    case ModelKind::LogReg:
    case ModelKind::SgdLinear:
      for_each_index(x.rows(), Execution::Parallel,
                     [&](std::size_t r) { out[r] = sigmoid(linear_value(model.linear, x, r)); });
      return out;
    case ModelKind::Mnb:
      for_each_index(x.rows(), Execution::Parallel, [&](std::size_t r) { out[r] = mnb_proba(model.mnb, x, r); });
      return out;
    case ModelKind::Tree:
      for_each_index(x.rows(), Execution::Parallel, [&](std::size_t r) {
        out[r] = model.trees.front().leaf_value(x.row_indices(r), x.row_values(r));
      });
      return out;
    case ModelKind::Forest:
      return vote_fraction(model.trees, x);
    case ModelKind::Mlp: {
      const auto local = local_index(model.mlp, x.cols());
      for_each_index(x.rows(), Execution::Parallel, [&](std::size_t r) {
        std::vector<double> pre;
        out[r] = sigmoid(mlp_forward(model.mlp, local, x, r, pre));
      });
      return out;
    }
    case ModelKind::SvmLinear:
    case ModelKind::Voting:
      break;
  }
  throw ModelError(std::string("predict_proba: unsupported for ") + to_string(model.kind));
}

std::vector<double> decision_function(const TrainedModel& model, const FeatureMatrix& x) {
  check_fingerprint(model, x);
  if (model.kind != ModelKind::LogReg && model.kind != ModelKind::SgdLinear && model.kind != ModelKind::SvmLinear) {
    throw ModelError(std::string("decision_function: unsupported for ") + to_string(model.kind));
  }
  std::vector<double> out(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out[r] = linear_value(model.linear, x, r);
  return out;
}

std::vector<double> score(const TrainedModel& model, const FeatureMatrix& x) {
  if (supports_proba(model.kind)) return predict_proba(model, x);
  if (model.kind == ModelKind::Voting) {
    check_fingerprint(model, x);
    return member_vote_fraction(model, x);
  }
  return decision_function(model, x);
}

std::vector<Label> predict(const TrainedModel& model, const FeatureMatrix& x) {
  check_fingerprint(model, x);
  std::vector<Label> out(x.rows());
  if (model.kind == ModelKind::SvmLinear) {
    const auto d = decision_function(model, x);
    for (std::size_t r = 0; r < d.size(); ++r) out[r] = d[r] >= 0.0 ? Label::Machine : Label::Human;
    return out;
  }
  if (model.kind == ModelKind::Voting) {
    const auto f = member_vote_fraction(model, x);
    for (std::size_t r = 0; r < f.size(); ++r) {
      if (f[r] == 0.5 && !model.voting_tie_positive) throw ModelError("voting: tied vote with the tie rule disabled");
      out[r] = f[r] >= 0.5 ? Label::Machine : Label::Human;
    }
    return out;
  }
  const auto p = predict_proba(model, x);
  for (std::size_t r = 0; r < p.size(); ++r) out[r] = p[r] >= 0.5 ? Label::Machine : Label::Human;
  return out;
}

ImportanceRanking feature_importance(const TrainedModel& model) {
  std::vector<double> values(model.feature_names.size(), 0.0);
  switch (model.kind) {
    case ModelKind::LogReg:
    case ModelKind::SgdLinear:
    case ModelKind::SvmLinear:
      for (std::size_t j = 0; j < values.size(); ++j) values[j] = std::abs(model.linear.weights[j]);
      break;
    case ModelKind::Tree:
    case ModelKind::Forest: {
      std::size_t used = 0;
      for (const auto& t : model.trees) {
        if (std::all_of(t.importance.begin(), t.importance.end(), [](double v) { return v == 0.0; })) continue;
        ++used;
        for (std::size_t j = 0; j < values.size(); ++j) values[j] += t.importance[j];
      }
      const double total = std::accumulate(values.begin(), values.end(), 0.0);
      if (used > 0 && total > 0.0) {
        for (double& v : values) v /= total;
      }
      break;
    }
    default:
      throw ModelError(std::string("feature_importance: unsupported for ") + to_string(model.kind));
  }
  ImportanceRanking ranking;
  ranking.reserve(values.size());
  for (std::size_t j = 0; j < values.size(); ++j) ranking.emplace_back(model.feature_names[j], values[j]);
  std::stable_sort(ranking.begin(), ranking.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  return ranking;
}

nlohmann::json model_to_json(const TrainedModel& model) {
  nlohmann::json j;
  j["format"] = kModelFormat;
  j["version"] = kModelVersion;
  j["kind"] = to_string(model.kind);
  j["seed"] = model.seed;
  j["fingerprint"] = model.fingerprint;
  j["feature_names"] = model.feature_names;
  switch (model.kind) {
    case ModelKind::LogReg:
    case ModelKind::SgdLinear:
    case ModelKind::SvmLinear:
      j["weights"] = model.linear.weights;
      j["bias"] = model.linear.bias;
      break;
    case ModelKind::Mnb:
      j["log_prior"] = model.mnb.log_prior;
      j["log_prob"] = {model.mnb.log_prob[0], model.mnb.log_prob[1]};
      break;
    case ModelKind::Tree:
    case ModelKind::Forest: {
      nlohmann::json trees = nlohmann::json::array();
      for (const auto& t : model.trees) trees.push_back(tree_to_json(t));
      j["trees"] = std::move(trees);
      break;
    }
    case ModelKind::Mlp:
      j["inputs"] = model.mlp.inputs;
      j["hidden"] = model.mlp.hidden;
      j["w1"] = model.mlp.w1;
      j["b1"] = model.mlp.b1;
      j["w2"] = model.mlp.w2;
      j["b2"] = model.mlp.b2;
      break;
    case ModelKind::Voting: {
      nlohmann::json members = nlohmann::json::array();
      for (const auto& m : model.members) {
        auto mj = model_to_json(m);
        mj.erase("feature_names");
        members.push_back(std::move(mj));
      }
      j["members"] = std::move(members);
      j["tie_positive"] = model.voting_tie_positive;
      break;
    }
  }
  return j;
}

namespace {

TrainedModel model_from_json_impl(const nlohmann::json& j, const std::vector<std::string>* inherited_names) {
  if (!j.is_object() || j.value("format", "") != kModelFormat) throw ModelError("not a model file");
  if (j.value("version", -1) != kModelVersion) {
    throw ModelError("unsupported model version " + j.value("version", nlohmann::json()).dump());
  }
  const auto kind = parse_model_kind(j.at("kind").get<std::string>());
  if (!kind) throw ModelError("unknown model kind " + j.at("kind").dump());
  TrainedModel m;
  m.kind = *kind;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.fingerprint = j.at("fingerprint").get<std::string>();
  m.feature_names = inherited_names ? *inherited_names : j.at("feature_names").get<std::vector<std::string>>();
  if (fingerprint_of(m.feature_names) != m.fingerprint) throw ModelError("model file: fingerprint does not match feature names");
  const std::size_t cols = m.feature_names.size();
  switch (m.kind) {
    case ModelKind::LogReg:
    case ModelKind::SgdLinear:
    case ModelKind::SvmLinear:
      m.linear.weights = j.at("weights").get<std::vector<double>>();
      m.linear.bias = j.at("bias").get<double>();
      if (m.linear.weights.size() != cols) throw ModelError("model file: weight count mismatch");
      break;
    case ModelKind::Mnb:
      m.mnb.log_prior = j.at("log_prior").get<std::array<double, 2>>();
      m.mnb.log_prob[0] = j.at("log_prob").at(0).get<std::vector<double>>();
      m.mnb.log_prob[1] = j.at("log_prob").at(1).get<std::vector<double>>();
      if (m.mnb.log_prob[0].size() != cols || m.mnb.log_prob[1].size() != cols) {
        throw ModelError("model file: mnb parameter count mismatch");
      }
      break;
    case ModelKind::Tree:
    case ModelKind::Forest:
      for (const auto& t : j.at("trees")) m.trees.push_back(tree_from_json(t, cols));
      if (m.trees.empty()) throw ModelError("model file: no trees");
      break;
    case ModelKind::Mlp:
      m.mlp.inputs = j.at("inputs").get<std::vector<std::uint32_t>>();
      m.mlp.hidden = j.at("hidden").get<std::size_t>();
      m.mlp.w1 = j.at("w1").get<std::vector<double>>();
      m.mlp.b1 = j.at("b1").get<std::vector<double>>();
      m.mlp.w2 = j.at("w2").get<std::vector<double>>();
      m.mlp.b2 = j.at("b2").get<double>();
      if (m.mlp.w1.size() != m.mlp.inputs.size() * m.mlp.hidden || m.mlp.b1.size() != m.mlp.hidden ||
          m.mlp.w2.size() != m.mlp.hidden) {
        throw ModelError("model file: mlp shape mismatch");
      }
      break;
    case ModelKind::Voting:
      for (const auto& mj : j.at("members")) m.members.push_back(model_from_json_impl(mj, &m.feature_names));
      m.voting_tie_positive = j.at("tie_positive").get<bool>();
      if (m.members.empty()) throw ModelError("model file: voting without members");
      break;
  }
  return m;
}

}  // namespace

TrainedModel model_from_json(const nlohmann::json& j) {
  try {
    return model_from_json_impl(j, nullptr);
  } catch (const nlohmann::json::exception& e) {
    throw ModelError(std::string("model file: ") + e.what());
  }
}

}  // namespace mgtd
