#include <doctest.h>

#include <cmath>
#include <numeric>

#include "mgtd/error.hpp"
#include "mgtd/models.hpp"
#include "mgtd/rng.hpp"
#include "../support/matrices.hpp"
#include "../support/oracles.hpp"

using namespace mgtd;
using mgtd::testing::blobs;
using mgtd::testing::dense_matrix;
using mgtd::testing::gradient_relative_error;

namespace {

double accuracy(const std::vector<Label>& pred, const FeatureMatrix& x) {
  std::size_t ok = 0;
  for (std::size_t r = 0; r < pred.size(); ++r) ok += pred[r] == x.labels()[r];
  return static_cast<double>(ok) / static_cast<double>(pred.size());
}

FeatureMatrix random_sparse(std::size_t n, std::size_t m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row(m, 0.0);
    for (auto& v : row) {
      if (rng.uniform() < 0.6) v = rng.uniform(0.1, 1.5);
    }
    rows.push_back(row);
    labels.push_back(static_cast<int>(i % 2));
  }
  return dense_matrix(rows, labels);
}

LinearParams random_linear(std::size_t m, Rng& rng) {
  LinearParams p;
  for (std::size_t j = 0; j < m; ++j) p.weights.push_back(rng.normal());
  p.bias = rng.normal();
  return p;
}

}  // namespace

TEST_CASE("mnb worked example") {
  const auto x = dense_matrix({{2, 0}, {0, 2}}, {0, 1});
  const auto model = train(ModelKind::Mnb, x, {});
  FeatureMatrix q(x.column_names());
  q.add_dense_row(std::vector<double>{1, 0}, Label::Human);
  CHECK(predict_proba(model, q)[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(predict(model, q)[0] == Label::Human);
}

TEST_CASE("mnb equals brute-force posteriors") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t v = 1 + rng.uniform_index(4);
    const std::size_t n = 2 + rng.uniform_index(5);
    std::vector<std::vector<double>> rows(n, std::vector<double>(v));
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
      for (auto& c : rows[i]) c = static_cast<double>(rng.uniform_index(4));
      labels[i] = i < 2 ? static_cast<int>(i) : static_cast<int>(rng.uniform_index(2));
    }
    const auto x = dense_matrix(rows, labels);
    const auto model = train(ModelKind::Mnb, x, {});

    std::vector<double> query(v);
    for (auto& c : query) c = static_cast<double>(rng.uniform_index(3));
    // Direct products over the smoothed multinomial.
    double joint[2];
    for (int c = 0; c < 2; ++c) {
      double docs = 0, total = 0;
      std::vector<double> counts(v, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != c) continue;
        docs += 1;
        for (std::size_t j = 0; j < v; ++j) counts[j] += rows[i][j], total += rows[i][j];
      }
      joint[c] = docs / static_cast<double>(n);
      for (std::size_t j = 0; j < v; ++j) {
        const double pw = (counts[j] + 1.0) / (total + static_cast<double>(v));
        for (int k = 0; k < static_cast<int>(query[j]); ++k) joint[c] *= pw;
      }
    }
    FeatureMatrix q(x.column_names());
    q.add_dense_row(query, Label::Human);
    CHECK(std::abs(predict_proba(model, q)[0] - joint[1] / (joint[0] + joint[1])) < 1e-12);
  }
}

TEST_CASE("mnb rejects negative features") {
  const auto x = dense_matrix({{1, -1}, {0, 2}}, {0, 1});
  CHECK_THROWS_AS(train(ModelKind::Mnb, x, {}), ModelError);
}

TEST_CASE("logistic objective gradient") {
  const auto x = random_sparse(12, 5, 3);
  Rng rng(4);
  auto p = random_linear(5, rng);
  std::vector<double> sw(12);
  for (auto& s : sw) s = rng.uniform(0.5, 2.0);
  for (const auto& weights : {std::vector<double>{}, sw}) {
    const auto g = logistic_objective(x, weights, p, 0.1);
    std::vector<double*> params;
    for (auto& w : p.weights) params.push_back(&w);
    params.push_back(&p.bias);
    auto analytic = g.grad_weights;
    analytic.push_back(g.grad_bias);
    const double err =
        gradient_relative_error(params, analytic, [&] { return logistic_objective(x, weights, p, 0.1).loss; });
    CHECK(err < 1e-5);
  }
}

TEST_CASE("per-sample logistic gradient used by sgd") {
  const auto x = random_sparse(6, 4, 8);
  Rng rng(9);
  auto p = random_linear(4, rng);
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const std::vector<std::size_t> one{r};
    const auto xr = x.select_rows(one);
    const auto g = logistic_objective(xr, {}, p, 1e-4);
    std::vector<double*> params;
    for (auto& w : p.weights) params.push_back(&w);
    params.push_back(&p.bias);
    auto analytic = g.grad_weights;
    analytic.push_back(g.grad_bias);
    CHECK(gradient_relative_error(params, analytic, [&] { return logistic_objective(xr, {}, p, 1e-4).loss; }) < 1e-5);
  }
}

TEST_CASE("hinge objective gradient away from the kinks") {
  const auto x = random_sparse(12, 5, 5);
  Rng rng(6);
  auto p = random_linear(5, rng);
  for (auto& w : p.weights) w *= 0.3;
  // Make sure no margin sits near 1.
  for (std::size_t r = 0; r < x.rows(); ++r) {
    const double y = x.labels()[r] == Label::Machine ? 1.0 : -1.0;
    REQUIRE(std::abs(y * (x.dot(r, p.weights) + p.bias) - 1.0) > 1e-3);
  }
  const auto g = hinge_objective(x, {}, p, 0.05);
  std::vector<double*> params;
  for (auto& w : p.weights) params.push_back(&w);
  params.push_back(&p.bias);
  auto analytic = g.grad_weights;
  analytic.push_back(g.grad_bias);
  CHECK(gradient_relative_error(params, analytic, [&] { return hinge_objective(x, {}, p, 0.05).loss; }) < 1e-5);
}

TEST_CASE("mlp gradient on a three-sample batch") {
  const auto x = random_sparse(8, 6, 10);
  Rng rng(12);
  MlpParams p;
  p.inputs = {0, 1, 2, 4, 5};
  p.hidden = 7;
  for (std::size_t i = 0; i < p.inputs.size() * p.hidden; ++i) p.w1.push_back(rng.normal());
  for (std::size_t h = 0; h < p.hidden; ++h) p.b1.push_back(0.1 * rng.normal());
  for (std::size_t h = 0; h < p.hidden; ++h) p.w2.push_back(rng.normal());
  p.b2 = 0.2;
  const std::vector<std::size_t> batch{1, 4, 6};
  const std::vector<double> sw{1, 2, 1, 1, 0.5, 1, 3, 1};
  const auto g = mlp_objective(x, batch, sw, p, 0.01);
  std::vector<double*> params;
  std::vector<double> analytic;
  for (std::size_t i = 0; i < p.w1.size(); ++i) params.push_back(&p.w1[i]), analytic.push_back(g.grad.w1[i]);
  for (std::size_t i = 0; i < p.b1.size(); ++i) params.push_back(&p.b1[i]), analytic.push_back(g.grad.b1[i]);
  for (std::size_t i = 0; i < p.w2.size(); ++i) params.push_back(&p.w2[i]), analytic.push_back(g.grad.w2[i]);
  params.push_back(&p.b2);
  analytic.push_back(g.grad.b2);
  CHECK(gradient_relative_error(params, analytic, [&] { return mlp_objective(x, batch, sw, p, 0.01).loss; }) < 1e-5);
}

TEST_CASE("logreg reaches a near-stationary point") {
  const auto x = blobs(60, 4, 0.4, 2);
  ModelConfig cfg;
  cfg.logreg_l2 = 0.01;
  const auto model = train(ModelKind::LogReg, x, cfg);
  const auto g = logistic_objective(x, {}, model.linear, cfg.logreg_l2);
  double norm = g.grad_bias * g.grad_bias;
  for (double v : g.grad_weights) norm += v * v;
  CHECK(std::sqrt(norm) < 1e-5);
}

TEST_CASE("one-dimensional separable tree") {
  const auto x = dense_matrix({{-3}, {-2}, {-1}, {1}, {2}, {3}}, {0, 0, 0, 1, 1, 1});
  const auto model = train(ModelKind::Tree, x, {});
  REQUIRE(model.trees.size() == 1);
  CHECK(model.trees[0].nodes.size() == 3);
  CHECK(model.trees[0].nodes[0].threshold == 0.0);
  CHECK(accuracy(predict(model, x), x) == 1.0);
  const auto imp = feature_importance(model);
  CHECK(imp[0].second == 1.0);
}

TEST_CASE("tree split gain matches a hand gini computation") {
  // f0 splits 3|3 with one error on each side; f1 <= 0.5 isolates the negatives.
  const auto x = dense_matrix({{0, 0}, {0, 0}, {1, 0}, {0, 1}, {1, 2}, {1, 2}}, {0, 0, 0, 1, 1, 1});
  const ModelConfig cfg;
  const auto t = fit_tree(x, std::vector<double>(6, 1.0), cfg, std::nullopt, 1);
  // Parent 6 * (1 - 1/4 - 1/4) = 3. f0 leaves 2 * 3 * (1 - 1/9 - 4/9) = 8/3, gain 1/3.
  // f1 at 0.5 leaves two pure children, gain 3; f1 at 1.5 leaves 4 * (1 - 9/16 - 1/16) = 1.5.
  CHECK(t.nodes[0].feature == 1);
  CHECK(t.nodes[0].threshold == 0.5);
  CHECK(t.importance == std::vector<double>{0.0, 1.0});
  CHECK(t.nodes.size() == 3);
}

TEST_CASE("trees and forests fit separable data") {
  const auto x = blobs(80, 6, 1.5, 7);
  for (auto kind : {ModelKind::Tree, ModelKind::Forest}) {
    ModelConfig cfg;
    cfg.forest_trees = 25;
    const auto model = train(kind, x, cfg);
    CHECK(accuracy(predict(model, x), x) == 1.0);
    const auto imp = feature_importance(model);
    double sum = 0.0;
    for (const auto& [name, v] : imp) sum += v;
    CHECK(std::abs(sum - 1.0) < 1e-9);
  }
}

TEST_CASE("forest importance concentrates on the informative column") {
  Rng rng(3);
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  for (int i = 0; i < 200; ++i) {
    const int y = i % 2;
    rows.push_back({y + rng.uniform(0.0, 0.9), rng.uniform()});
    labels.push_back(y);
  }
  const auto x = dense_matrix(rows, labels);
  const auto model = train(ModelKind::Forest, x, {});
  const auto imp = feature_importance(model);
  CHECK(imp[0].first == "f0");
  CHECK(imp[0].second > 0.9);
}

TEST_CASE("tree predictions are invariant to positive column scaling") {
  const auto x = blobs(40, 3, 0.8, 5);
  std::vector<std::vector<double>> scaled;
  std::vector<int> labels;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    auto row = x.dense_row(r);
    for (auto& v : row) v *= 8.0;
    scaled.push_back(row);
    labels.push_back(to_int(x.labels()[r]));
  }
  const auto xs = dense_matrix(scaled, labels);
  const auto a = train(ModelKind::Tree, x, {});
  const auto b = train(ModelKind::Tree, xs, {});
  CHECK(predict(a, x) == predict(b, xs));
  CHECK(a.trees[0].importance == b.trees[0].importance);
}

TEST_CASE("forest proba is the vote fraction") {
  const auto x = dense_matrix({{0.0}, {1.0}}, {0, 1});
  TrainedModel m;
  m.kind = ModelKind::Forest;
  m.feature_names = x.column_names();
  m.fingerprint = x.fingerprint();
  for (int t = 0; t < 100; ++t) {
    DecisionTree tree;
    tree.nodes.push_back(TreeNode{-1, 0.0, -1, -1, t < 80 ? 1.0 : 0.0});
    tree.importance = {0.0};
    m.trees.push_back(tree);
  }
  CHECK(predict_proba(m, x)[0] == 0.8);
}

TEST_CASE("logistic boundary at zero weights") {
  const auto x = dense_matrix({{1.0, 2.0}, {0.0, 3.0}}, {0, 1});
  TrainedModel m;
  m.kind = ModelKind::LogReg;
  m.feature_names = x.column_names();
  m.fingerprint = x.fingerprint();
  m.linear.weights = {0.0, 0.0};
  CHECK(predict_proba(m, x)[0] == 0.5);
  CHECK(predict(m, x) == std::vector<Label>{Label::Machine, Label::Machine});
}

TEST_CASE("voting majority and tie rule") {
  const auto x = dense_matrix({{0.0}}, {0});
  auto constant = [&](double p) {
    TrainedModel m;
    m.kind = ModelKind::LogReg;
    m.feature_names = x.column_names();
    m.fingerprint = x.fingerprint();
    m.linear.weights = {0.0};
    m.linear.bias = p > 0.5 ? 5.0 : -5.0;
    return m;
  };
  TrainedModel v;
  v.kind = ModelKind::Voting;
  v.feature_names = x.column_names();
  v.fingerprint = x.fingerprint();
  v.members = {constant(1), constant(1), constant(0)};
  CHECK(predict(v, x)[0] == Label::Machine);
  CHECK(score(v, x)[0] == doctest::Approx(2.0 / 3));
  v.members = {constant(1), constant(0)};
  CHECK(predict(v, x)[0] == Label::Machine);
  v.voting_tie_positive = false;
  CHECK_THROWS_AS(predict(v, x), ModelError);

  ModelConfig cfg;
  cfg.voting_members = {ModelKind::LogReg, ModelKind::Mnb};
  cfg.voting_tie_positive = false;
  CHECK_THROWS_AS(train(ModelKind::Voting, blobs(10, 2, 1.0, 1), cfg), ModelError);
}

TEST_CASE("every kind learns separable blobs and is deterministic") {
  const auto x = blobs(80, 5, 1.5, 11);
  for (auto kind : kAllModelKinds) {
    const std::string kind_name = to_string(kind);
    CAPTURE(kind_name);
    ModelConfig cfg;
    cfg.seed = 42;
    cfg.forest_trees = 20;
    const auto a = train(kind, x, cfg);
    const auto b = train(kind, x, cfg);
    CHECK(accuracy(predict(a, x), x) >= 0.99);
    CHECK(model_to_json(a).dump() == model_to_json(b).dump());
    CHECK(score(a, x) == score(b, x));
  }
}

TEST_CASE("model persistence round trip") {
  const auto x = blobs(40, 4, 1.0, 13);
  for (auto kind : kAllModelKinds) {
    const std::string kind_name = to_string(kind);
    CAPTURE(kind_name);
    ModelConfig cfg;
    cfg.forest_trees = 10;
    const auto m = train(kind, x, cfg);
    const auto back = model_from_json(nlohmann::json::parse(model_to_json(m).dump()));
    CHECK(score(back, x) == score(m, x));
    CHECK(predict(back, x) == predict(m, x));
  }
}

TEST_CASE("fingerprint and version checks") {
  const auto x = blobs(20, 3, 1.0, 1);
  const auto m = train(ModelKind::LogReg, x, {});
  FeatureMatrix other(mgtd::testing::column_names(3, "g"));
  other.add_dense_row(std::vector<double>{1, 1, 1}, Label::Human);
  CHECK_THROWS_AS(predict(m, other), ModelError);
  auto j = model_to_json(m);
  j["version"] = 99;
  CHECK_THROWS_AS(model_from_json(j), ModelError);
  auto k = model_to_json(m);
  k["fingerprint"] = "0000";
  CHECK_THROWS_AS(model_from_json(k), ModelError);
}

TEST_CASE("training preconditions") {
  const auto one_class = dense_matrix({{1.0}, {2.0}}, {1, 1});
  CHECK_THROWS_AS(train(ModelKind::LogReg, one_class, {}), InputError);
  const auto nan = dense_matrix({{std::nan("")}, {2.0}}, {0, 1});
  CHECK_THROWS_AS(train(ModelKind::LogReg, nan, {}), InputError);
}

TEST_CASE("balanced class weights") {
  const auto x = dense_matrix({{1}, {1}, {1}, {1}}, {0, 0, 0, 1});
  const auto w = class_weights(x, true);
  CHECK(w[0] == doctest::Approx(4.0 / 6));
  CHECK(w[3] == 2.0);
  CHECK(class_weights(x, false) == std::vector<double>(4, 1.0));
}

TEST_CASE("model kind names") {
  for (auto kind : kAllModelKinds) CHECK(parse_model_kind(to_string(kind)) == kind);
  CHECK_FALSE(parse_model_kind("knn").has_value());
}
