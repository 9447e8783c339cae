#include <algorithm>
#include <numeric>

#include "mgtd/error.hpp"
#include "mgtd/models.hpp"
#include "mgtd/rng.hpp"

namespace mgtd {

namespace {

struct Entry {
  double value;
  double w0;
  double w1;
};

struct NodeEntry {
  std::uint32_t feature;
  std::uint32_t row;
  double value;
};

// Weighted Gini impurity scaled by node weight: W * (1 - p0^2 - p1^2).
double impurity(double w0, double w1) {
  const double w = w0 + w1;
  return w > 0.0 ? w - (w0 * w0 + w1 * w1) / w : 0.0;
}

struct Work {
  std::int32_t node;
  std::vector<std::uint32_t> rows;
  std::size_t depth;
};

}  // namespace

double DecisionTree::leaf_value(std::span<const std::uint32_t> indices, std::span<const double> values) const {
  std::size_t k = 0;
  while (nodes[k].feature >= 0) {
    const auto f = static_cast<std::uint32_t>(nodes[k].feature);
    const auto it = std::lower_bound(indices.begin(), indices.end(), f);
    const double v = (it != indices.end() && *it == f) ? values[static_cast<std::size_t>(it - indices.begin())] : 0.0;
    k = static_cast<std::size_t>(v <= nodes[k].threshold ? nodes[k].left : nodes[k].right);
  }
  return nodes[k].positive_fraction;
}

DecisionTree fit_tree(const FeatureMatrix& x, std::span<const double> row_weights, const ModelConfig& config,
                      std::optional<std::size_t> max_features, std::uint64_t seed) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  if (row_weights.size() != n) throw InvariantError("fit_tree: weight count does not match rows");
  const auto& labels = x.labels();
  Rng rng(seed);

  DecisionTree tree;
  tree.importance.assign(m, 0.0);
  std::vector<std::uint32_t> permutation(m);
  std::iota(permutation.begin(), permutation.end(), 0U);
  std::vector<std::int64_t> slot(m, -1);  // feature -> first index in node_entries
  std::vector<NodeEntry> node_entries;
  std::vector<Entry> entries;
  std::vector<double> row_value(n, 0.0);

  Work root{0, {}, 0};
  for (std::size_t r = 0; r < n; ++r) {
    if (row_weights[r] > 0.0) root.rows.push_back(static_cast<std::uint32_t>(r));
  }
  tree.nodes.emplace_back();
  std::vector<Work> stack;
  stack.push_back(std::move(root));

  while (!stack.empty()) {
    Work work = std::move(stack.back());
    stack.pop_back();
    const auto& rows = work.rows;
    double w0 = 0.0, w1 = 0.0;
    for (auto r : rows) (labels[r] == Label::Machine ? w1 : w0) += row_weights[r];
    auto& node = tree.nodes[static_cast<std::size_t>(work.node)];
    node.positive_fraction = w1 + w0 > 0.0 ? w1 / (w0 + w1) : 0.0;
    if (w0 == 0.0 || w1 == 0.0 || rows.size() < config.min_samples_split) continue;
    if (config.max_depth && work.depth >= *config.max_depth) continue;

    // Nonzero entries of the node rows, grouped by feature.
    node_entries.clear();
    for (auto r : rows) {
      const auto idx = x.row_indices(r);
      const auto val = x.row_values(r);
      for (std::size_t k = 0; k < idx.size(); ++k) node_entries.push_back({idx[k], r, val[k]});
    }
    std::sort(node_entries.begin(), node_entries.end(), [](const NodeEntry& a, const NodeEntry& b) {
      return a.feature != b.feature ? a.feature < b.feature : a.row < b.row;
    });
    std::vector<std::pair<std::uint32_t, std::pair<std::size_t, std::size_t>>> present;
    for (std::size_t k = 0; k < node_entries.size();) {
      std::size_t e = k;
      while (e < node_entries.size() && node_entries[e].feature == node_entries[k].feature) ++e;
      slot[node_entries[k].feature] = static_cast<std::int64_t>(present.size());
      present.push_back({node_entries[k].feature, {k, e}});
      k = e;
    }

    const double parent = impurity(w0, w1);
    const double tolerance = 1e-12 * (w0 + w1);
    double best_gain = -1.0;
    std::int64_t best_feature = -1;
    double best_threshold = 0.0;

    // Returns false when the feature is constant over the node.
    auto evaluate = [&](std::uint32_t j) -> bool {
      if (slot[j] < 0) return false;
      const auto [begin, end] = present[static_cast<std::size_t>(slot[j])].second;
      entries.clear();
      double nz0 = 0.0, nz1 = 0.0;
      for (std::size_t k = begin; k < end; ++k) {
        const auto r = node_entries[k].row;
        const bool pos = labels[r] == Label::Machine;
        entries.push_back({node_entries[k].value, pos ? 0.0 : row_weights[r], pos ? row_weights[r] : 0.0});
        (pos ? nz1 : nz0) += row_weights[r];
      }
      if (end - begin < rows.size()) entries.push_back({0.0, std::max(0.0, w0 - nz0), std::max(0.0, w1 - nz1)});
      std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.value < b.value; });
      if (entries.front().value == entries.back().value) return false;
      double l0 = 0.0, l1 = 0.0;
      for (std::size_t i = 0; i + 1 < entries.size(); ++i) {
        l0 += entries[i].w0;
        l1 += entries[i].w1;
        const double a = entries[i].value;
        const double b = entries[i + 1].value;
        if (a == b) continue;
        const double gain = parent - impurity(l0, l1) - impurity(w0 - l0, w1 - l1);
        const bool better = gain > best_gain + tolerance ||
                            (gain >= best_gain - tolerance && best_feature >= 0 && static_cast<std::int64_t>(j) < best_feature);
        if (best_feature < 0 || better) {
          best_gain = gain;
          best_feature = j;
          double mid = 0.5 * (a + b);
          if (mid >= b) mid = a;
          best_threshold = mid;
        }
      }
      return true;
    };

    if (!max_features || *max_features >= m) {
      for (const auto& p : present) evaluate(p.first);
    } else {
      // Draw features without replacement until enough non-constant ones
      // have been examined.
      std::size_t examined = 0;
      for (std::size_t drawn = 0; drawn < m && examined < *max_features; ++drawn) {
        const std::size_t pick = drawn + rng.uniform_index(m - drawn);
        std::swap(permutation[drawn], permutation[pick]);
        if (evaluate(permutation[drawn])) ++examined;
      }
    }
    for (const auto& p : present) slot[p.first] = -1;
    if (best_feature < 0) continue;

    const auto f = static_cast<std::uint32_t>(best_feature);
    for (const auto& e : node_entries) {
      if (e.feature == f) row_value[e.row] = e.value;
    }
    Work left{static_cast<std::int32_t>(tree.nodes.size()), {}, work.depth + 1};
    Work right{static_cast<std::int32_t>(tree.nodes.size() + 1), {}, work.depth + 1};
    for (auto r : rows) (row_value[r] <= best_threshold ? left.rows : right.rows).push_back(r);
    for (auto r : rows) row_value[r] = 0.0;

    tree.importance[f] += std::max(0.0, best_gain);
    TreeNode& split = tree.nodes[static_cast<std::size_t>(work.node)];
    split.feature = static_cast<std::int32_t>(f);
    split.threshold = best_threshold;
    split.left = left.node;
    split.right = right.node;
    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    stack.push_back(std::move(right));
    stack.push_back(std::move(left));
  }

  const double total = std::accumulate(tree.importance.begin(), tree.importance.end(), 0.0);
  if (total > 0.0) {
    for (double& v : tree.importance) v /= total;
  }
  return tree;
}

}  // namespace mgtd
