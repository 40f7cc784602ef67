#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "touchauth/mlp.hpp"  // logistic()

namespace touchauth {

struct GbtConfig {
  int trees = 100;
  int max_depth = 3;
  double learning_rate = 0.1;
  int min_samples_leaf = 5;
  double max_leaf_value = 10.0;
};

struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0;
  int left = -1;
  int right = -1;
  double value = 0;  // leaf weight

  bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  double predict(const std::vector<double>& x) const {
    int idx = 0;
    while (!nodes[static_cast<std::size_t>(idx)].is_leaf()) {
      const auto& n = nodes[static_cast<std::size_t>(idx)];
      idx = x[static_cast<std::size_t>(n.feature)] < n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(idx)].value;
  }
};

struct GbtSplit {
  int feature = -1;
  double threshold = 0;
  double gain = 0;
};

// Second-order gain of putting (gl,hl)|(gr,hr) in separate leaves versus one.
inline double gbt_split_gain(double gl, double hl, double gr, double hr) {
  constexpr double eps = 1e-12;
  if (hl < eps || hr < eps) return -std::numeric_limits<double>::infinity();
  return gl * gl / hl + gr * gr / hr - (gl + gr) * (gl + gr) / (hl + hr);
}

// Exact greedy search over every feature and every midpoint between
// consecutive distinct values. Ties keep the first candidate found
// (lowest feature index, then lowest threshold).
inline GbtSplit find_best_split(const std::vector<std::vector<double>>& X,
                                const std::vector<double>& grad, const std::vector<double>& hess,
                                const std::vector<int>& rows, int min_samples_leaf) {
  GbtSplit best;
  best.gain = 0;
  if (rows.size() < 2 * static_cast<std::size_t>(min_samples_leaf)) return best;
  const int n_features = static_cast<int>(X[0].size());
  double g_total = 0, h_total = 0;
  for (int r : rows) {
    g_total += grad[static_cast<std::size_t>(r)];
    h_total += hess[static_cast<std::size_t>(r)];
  }
  std::vector<std::pair<double, int>> sorted;
  sorted.reserve(rows.size());
  for (int f = 0; f < n_features; ++f) {
    sorted.clear();
    for (int r : rows) sorted.emplace_back(X[static_cast<std::size_t>(r)][static_cast<std::size_t>(f)], r);
    std::sort(sorted.begin(), sorted.end());
    double gl = 0, hl = 0;
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
      gl += grad[static_cast<std::size_t>(sorted[i].second)];
      hl += hess[static_cast<std::size_t>(sorted[i].second)];
      if (sorted[i].first == sorted[i + 1].first) continue;  // not a boundary
      const std::size_t left_count = i + 1;
      if (left_count < static_cast<std::size_t>(min_samples_leaf) ||
          sorted.size() - left_count < static_cast<std::size_t>(min_samples_leaf))
        continue;
      const double gain = gbt_split_gain(gl, hl, g_total - gl, h_total - hl);
      if (gain > best.gain) {
        best.feature = f;
        best.threshold = 0.5 * (sorted[i].first + sorted[i + 1].first);
        best.gain = gain;
      }
    }
  }
  return best;
}

namespace detail {

inline double newton_leaf(const std::vector<double>& grad, const std::vector<double>& hess,
                          const std::vector<int>& rows, double clamp) {
  double g = 0, h = 0;
  for (int r : rows) {
    g += grad[static_cast<std::size_t>(r)];
    h += hess[static_cast<std::size_t>(r)];
  }
  if (h < 1e-12) return 0;
  return std::clamp(-g / h, -clamp, clamp);
}

inline int grow_tree(RegressionTree& tree, const std::vector<std::vector<double>>& X,
                     const std::vector<double>& grad, const std::vector<double>& hess,
                     const std::vector<int>& rows, int depth, const GbtConfig& config) {
  const int idx = static_cast<int>(tree.nodes.size());
  tree.nodes.emplace_back();
  GbtSplit split;
  if (depth < config.max_depth)
    split = find_best_split(X, grad, hess, rows, config.min_samples_leaf);
  if (split.feature < 0 || split.gain <= 0) {
    tree.nodes[static_cast<std::size_t>(idx)].value =
        newton_leaf(grad, hess, rows, config.max_leaf_value);
    return idx;
  }
  std::vector<int> left, right;
  for (int r : rows) {
    if (X[static_cast<std::size_t>(r)][static_cast<std::size_t>(split.feature)] < split.threshold)
      left.push_back(r);
    else
      right.push_back(r);
  }
  tree.nodes[static_cast<std::size_t>(idx)].feature = split.feature;
  tree.nodes[static_cast<std::size_t>(idx)].threshold = split.threshold;
  const int l = grow_tree(tree, X, grad, hess, left, depth + 1, config);
  const int r = grow_tree(tree, X, grad, hess, right, depth + 1, config);
  tree.nodes[static_cast<std::size_t>(idx)].left = l;
  tree.nodes[static_cast<std::size_t>(idx)].right = r;
  return idx;
}

}  // namespace detail

struct GbtModel {
  double base_score = 0;  // log-odds of the training positive rate
  double learning_rate = 0.1;
  std::vector<RegressionTree> trees;
  std::vector<double> round_loss;  // training logistic loss after each round

  double raw(const std::vector<double>& x) const {
    double s = 0;
    for (const auto& t : trees) s += t.predict(x);
    return base_score + learning_rate * s;
  }

  double score(const std::vector<double>& x) const { return logistic(raw(x)); }
};

// Boosted regression trees on logistic-loss gradients with second-order
// (Newton) leaf weights.
inline GbtModel train_gbt_model(const std::vector<std::vector<double>>& X,
                                const std::vector<int>& y, const GbtConfig& config) {
  if (X.empty()) throw DataError("train_gbt: empty training set");
  bool has0 = false, has1 = false;
  for (int v : y) (v == 1 ? has1 : has0) = true;
  if (!has0 || !has1) throw DataError("train_gbt: training data contains a single class");
  if (config.trees < 0 || config.max_depth <= 0 || config.min_samples_leaf <= 0 ||
      config.learning_rate <= 0 || config.learning_rate > 1)
    throw ConfigError("bad GBT config");

  const std::size_t n = X.size();
  GbtModel model;
  model.learning_rate = config.learning_rate;
  double positive = 0;
  for (int v : y) positive += v;
  model.base_score = std::log(positive / (static_cast<double>(n) - positive));

  std::vector<double> raw(n, model.base_score), grad(n), hess(n);
  std::vector<int> all(n);
  std::iota(all.begin(), all.end(), 0);

  auto training_loss = [&]() {
    double total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::clamp(logistic(raw[i]), 1e-12, 1.0 - 1e-12);
      total += y[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
    }
    return total / static_cast<double>(n);
  };

  for (int round = 0; round < config.trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = logistic(raw[i]);
      grad[i] = p - static_cast<double>(y[i]);
      hess[i] = p * (1.0 - p);
    }
    RegressionTree tree;
    detail::grow_tree(tree, X, grad, hess, all, 0, config);
    for (std::size_t i = 0; i < n; ++i) raw[i] += config.learning_rate * tree.predict(X[i]);
    model.trees.push_back(std::move(tree));
    const double loss = training_loss();
    if (!std::isfinite(loss)) throw TrainingError("GBT training diverged (non-finite loss)");
    model.round_loss.push_back(loss);
  }
  return model;
}

}  // namespace touchauth
