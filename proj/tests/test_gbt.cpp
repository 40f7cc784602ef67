#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "test_data.hpp"
#include "touchauth/model.hpp"

using namespace touchauth;

namespace {

void random_problem(Rng& rng, std::size_t n, int d, std::vector<std::vector<double>>& X,
                    std::vector<int>& y) {
  X.clear();
  y.clear();
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> row;
    for (int j = 0; j < d; ++j) row.push_back(rng.normal());
    X.push_back(row);
    // weakly feature-dependent labels
    y.push_back(X.back()[0] + 0.5 * rng.normal() > 0 ? 1 : 0);
  }
}

}  // namespace

TEST_CASE("depth-1 single tree picks the exhaustive best stump split") {
  Rng rng(55);
  GbtConfig config;
  config.trees = 1;
  config.max_depth = 1;
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<std::vector<double>> X;
    std::vector<int> y;
    random_problem(rng, 30 + rng.below(170), 5, X, y);
    bool has0 = false, has1 = false;
    for (int v : y) (v == 1 ? has1 : has0) = true;
    if (!has0 || !has1) continue;

    auto model = train_gbt_model(X, y, config);
    REQUIRE(model.trees.size() == 1);
    const auto& root = model.trees[0].nodes[0];

    // oracle gradients at the constant base score
    const double p = logistic(model.base_score);
    std::vector<double> grad, hess;
    for (int v : y) {
      grad.push_back(p - v);
      hess.push_back(p * (1 - p));
    }
    auto expected = oracle::o_best_stump(X, grad, hess, config.min_samples_leaf);
    if (expected.feature < 0) {
      REQUIRE(root.is_leaf());
    } else {
      REQUIRE(root.feature == expected.feature);
      REQUIRE(root.threshold == expected.threshold);
    }
  }
}

TEST_CASE("base score is the log-odds of the training positive rate") {
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    X.push_back({rng.normal()});
    y.push_back(i == 0 ? 0 : 1);  // 99:1 imbalance
  }
  GbtConfig config;
  config.trees = 0;
  auto model = train_gbt_model(X, y, config);
  CHECK_THAT(model.base_score, Catch::Matchers::WithinRel(std::log(99.0), 1e-12));
  // zero trees: score is logistic(base) everywhere
  CHECK(model.score({0.0}) == logistic(model.base_score));
}

TEST_CASE("GBT separates 2-blob toy data perfectly") {
  auto train = testdata::blob_dataset(100, 3.0, 40);
  auto test = testdata::blob_dataset(30, 3.0, 41);
  TrainConfig config;
  config.gbt.trees = 20;
  auto model = train_model(ModelVariant::Gbt, train, config);
  for (const auto& r : test.rows) REQUIRE(classify(model, r.vec) == r.label);
}

TEST_CASE("training loss is non-increasing per boosting round") {
  Rng rng(77);
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  random_problem(rng, 150, 5, X, y);
  GbtConfig config;
  config.trees = 40;
  auto model = train_gbt_model(X, y, config);
  REQUIRE(model.round_loss.size() == 40);
  for (std::size_t i = 1; i < model.round_loss.size(); ++i)
    REQUIRE(model.round_loss[i] <= model.round_loss[i - 1] + 1e-12);
}

TEST_CASE("GBT rejects single-class data and bad config") {
  std::vector<std::vector<double>> X{{0.0}, {1.0}};
  CHECK_THROWS_AS(train_gbt_model(X, {1, 1}, GbtConfig{}), DataError);
  GbtConfig bad;
  bad.learning_rate = 0;
  CHECK_THROWS_AS(train_gbt_model(X, {0, 1}, bad), ConfigError);
}

TEST_CASE("GBT training is deterministic") {
  auto train = testdata::blob_dataset(40, 1.0, 50);
  TrainConfig config;
  config.gbt.trees = 10;
  auto a = train_model(ModelVariant::Gbt, train, config);
  auto b = train_model(ModelVariant::Gbt, train, config);
  for (const auto& r : train.rows)
    REQUIRE(predict_score(a, r.vec) == predict_score(b, r.vec));
}

TEST_CASE("min_samples_leaf is respected at every split") {
  Rng rng(60);
  std::vector<std::vector<double>> X;
  std::vector<int> y;
  random_problem(rng, 80, 3, X, y);
  GbtConfig config;
  config.trees = 5;
  config.min_samples_leaf = 10;
  auto model = train_gbt_model(X, y, config);
  // replay every training row through every tree and count leaf membership
  for (const auto& tree : model.trees) {
    std::map<int, int> leaf_counts;
    for (const auto& row : X) {
      int idx = 0;
      while (!tree.nodes[static_cast<std::size_t>(idx)].is_leaf()) {
        const auto& nd = tree.nodes[static_cast<std::size_t>(idx)];
        idx = row[static_cast<std::size_t>(nd.feature)] < nd.threshold ? nd.left : nd.right;
      }
      ++leaf_counts[idx];
    }
    for (const auto& [leaf, count] : leaf_counts) REQUIRE(count >= config.min_samples_leaf);
  }
}
