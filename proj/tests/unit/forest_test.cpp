#include <gtest/gtest.h>

#include "seerisk/learn/classifier.hpp"
#include "seerisk/learn/forest.hpp"
#include "support.hpp"

namespace seerisk {
namespace {

DecisionTree stub_tree(int label, std::size_t n_features = 2) {
  TreeNode leaf;
  leaf.counts[static_cast<std::size_t>(label - 1)] = 1;
  return DecisionTree({leaf}, n_features);
}

TEST(ForestVote, Majority) {
  RandomForest f({stub_tree(2), stub_tree(2), stub_tree(3)}, 2);
  std::vector<double> x = {0, 0};
  auto v = f.predict(x);
  EXPECT_EQ(v.label, 2);
  EXPECT_NEAR(v.fractions[1], 2.0 / 3, 1e-15);
  EXPECT_NEAR(v.fractions[2], 1.0 / 3, 1e-15);
  EXPECT_EQ(v.fractions[0] + v.fractions[3] + v.fractions[4], 0.0);
}

TEST(ForestVote, TieGoesLow) {
  RandomForest f({stub_tree(3), stub_tree(2)}, 2);
  std::vector<double> x = {0, 0};
  EXPECT_EQ(f.predict(x).label, 2);
}

TEST(ForestVote, WidthChecked) {
  RandomForest f({stub_tree(3)}, 2);
  std::vector<double> x = {0};
  EXPECT_THROW(f.predict(x), ConfigError);
}

TEST(Forest, SingleTreeEqualsFitTree) {
  Rng rng(3);
  auto x = testing::random_matrix(rng, 120, 4);
  auto y = testing::random_labels(rng, 120, 3);
  ForestParams p;
  p.n_trees = 1;
  p.bootstrap = false;
  p.tree.features_per_split = FeaturesPerSplit::all();
  auto forest = fit_forest(x, y, p);
  Rng tree_rng(99);
  auto tree = fit_tree(x, y, p.tree, tree_rng);
  auto probe = testing::random_matrix(rng, 200, 4);
  for (std::size_t i = 0; i < probe.rows(); ++i) {
    EXPECT_EQ(forest.predict(probe.row(i)).label, tree.predict(probe.row(i)));
  }
}

TEST(Forest, DeterministicAcrossThreadCounts) {
  Rng rng(5);
  auto x = testing::random_matrix(rng, 300, 6);
  auto y = testing::random_labels(rng, 300);
  ForestParams p;
  p.n_trees = 16;
  p.seed = 77;
  p.tree.max_depth = 6;
  p.threads = 1;
  auto a = fit_forest(x, y, p);
  p.threads = 4;
  auto b = fit_forest(x, y, p);
  auto c = fit_forest(x, y, p);
  EXPECT_EQ(a, b);
  EXPECT_EQ(b, c);
  p.seed = 78;
  EXPECT_FALSE(fit_forest(x, y, p) == a);
}

TEST(Forest, SeparableCloudOutOfBag) {
  Rng rng(21);
  Matrix x(500, 2);
  std::vector<int> y(500);
  for (std::size_t i = 0; i < 500; ++i) {
    const bool hi = i % 2 == 0;
    x(i, 0) = rng.uniform01() + (hi ? 1.2 : 0.0);
    x(i, 1) = rng.uniform01();
    y[i] = hi ? 4 : 2;
  }
  ForestParams p;
  p.n_trees = 200;
  p.seed = 5;
  auto f = fit_forest(x, y, p);
  EXPECT_GE(out_of_bag_accuracy(f, x, y, p), 0.95);
}

TEST(Forest, ImportancesSumToOne) {
  Rng rng(2);
  auto x = testing::random_matrix(rng, 200, 5);
  auto y = testing::random_labels(rng, 200);
  ForestParams p;
  p.n_trees = 10;
  auto imp = fit_forest(x, y, p).feature_importances();
  double s = 0;
  for (double v : imp) {
    EXPECT_GE(v, 0);
    s += v;
  }
  EXPECT_NEAR(s, 1.0, 1e-9);
}

TEST(Forest, BootstrapDrawsWithReplacement) {
  Rng rng(1);
  auto rows = bootstrap_sample(1000, rng);
  ASSERT_EQ(rows.size(), 1000u);
  std::vector<bool> seen(1000, false);
  std::size_t distinct = 0;
  for (auto r : rows) {
    ASSERT_LT(r, 1000u);
    if (!seen[r]) ++distinct;
    seen[r] = true;
  }
  EXPECT_NEAR(static_cast<double>(distinct) / 1000, 0.632, 0.04);
}

TEST(Classifier, WrapsEitherLearner) {
  Classifier forest(RandomForest({stub_tree(5)}, 2));
  EXPECT_EQ(forest.kind(), LearnerKind::random_forest);
  std::vector<double> x = {1, 1};
  EXPECT_EQ(forest.predict(x).label, 5);
  Classifier logit(LogisticModel(2, LogisticParams{}));
  EXPECT_EQ(logit.kind(), LearnerKind::logistic);
  auto v = logit.predict(x);
  EXPECT_EQ(v.label, 1);
  for (double p : v.fractions) EXPECT_NEAR(p, 0.2, 1e-15);
  EXPECT_EQ(learner_kind_from_string("logistic"), LearnerKind::logistic);
  EXPECT_THROW(learner_kind_from_string("svm"), ConfigError);
}

}  // namespace
}  // namespace seerisk
