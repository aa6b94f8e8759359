#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "seerisk/evaluate/confusion.hpp"
#include "seerisk/evaluate/pipeline.hpp"
#include "seerisk/evaluate/split.hpp"
#include "seerisk/synthgen/cohort.hpp"
#include "support.hpp"

namespace seerisk {
namespace {

std::vector<int> labels_with_counts(std::initializer_list<std::size_t> counts) {
  std::vector<int> y;
  int c = 1;
  for (auto n : counts) {
    y.insert(y.end(), n, c);
    ++c;
  }
  return y;
}

TEST(Split, PublishedTotals) {
  std::vector<int> y(9383, 2);
  for (std::size_t i = 0; i < y.size(); i += 2) y[i] = 3;
  auto s = stratified_split(y, {0.7, 1, true});
  EXPECT_EQ(s.train.size(), 6568u);
  EXPECT_EQ(s.test.size(), 2815u);
}

TEST(Split, RemainderRule) {
  std::vector<std::size_t> sizes = {5, 5};
  EXPECT_EQ(stratified_train_counts(sizes, 0.7), (std::vector<std::size_t>{4, 3}));
  std::vector<std::size_t> exact = {100, 10};
  EXPECT_EQ(stratified_train_counts(exact, 0.7), (std::vector<std::size_t>{70, 7}));
}

TEST(Split, PartitionAndStratification) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    auto y = testing::random_labels(rng, 20 + rng.uniform_index(300));
    auto s = stratified_split(y, {0.7, seed, true});
    std::vector<std::size_t> all = s.train;
    all.insert(all.end(), s.test.begin(), s.test.end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i < y.size(); ++i) ASSERT_EQ(all[i], i);
    EXPECT_TRUE(std::is_sorted(s.train.begin(), s.train.end()));
    EXPECT_EQ(s.train.size(), static_cast<std::size_t>(0.7 * static_cast<double>(y.size()) + 1e-9));
    ClassCounts train{};
    for (auto i : s.train) ++train[static_cast<std::size_t>(y[i] - 1)];
    auto full = class_histogram(y);
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      EXPECT_LE(std::abs(static_cast<double>(train[k]) - 0.7 * static_cast<double>(full[k])), 1.0);
    }
  }
}

TEST(Split, DeterministicAndSeedSensitive) {
  Rng rng(3);
  auto y = testing::random_labels(rng, 200);
  auto a = stratified_split(y, {0.7, 5, true});
  auto b = stratified_split(y, {0.7, 5, true});
  auto c = stratified_split(y, {0.7, 6, true});
  EXPECT_EQ(a.train, b.train);
  EXPECT_NE(a.train, c.train);
}

TEST(Split, Errors) {
  std::vector<int> one = {2};
  EXPECT_THROW(stratified_split(one, {0.7, 0, true}), DataError);
  std::vector<int> y = {1, 2, 3};
  EXPECT_THROW(stratified_split(y, {1.0, 0, true}), ConfigError);
  std::vector<int> bad = {1, 9, 2};
  EXPECT_THROW(stratified_split(bad, {0.5, 0, true}), DataError);
}

TEST(Confusion, Perfect) {
  std::vector<int> y = {1, 2, 3};
  auto cm = confusion_matrix(y, y);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(cm.counts[i][j], (i == j && i < 3) ? 1u : 0u);
  }
}

TEST(Confusion, HandCounted) {
  std::vector<int> t = {2, 2, 3}, p = {2, 3, 3};
  auto cm = confusion_matrix(t, p);
  EXPECT_EQ(cm.counts[1][1], 1u);
  EXPECT_EQ(cm.counts[1][2], 1u);
  EXPECT_EQ(cm.counts[2][2], 1u);
  EXPECT_EQ(cm.n, 3u);
  auto m = compute_metrics(cm);
  EXPECT_DOUBLE_EQ(*m.precision[2], 0.5);
  EXPECT_DOUBLE_EQ(*m.recall[1], 0.5);
  EXPECT_DOUBLE_EQ(m.accuracy, 2.0 / 3);
  EXPECT_FALSE(m.recall[0]);
  EXPECT_FALSE(m.precision[4]);
}

TEST(Confusion, EmptyAndErrors) {
  std::vector<int> none;
  auto cm = confusion_matrix(none, none);
  EXPECT_EQ(cm.n, 0u);
  EXPECT_THROW(compute_metrics(cm), DataError);
  std::vector<int> a = {1, 2}, b = {1};
  EXPECT_THROW(confusion_matrix(a, b), DataError);
  std::vector<int> c = {1, 0};
  try {
    confusion_matrix(a, c);
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("index 1"), std::string::npos);
  }
}

TEST(Metrics, IdentityPredictions) {
  Rng rng(4);
  auto y = testing::random_labels(rng, 100);
  auto m = compute_metrics(confusion_matrix(y, y));
  EXPECT_EQ(m.accuracy, 1.0);
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    if (m.recall[k]) EXPECT_EQ(*m.recall[k], 1.0);
    if (m.precision[k]) EXPECT_EQ(*m.precision[k], 1.0);
  }
}

TEST(Metrics, RowFourSplitRendering) {
  ConfusionMatrix cm;
  cm.counts[3] = {0, 0, 9, 2, 0};
  cm.counts[1] = {0, 5, 0, 0, 0};
  cm.n = 16;
  auto m = compute_metrics(cm);
  EXPECT_EQ(integer_row_percentages(cm.counts[3]), (std::array<int, 5>{0, 0, 82, 18, 0}));
  EXPECT_NEAR(*m.recall[3], 2.0 / 11, 1e-15);
  auto table = render_metrics_table(m);
  EXPECT_NE(table.find("82%"), std::string::npos);
  EXPECT_NE(table.find("18%"), std::string::npos);
}

TEST(Metrics, FuzzedIdentities) {
  Rng rng(6);
  for (int trial = 0; trial < 1000; ++trial) {
    ConfusionMatrix cm;
    for (auto& row : cm.counts) {
      for (auto& c : row) {
        c = rng.uniform01() < 0.4 ? 0 : rng.uniform_index(50);
        cm.n += c;
      }
    }
    if (cm.n == 0) continue;
    auto m = compute_metrics(cm);
    double weighted = 0;
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      if (m.recall[k]) weighted += *m.recall[k] * static_cast<double>(m.support[k]);
    }
    EXPECT_NEAR(m.accuracy, weighted / static_cast<double>(cm.n), 1e-12);
    for (std::size_t i = 0; i < kNumClasses; ++i) {
      auto ints = integer_row_percentages(cm.counts[i]);
      const int s = std::accumulate(ints.begin(), ints.end(), 0);
      EXPECT_EQ(s, cm.row_sum(i) ? 100 : 0);
      for (std::size_t j = 0; j < kNumClasses; ++j) {
        EXPECT_LT(std::abs(ints[j] - m.row_pct[i][j]), 1.0);
      }
    }
  }
}

TEST(Metrics, TableBlanksZeroCells) {
  std::vector<int> t = {2, 2, 3}, p = {2, 3, 3};
  auto table = render_metrics_table(compute_metrics(confusion_matrix(t, p)));
  EXPECT_EQ(table.find(" 0%"), std::string::npos);
  EXPECT_NE(table.find("50%"), std::string::npos);
  EXPECT_NE(table.find("100%"), std::string::npos);
}

struct SmallPipeline : ::testing::Test {
  static const GeneratedCohort& cohort() {
    static const GeneratedCohort c = [] {
      CohortSpec spec;
      spec.n_entities = 300;
      spec.seed = 12;
      return generate_cohort(spec);
    }();
    return c;
  }
  static PipelineConfig config() {
    PipelineConfig cfg;
    cfg.seed = 3;
    cfg.learner.forest.n_trees = 20;
    cfg.learner.forest.tree.max_depth = 6;
    return cfg;
  }
};

TEST_F(SmallPipeline, DeterministicResult) {
  auto a = evaluate_pipeline(cohort().panel, &cohort().macro, config());
  auto b = evaluate_pipeline(cohort().panel, &cohort().macro, config());
  EXPECT_EQ(a.classifier, b.classifier);
  EXPECT_EQ(a.test_predicted, b.test_predicted);
  EXPECT_EQ(a.metrics.confusion, b.metrics.confusion);
}

TEST_F(SmallPipeline, RebalanceOnlyTouchesTraining) {
  auto on = config();
  auto off = config();
  off.rebalance.reset();
  auto a = evaluate_pipeline(cohort().panel, &cohort().macro, on);
  auto b = evaluate_pipeline(cohort().panel, &cohort().macro, off);
  EXPECT_EQ(a.test_histogram, b.test_histogram);
  EXPECT_EQ(a.test_entities, b.test_entities);
  EXPECT_EQ(a.test_actual, b.test_actual);
  EXPECT_EQ(a.train_before, b.train_before);
  EXPECT_NE(a.train_after, b.train_after);
  const auto first = a.train_after[0];
  for (auto c : a.train_after) EXPECT_EQ(c, first);
}

TEST_F(SmallPipeline, StageTagOnFailure) {
  auto cfg = config();
  try {
    evaluate_pipeline(cohort().panel, nullptr, cfg);
    FAIL();
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "features");
    EXPECT_TRUE(e.is_config_error());
  }
}

TEST_F(SmallPipeline, SearchLogsEveryTrial) {
  auto cfg = config();
  SearchSpace space;
  space.params["max_depth"] = std::vector<ParamValue>{std::int64_t{2}, std::int64_t{6}};
  space.params["n_trees"] = IntRange{5, 15};
  space.n_trials = 4;
  cfg.learner.search = space;
  auto r = evaluate_pipeline(cohort().panel, &cohort().macro, cfg);
  ASSERT_TRUE(r.search);
  EXPECT_EQ(r.search->trials.size(), 4u);
  for (const auto& t : r.search->trials) EXPECT_TRUE(t.score.has_value());
  EXPECT_EQ(r.forest_params.n_trees,
            static_cast<std::size_t>(std::get<std::int64_t>(r.search->best.at("n_trees"))));
}

TEST_F(SmallPipeline, LogisticBaseline) {
  auto cfg = config();
  cfg.learner.kind = LearnerKind::logistic;
  cfg.learner.logistic.epochs = 50;
  auto r = evaluate_pipeline(cohort().panel, &cohort().macro, cfg);
  EXPECT_EQ(r.classifier.kind(), LearnerKind::logistic);
  EXPECT_EQ(r.test_predicted.size(), r.n_test);
}

TEST_F(SmallPipeline, RepeatedHoldoutSummaries) {
  auto cfg = config();
  cfg.learner.forest.n_trees = 5;
  auto r = repeated_holdout(cohort().panel, &cohort().macro, cfg, 3);
  ASSERT_EQ(r.reports.size(), 3u);
  double mean = 0;
  for (const auto& m : r.reports) mean += m.accuracy / 3;
  EXPECT_NEAR(r.mean_accuracy, mean, 1e-12);
  EXPECT_GE(r.stddev_accuracy, 0);
}

}  // namespace
}  // namespace seerisk
