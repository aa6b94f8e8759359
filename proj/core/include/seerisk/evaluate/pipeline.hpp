#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seerisk/balance/smote.hpp"
#include "seerisk/domain/lag_window.hpp"
#include "seerisk/domain/panel.hpp"
#include "seerisk/evaluate/confusion.hpp"
#include "seerisk/evaluate/split.hpp"
#include "seerisk/learn/classifier.hpp"
#include "seerisk/learn/search.hpp"
#include "seerisk/preprocess/feature_set.hpp"
#include "seerisk/preprocess/macro.hpp"

namespace seerisk {

struct WindowConfig {
  int length = 3;
  double max_missing_fraction = 0.2;

  friend bool operator==(const WindowConfig&, const WindowConfig&) = default;
};

struct LearnerConfig {
  LearnerKind kind = LearnerKind::random_forest;
  ForestParams forest;
  LogisticParams logistic;
  /// When set, hyperparameters are tuned on an inner split of the training rows.
  std::optional<SearchSpace> search;
  double validation_fraction = 0.3;
};

/// Seeds of every random stage, derived from the master seed.
struct PipelineSeeds {
  std::uint64_t master = 0;
  std::uint64_t split = 0;
  std::uint64_t rebalance = 0;
  std::uint64_t learner = 0;
  std::uint64_t search = 0;

  static PipelineSeeds derive(std::uint64_t master);
};

struct PipelineConfig {
  WindowConfig window;
  FeatureSetConfig features;
  /// nullopt disables rebalancing.
  std::optional<RebalancePolicy> rebalance = RebalancePolicy{};
  LearnerConfig learner;
  SplitSpec split;
  std::uint64_t seed = 0;
};

struct PipelineResult {
  PipelineSeeds seeds;
  WindowStats windows;
  FittedPreprocessor preprocessor;
  Classifier classifier;
  ForestParams forest_params;        // as used for the final fit
  LogisticParams logistic_params;
  std::optional<SearchResult> search;
  MetricsReport metrics;

  std::size_t n_train = 0;
  std::size_t n_test = 0;
  ClassCounts train_before{};
  ClassCounts train_after{};
  ClassCounts test_histogram{};

  std::vector<std::string> test_entities;
  std::vector<PeriodIndex> test_periods;
  std::vector<int> test_actual;
  std::vector<int> test_predicted;
};

/// Lag windows -> features -> stratified split -> preprocessing fitted on
/// the training rows -> rebalance (training rows only) -> optional search ->
/// fit -> score the untouched test rows. Every failure is rethrown as a
/// StageError tagged with the stage name.
PipelineResult evaluate_pipeline(const PanelDataset& panel, const MacroTable* macro,
                                 const PipelineConfig& config);

/// Fits the learner on already materialized, optionally rebalanced rows.
Classifier fit_classifier(const Matrix& x, std::span<const int> y, const LearnerConfig& learner,
                          const ForestParams& forest, const LogisticParams& logistic);

struct RepeatedHoldout {
  std::vector<std::uint64_t> split_seeds;
  std::vector<MetricsReport> reports;
  double mean_accuracy = 0;
  double stddev_accuracy = 0;
};

/// Runs the pipeline `repeats` times, each under its own master seed
/// derived from config.seed.
RepeatedHoldout repeated_holdout(const PanelDataset& panel, const MacroTable* macro,
                                 const PipelineConfig& config, std::size_t repeats);

/// Runs `fn`, rethrowing any failure as a StageError for `stage`.
template <typename Fn>
decltype(auto) run_stage(const std::string& stage, Fn&& fn) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const ConfigError& e) {
    throw StageError(stage, e.what(), true);
  } catch (const std::exception& e) {
    throw StageError(stage, e.what(), false);
  }
}

}  // namespace seerisk
