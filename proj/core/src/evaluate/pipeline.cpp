#include "seerisk/evaluate/pipeline.hpp"

#include <cmath>

namespace seerisk {

PipelineSeeds PipelineSeeds::derive(std::uint64_t master) {
  return {master, mix_seed(master, 1), mix_seed(master, 2), mix_seed(master, 3), mix_seed(master, 4)};
}

Classifier fit_classifier(const Matrix& x, std::span<const int> y, const LearnerConfig& learner,
                          const ForestParams& forest, const LogisticParams& logistic) {
  if (learner.kind == LearnerKind::random_forest) return Classifier(fit_forest(x, y, forest));
  return Classifier(fit_logistic(x, y, logistic));
}

namespace {

double accuracy_of(const Classifier& model, const FeatureMatrix& data) {
  auto predicted = model.predict_labels(data.x);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) correct += predicted[i] == data.y[i];
  return static_cast<double>(correct) / static_cast<double>(predicted.size());
}

struct TrainingRows {
  Matrix x;
  std::vector<int> y;
  ClassCounts before{};
  ClassCounts after{};
};

TrainingRows balance(const FeatureMatrix& train, const std::optional<RebalancePolicy>& policy,
                     std::uint64_t seed) {
  TrainingRows out;
  out.before = class_histogram(train.y);
  if (!policy) {
    out.x = train.x;
    out.y = train.y;
    out.after = out.before;
    return out;
  }
  RebalancePolicy p = *policy;
  p.seed = seed;
  auto groups = train.onehot_groups();
  auto r = rebalance(train.x, train.y, p, groups);
  out.x = std::move(r.x);
  out.y = std::move(r.y);
  out.after = r.after;
  return out;
}

SearchResult tune(const LagWindowSet& set, std::span<const std::size_t> train_rows,
                  const PipelineConfig& config, const PipelineSeeds& seeds) {
  const auto& learner = config.learner;
  std::vector<int> labels;
  labels.reserve(train_rows.size());
  for (auto r : train_rows) labels.push_back(set.rows[r].target_risk);

  SplitSpec inner{1.0 - learner.validation_fraction, mix_seed(seeds.search, 1), true};
  auto split = stratified_split(labels, inner);
  std::vector<std::size_t> fit_rows, val_rows;
  for (auto i : split.train) fit_rows.push_back(train_rows[i]);
  for (auto i : split.test) val_rows.push_back(train_rows[i]);

  auto pre = fit_preprocessor(set, fit_rows, config.features);
  auto fit_data = materialize(set, fit_rows, pre);
  auto val_data = materialize(set, val_rows, pre);
  auto rows = balance(fit_data, config.rebalance, mix_seed(seeds.rebalance, 1));

  SearchSpace space = *learner.search;
  space.seed = mix_seed(seeds.search, space.seed);
  return random_grid_search(space, [&](const ParamPoint& point) {
    ForestParams forest = learner.forest;
    LogisticParams logistic = learner.logistic;
    if (learner.kind == LearnerKind::random_forest) {
      forest = apply_params(forest, point);
      forest.seed = seeds.learner;
    } else {
      logistic = apply_params(logistic, point);
    }
    return accuracy_of(fit_classifier(rows.x, rows.y, learner, forest, logistic), val_data);
  });
}

}  // namespace

PipelineResult evaluate_pipeline(const PanelDataset& panel, const MacroTable* macro,
                                 const PipelineConfig& config) {
  PipelineResult result;
  result.seeds = PipelineSeeds::derive(config.seed);
  const auto& seeds = result.seeds;

  auto set = run_stage("windows", [&] {
    return build_lag_windows(panel, config.window.length, config.window.max_missing_fraction);
  });
  result.windows = set.stats;
  run_stage("features", [&] { prepare_features(set, config.features, macro); });

  auto split = run_stage("split", [&] {
    SplitSpec spec = config.split;
    spec.seed = seeds.split;
    return stratified_split(set.targets(), spec);
  });

  FeatureMatrix train, test;
  run_stage("preprocess", [&] {
    result.preprocessor = fit_preprocessor(set, split.train, config.features);
    train = materialize(set, split.train, result.preprocessor);
    test = materialize(set, split.test, result.preprocessor);
  });
  result.n_train = train.x.rows();
  result.n_test = test.x.rows();
  result.test_histogram = class_histogram(test.y);

  auto rows = run_stage("rebalance", [&] { return balance(train, config.rebalance, seeds.rebalance); });
  result.train_before = rows.before;
  result.train_after = rows.after;

  result.forest_params = config.learner.forest;
  result.forest_params.seed = seeds.learner;
  result.logistic_params = config.learner.logistic;
  if (config.learner.search) {
    result.search = run_stage("search", [&] { return tune(set, split.train, config, seeds); });
    run_stage("search", [&] {
      if (config.learner.kind == LearnerKind::random_forest) {
        result.forest_params = apply_params(result.forest_params, result.search->best);
      } else {
        result.logistic_params = apply_params(result.logistic_params, result.search->best);
      }
    });
  }

  result.classifier = run_stage("train", [&] {
    return fit_classifier(rows.x, rows.y, config.learner, result.forest_params, result.logistic_params);
  });

  run_stage("evaluate", [&] {
    result.test_predicted = result.classifier.predict_labels(test.x);
    result.test_actual = test.y;
    result.test_entities = test.entity_ids;
    result.test_periods = test.target_periods;
    result.metrics = compute_metrics(confusion_matrix(result.test_actual, result.test_predicted));
  });
  return result;
}

RepeatedHoldout repeated_holdout(const PanelDataset& panel, const MacroTable* macro,
                                 const PipelineConfig& config, std::size_t repeats) {
  if (repeats < 1) throw ConfigError("repeated holdout needs at least one repeat");
  RepeatedHoldout out;
  for (std::size_t r = 0; r < repeats; ++r) {
    PipelineConfig c = config;
    c.seed = mix_seed(config.seed, 1000 + r);
    auto result = evaluate_pipeline(panel, macro, c);
    out.split_seeds.push_back(result.seeds.split);
    out.reports.push_back(std::move(result.metrics));
  }
  double sum = 0, sq = 0;
  for (const auto& m : out.reports) sum += m.accuracy;
  out.mean_accuracy = sum / static_cast<double>(repeats);
  for (const auto& m : out.reports) sq += (m.accuracy - out.mean_accuracy) * (m.accuracy - out.mean_accuracy);
  out.stddev_accuracy = std::sqrt(sq / static_cast<double>(repeats));
  return out;
}

}  // namespace seerisk
