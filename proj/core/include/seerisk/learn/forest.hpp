#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "seerisk/learn/tree.hpp"

namespace seerisk {

struct ForestParams {
  std::size_t n_trees = 100;
  TreeParams tree;
  bool bootstrap = true;
  std::uint64_t seed = 0;
  /// Worker threads for training; 0 = hardware concurrency. The fitted
  /// forest does not depend on this value.
  std::size_t threads = 0;

  void validate() const;
};

/// Hard-vote result: winning class and the fraction of trees per class.
struct Vote {
  int label = 0;
  std::array<double, kNumClasses> fractions{};
};

class RandomForest {
 public:
  RandomForest() = default;
  RandomForest(std::vector<DecisionTree> trees, std::size_t n_features);

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  std::size_t n_features() const noexcept { return n_features_; }

  /// Majority of tree votes; ties go to the lower class. Throws ConfigError
  /// on a width mismatch.
  Vote predict(std::span<const double> x) const;
  std::vector<Vote> predict(const Matrix& x) const;

  /// Mean over trees of per-tree normalized impurity decrease.
  std::vector<double> feature_importances() const;

  friend bool operator==(const RandomForest&, const RandomForest&) = default;

 private:
  std::vector<DecisionTree> trees_;
  std::size_t n_features_ = 0;
};

/// Seed of tree i, derived from the master seed rather than scheduling order.
std::uint64_t tree_seed(std::uint64_t master, std::size_t tree_index);

/// n draws with replacement from {0..n-1}.
std::vector<std::size_t> bootstrap_sample(std::size_t n, Rng& rng);

RandomForest fit_forest(const Matrix& x, std::span<const int> y, const ForestParams& params);

/// Accuracy of each row's vote over the trees whose bootstrap sample missed
/// it; rows in-bag for every tree are skipped. Regenerates the bootstrap
/// samples from `params`, which must be the ones used for fitting.
double out_of_bag_accuracy(const RandomForest& forest, const Matrix& x, std::span<const int> y,
                           const ForestParams& params);

}  // namespace seerisk
