#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "seerisk/common.hpp"

namespace seerisk {

/// 1 - sum (c_i / n)^2. Throws DataError when every count is zero.
double gini(std::span<const std::uint64_t> counts);

/// Majority class (1..5) of a count vector; ties go to the lower class.
int majority_class(const ClassCounts& counts);

struct FeaturesPerSplit {
  enum class Mode { all, sqrt, fixed };
  Mode mode = Mode::sqrt;
  std::size_t count = 0;  // used by Mode::fixed

  static FeaturesPerSplit all() { return {Mode::all, 0}; }
  static FeaturesPerSplit sqrt() { return {Mode::sqrt, 0}; }
  static FeaturesPerSplit fixed(std::size_t n) { return {Mode::fixed, n}; }

  /// Number of candidate columns per node for `n_features` columns (>= 1).
  std::size_t resolve(std::size_t n_features) const;
  std::string to_string() const;
  static FeaturesPerSplit parse(const std::string& text);

  friend bool operator==(const FeaturesPerSplit&, const FeaturesPerSplit&) = default;
};

struct TreeParams {
  std::optional<int> max_depth;  // nullopt = unlimited
  std::size_t min_samples_split = 2;
  std::size_t min_samples_leaf = 1;
  FeaturesPerSplit features_per_split = FeaturesPerSplit::sqrt();

  /// Throws ConfigError on inconsistent values.
  void validate() const;

  friend bool operator==(const TreeParams&, const TreeParams&) = default;
};

/// Internal nodes send x[feature] <= threshold left. Every node keeps the
/// class counts of the training rows that reached it.
struct TreeNode {
  int feature = -1;
  double threshold = 0;
  std::int32_t left = -1;
  std::int32_t right = -1;
  ClassCounts counts{};

  bool is_leaf() const noexcept { return feature < 0; }
  friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

class DecisionTree {
 public:
  DecisionTree() = default;
  /// Nodes in preorder with the root first; throws DataError if malformed.
  DecisionTree(std::vector<TreeNode> nodes, std::size_t n_features);

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t depth() const;
  std::size_t leaf_count() const;

  const TreeNode& leaf_for(std::span<const double> x) const;
  int predict(std::span<const double> x) const { return majority_class(leaf_for(x).counts); }

  /// Adds this tree's normalized impurity decrease per feature to `out`.
  void accumulate_importance(std::span<double> out) const;

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t n_features_ = 0;
};

struct Split {
  std::size_t column = 0;
  double threshold = 0;
  double gain = 0;  // parent gini minus weighted child gini
  std::size_t n_left = 0;
  std::size_t n_right = 0;
};

/// Best Gini split over the candidate columns, scanning midpoints between
/// consecutive distinct values. Gains are compared exactly; ties go to the
/// lower column, then the lower threshold. nullopt when no split with
/// positive gain leaves at least `min_samples_leaf` rows on each side.
/// `rows` may repeat indices (bootstrap samples).
std::optional<Split> best_split(const Matrix& x, std::span<const int> y,
                                std::span<const std::size_t> rows,
                                std::span<const std::size_t> candidate_columns,
                                std::size_t min_samples_leaf = 1);

/// Greedy CART. Stops on max_depth, min_samples_split, purity, or when no
/// positive-gain split exists among the sampled columns. Empty `rows` means
/// every row of `x`.
DecisionTree fit_tree(const Matrix& x, std::span<const int> y, const TreeParams& params, Rng& rng,
                      std::span<const std::size_t> rows = {});

namespace detail {

/// Column-major copy of a feature matrix plus, per column, the sorted
/// distinct values and each row's dense rank among them. Built once per
/// forest so that nodes can order rows by integer rank.
struct ColumnMajor {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;
  std::vector<std::uint32_t> ranks;
  std::vector<std::vector<double>> distinct;

  /// Throws DataError on NaN input.
  explicit ColumnMajor(const Matrix& m);
  const double* column(std::size_t c) const { return data.data() + c * rows; }
  const std::uint32_t* rank_column(std::size_t c) const { return ranks.data() + c * rows; }
};

DecisionTree fit_tree(const ColumnMajor& x, std::span<const int> y, const TreeParams& params,
                      Rng& rng, std::vector<std::size_t> rows);

}  // namespace detail

}  // namespace seerisk
