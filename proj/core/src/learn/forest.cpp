#include "seerisk/learn/forest.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace seerisk {

void ForestParams::validate() const {
  if (n_trees < 1) throw ConfigError("n_trees must be >= 1");
  tree.validate();
}

RandomForest::RandomForest(std::vector<DecisionTree> trees, std::size_t n_features)
    : trees_(std::move(trees)), n_features_(n_features) {
  if (trees_.empty()) throw DataError("random forest needs at least one tree");
  for (const auto& t : trees_) {
    if (t.n_features() != n_features_) throw DataError("forest trees disagree on feature width");
  }
}

Vote RandomForest::predict(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw ConfigError("input has " + std::to_string(x.size()) + " features, model expects " +
                      std::to_string(n_features_));
  }
  ClassCounts votes{};
  for (const auto& t : trees_) ++votes[static_cast<std::size_t>(t.predict(x) - 1)];
  Vote v;
  v.label = majority_class(votes);
  for (std::size_t k = 0; k < votes.size(); ++k) {
    v.fractions[k] = static_cast<double>(votes[k]) / static_cast<double>(trees_.size());
  }
  return v;
}

std::vector<Vote> RandomForest::predict(const Matrix& x) const {
  std::vector<Vote> out;
  out.reserve(x.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) out.push_back(predict(x.row(r)));
  return out;
}

std::vector<double> RandomForest::feature_importances() const {
  std::vector<double> imp(n_features_, 0.0);
  for (const auto& t : trees_) t.accumulate_importance(imp);
  for (auto& v : imp) v /= static_cast<double>(trees_.size());
  return imp;
}

std::uint64_t tree_seed(std::uint64_t master, std::size_t tree_index) {
  return mix_seed(master, 0x7EE0000ull + tree_index);
}

std::vector<std::size_t> bootstrap_sample(std::size_t n, Rng& rng) {
  std::vector<std::size_t> rows(n);
  for (auto& r : rows) r = rng.uniform_index(n);
  return rows;
}

RandomForest fit_forest(const Matrix& x, std::span<const int> y, const ForestParams& params) {
  params.validate();
  if (x.rows() < 2) throw DataError("random forest needs at least 2 training rows");
  const detail::ColumnMajor cols(x);
  std::vector<DecisionTree> trees(params.n_trees);

  auto train_one = [&](std::size_t i) {
    Rng rng(tree_seed(params.seed, i));
    std::vector<std::size_t> rows;
    if (params.bootstrap) {
      rows = bootstrap_sample(x.rows(), rng);
    } else {
      rows.resize(x.rows());
      std::iota(rows.begin(), rows.end(), std::size_t{0});
    }
    trees[i] = detail::fit_tree(cols, y, params.tree, rng, std::move(rows));
  };

  std::size_t threads = params.threads == 0 ? std::thread::hardware_concurrency() : params.threads;
  threads = std::clamp<std::size_t>(threads, 1, params.n_trees);
  if (threads == 1) {
    for (std::size_t i = 0; i < params.n_trees; ++i) train_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    {
      std::vector<std::jthread> pool;
      for (std::size_t t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
          for (std::size_t i = next++; i < params.n_trees; i = next++) {
            try {
              train_one(i);
            } catch (...) {
              std::lock_guard lock(error_mutex);
              if (!error) error = std::current_exception();
            }
          }
        });
      }
    }
    if (error) std::rethrow_exception(error);
  }
  return RandomForest(std::move(trees), x.cols());
}

double out_of_bag_accuracy(const RandomForest& forest, const Matrix& x, std::span<const int> y,
                           const ForestParams& params) {
  if (!params.bootstrap) throw ConfigError("out-of-bag accuracy needs bootstrap sampling");
  const std::size_t n = x.rows();
  std::vector<ClassCounts> votes(n, ClassCounts{});
  std::vector<bool> in_bag(n);
  for (std::size_t i = 0; i < forest.trees().size(); ++i) {
    Rng rng(tree_seed(params.seed, i));
    std::fill(in_bag.begin(), in_bag.end(), false);
    for (std::size_t r : bootstrap_sample(n, rng)) in_bag[r] = true;
    for (std::size_t r = 0; r < n; ++r) {
      if (!in_bag[r]) ++votes[r][static_cast<std::size_t>(forest.trees()[i].predict(x.row(r)) - 1)];
    }
  }
  std::size_t scored = 0, correct = 0;
  for (std::size_t r = 0; r < n; ++r) {
    std::uint64_t total = 0;
    for (auto v : votes[r]) total += v;
    if (total == 0) continue;
    ++scored;
    if (majority_class(votes[r]) == y[r]) ++correct;
  }
  return scored == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(scored);
}

}  // namespace seerisk
