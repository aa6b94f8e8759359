#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "seerisk/learn/forest.hpp"
#include "seerisk/learn/logistic.hpp"

namespace seerisk {

using ParamValue = std::variant<std::int64_t, double, std::string>;
using ParamPoint = std::map<std::string, ParamValue>;

struct IntRange {
  std::int64_t min = 0;
  std::int64_t max = 0;  // inclusive
};

/// An inclusive integer range or a finite set of values.
using ParamDomain = std::variant<IntRange, std::vector<ParamValue>>;

inline constexpr std::size_t kDefaultSearchTrials = 30;

struct SearchSpace {
  std::map<std::string, ParamDomain> params;
  std::size_t n_trials = kDefaultSearchTrials;
  std::uint64_t seed = 0;

  void validate() const;
};

struct Trial {
  std::size_t index = 0;
  ParamPoint point;
  std::optional<double> score;
  std::string error;
  /// The point had been evaluated by an earlier trial; its result was reused.
  bool cached = false;
};

struct SearchResult {
  ParamPoint best;
  double best_score = 0;
  std::size_t best_trial = 0;
  std::size_t evaluations = 0;
  std::vector<Trial> trials;
};

using Objective = std::function<double(const ParamPoint&)>;

/// Draws n_trials points uniformly from the space (parameters in name order)
/// and keeps the highest score; ties go to the earlier trial. A throwing
/// objective marks that trial failed. Throws DataError if every trial fails.
SearchResult random_grid_search(const SearchSpace& space, const Objective& objective);

/// {"param": {"min": a, "max": b} | [values...], "n_trials": n, "seed": s}.
/// A null entry in a value list stands for "unlimited".
SearchSpace search_space_from_json(const nlohmann::json& j);
nlohmann::json search_space_to_json(const SearchSpace& space);

nlohmann::json param_value_to_json(const ParamValue& v);
nlohmann::json param_point_to_json(const ParamPoint& p);
std::string describe(const ParamPoint& p);

/// Overrides the named fields: n_trees, max_depth ("unlimited" allowed),
/// min_samples_split, min_samples_leaf, features_per_split, bootstrap.
ForestParams apply_params(ForestParams base, const ParamPoint& point);
/// Overrides learning_rate, l2, epochs.
LogisticParams apply_params(LogisticParams base, const ParamPoint& point);

}  // namespace seerisk
