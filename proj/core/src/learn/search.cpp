#include "seerisk/learn/search.hpp"

#include <sstream>

namespace seerisk {

void SearchSpace::validate() const {
  if (n_trials < 1) throw ConfigError("search needs n_trials >= 1");
  if (params.empty()) throw ConfigError("search space has no parameters");
  for (const auto& [name, domain] : params) {
    if (const auto* r = std::get_if<IntRange>(&domain)) {
      if (r->max < r->min) throw ConfigError("search range for '" + name + "' is empty");
    } else if (std::get<std::vector<ParamValue>>(domain).empty()) {
      throw ConfigError("search value set for '" + name + "' is empty");
    }
  }
}

SearchResult random_grid_search(const SearchSpace& space, const Objective& objective) {
  space.validate();
  Rng rng(space.seed);
  SearchResult result;
  std::map<ParamPoint, std::size_t> evaluated;  // point -> first trial index
  std::optional<std::size_t> best;

  for (std::size_t t = 0; t < space.n_trials; ++t) {
    Trial trial;
    trial.index = t;
    for (const auto& [name, domain] : space.params) {
      if (const auto* r = std::get_if<IntRange>(&domain)) {
        auto span = static_cast<std::size_t>(r->max - r->min) + 1;
        trial.point[name] = r->min + static_cast<std::int64_t>(rng.uniform_index(span));
      } else {
        const auto& values = std::get<std::vector<ParamValue>>(domain);
        trial.point[name] = values[rng.uniform_index(values.size())];
      }
    }
    if (auto it = evaluated.find(trial.point); it != evaluated.end()) {
      const auto& first = result.trials[it->second];
      trial.score = first.score;
      trial.error = first.error;
      trial.cached = true;
    } else {
      evaluated.emplace(trial.point, t);
      ++result.evaluations;
      try {
        trial.score = objective(trial.point);
      } catch (const std::exception& e) {
        trial.error = e.what();
      }
    }
    if (trial.score && (!best || *trial.score > *result.trials[*best].score)) best = t;
    result.trials.push_back(std::move(trial));
  }
  if (!best) throw DataError("random search: all " + std::to_string(space.n_trials) + " trials failed");
  result.best_trial = *best;
  result.best = result.trials[*best].point;
  result.best_score = *result.trials[*best].score;
  return result;
}

namespace {

ParamValue value_from_json(const nlohmann::json& v, const std::string& name) {
  if (v.is_null()) return std::string("unlimited");
  if (v.is_number_integer()) return v.get<std::int64_t>();
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return static_cast<std::int64_t>(v.get<bool>());
  throw ConfigError("search value for '" + name + "' must be a number, string or null");
}

std::int64_t as_int(const ParamValue& v, const std::string& name) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  if (const auto* d = std::get_if<double>(&v); d && *d == static_cast<double>(static_cast<std::int64_t>(*d))) {
    return static_cast<std::int64_t>(*d);
  }
  throw ConfigError("parameter '" + name + "' must be an integer");
}

double as_double(const ParamValue& v, const std::string& name) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw ConfigError("parameter '" + name + "' must be numeric");
}

std::size_t as_count(const ParamValue& v, const std::string& name) {
  auto i = as_int(v, name);
  if (i < 0) throw ConfigError("parameter '" + name + "' must be non-negative");
  return static_cast<std::size_t>(i);
}

}  // namespace

SearchSpace search_space_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("search space must be a JSON object");
  SearchSpace space;
  for (const auto& [key, val] : j.items()) {
    if (key == "n_trials") {
      space.n_trials = val.get<std::size_t>();
    } else if (key == "seed") {
      space.seed = val.get<std::uint64_t>();
    } else if (val.is_object()) {
      if (!val.contains("min") || !val.contains("max")) {
        throw ConfigError("search range '" + key + "' needs min and max");
      }
      space.params[key] = IntRange{val.at("min").get<std::int64_t>(), val.at("max").get<std::int64_t>()};
    } else if (val.is_array()) {
      std::vector<ParamValue> values;
      for (const auto& v : val) values.push_back(value_from_json(v, key));
      space.params[key] = std::move(values);
    } else {
      throw ConfigError("search entry '" + key + "' must be {min,max} or a list");
    }
  }
  space.validate();
  return space;
}

nlohmann::json param_value_to_json(const ParamValue& v) {
  return std::visit([](const auto& x) { return nlohmann::json(x); }, v);
}

nlohmann::json param_point_to_json(const ParamPoint& p) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : p) j[k] = param_value_to_json(v);
  return j;
}

nlohmann::json search_space_to_json(const SearchSpace& space) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, domain] : space.params) {
    if (const auto* r = std::get_if<IntRange>(&domain)) {
      j[name] = {{"min", r->min}, {"max", r->max}};
    } else {
      auto arr = nlohmann::json::array();
      for (const auto& v : std::get<std::vector<ParamValue>>(domain)) arr.push_back(param_value_to_json(v));
      j[name] = arr;
    }
  }
  j["n_trials"] = space.n_trials;
  j["seed"] = space.seed;
  return j;
}

std::string describe(const ParamPoint& p) { return param_point_to_json(p).dump(); }

ForestParams apply_params(ForestParams base, const ParamPoint& point) {
  for (const auto& [name, v] : point) {
    if (name == "n_trees") {
      base.n_trees = as_count(v, name);
    } else if (name == "max_depth") {
      if (const auto* s = std::get_if<std::string>(&v)) {
        if (*s != "unlimited") throw ConfigError("max_depth must be an integer or 'unlimited'");
        base.tree.max_depth.reset();
      } else {
        base.tree.max_depth = static_cast<int>(as_int(v, name));
      }
    } else if (name == "min_samples_split") {
      base.tree.min_samples_split = as_count(v, name);
    } else if (name == "min_samples_leaf") {
      base.tree.min_samples_leaf = as_count(v, name);
    } else if (name == "features_per_split") {
      if (const auto* s = std::get_if<std::string>(&v)) {
        base.tree.features_per_split = FeaturesPerSplit::parse(*s);
      } else {
        base.tree.features_per_split = FeaturesPerSplit::fixed(as_count(v, name));
      }
    } else if (name == "bootstrap") {
      base.bootstrap = as_int(v, name) != 0;
    } else {
      throw ConfigError("unknown random forest parameter '" + name + "'");
    }
  }
  return base;
}

LogisticParams apply_params(LogisticParams base, const ParamPoint& point) {
  for (const auto& [name, v] : point) {
    if (name == "learning_rate") {
      base.learning_rate = as_double(v, name);
    } else if (name == "l2") {
      base.l2 = as_double(v, name);
    } else if (name == "epochs") {
      base.epochs = as_count(v, name);
    } else {
      throw ConfigError("unknown logistic regression parameter '" + name + "'");
    }
  }
  return base;
}

}  // namespace seerisk
