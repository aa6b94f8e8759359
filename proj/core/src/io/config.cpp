#include "seerisk/io/config.hpp"

#include <cstdio>
#include <set>

#include "seerisk/io/model_file.hpp"

namespace seerisk {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::set<std::string>& known, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

void read_number(const json& j, const char* key, double& out) {
  if (j.contains(key)) out = number_from_json(j.at(key));
}

FeatureSetConfig features_from_json(const json& j) {
  check_keys(j, {"variant", "scaler", "cap", "imputation", "variation_columns", "camels_columns"}, "features");
  FeatureSetConfig f;
  if (j.contains("variant")) f.variant = feature_variant_from_string(j.at("variant").get<std::string>());
  if (j.contains("scaler")) f.scaler = scaler_kind_from_string(j.at("scaler").get<std::string>());
  read_number(j, "cap", f.cap);
  if (j.contains("imputation")) {
    f.imputation = imputation_policy_from_string(j.at("imputation").get<std::string>());
  }
  read(j, "variation_columns", f.variation_columns);
  read(j, "camels_columns", f.camels_columns);
  if (!(f.cap > 0)) throw ConfigError("features.cap must be positive");
  return f;
}

std::optional<RebalancePolicy> rebalance_from_json(const json& j) {
  check_keys(j, {"enabled", "targets", "k", "allow_duplication_fallback"}, "rebalance");
  if (!j.value("enabled", true)) return std::nullopt;
  RebalancePolicy p;
  if (j.contains("targets") && !j.at("targets").is_null()) {
    p.targets = j.at("targets").get<std::array<std::size_t, kNumClasses>>();
  }
  read(j, "k", p.k);
  read(j, "allow_duplication_fallback", p.allow_duplication_fallback);
  if (p.k < 1) throw ConfigError("rebalance.k must be at least 1");
  return p;
}

LearnerConfig learner_from_json(const json& j) {
  check_keys(j,
             {"kind", "n_trees", "max_depth", "min_samples_split", "min_samples_leaf", "features_per_split",
              "bootstrap", "threads", "learning_rate", "l2", "epochs", "validation_fraction"},
             "learner");
  LearnerConfig l;
  if (j.contains("kind")) l.kind = learner_kind_from_string(j.at("kind").get<std::string>());
  read(j, "n_trees", l.forest.n_trees);
  if (j.contains("max_depth")) {
    const auto& d = j.at("max_depth");
    if (d.is_null() || (d.is_string() && d.get<std::string>() == "unlimited")) {
      l.forest.tree.max_depth.reset();
    } else {
      l.forest.tree.max_depth = d.get<int>();
    }
  }
  read(j, "min_samples_split", l.forest.tree.min_samples_split);
  read(j, "min_samples_leaf", l.forest.tree.min_samples_leaf);
  if (j.contains("features_per_split")) {
    const auto& f = j.at("features_per_split");
    l.forest.tree.features_per_split =
        f.is_string() ? FeaturesPerSplit::parse(f.get<std::string>()) : FeaturesPerSplit::fixed(f.get<std::size_t>());
  }
  read(j, "bootstrap", l.forest.bootstrap);
  read(j, "threads", l.forest.threads);
  read_number(j, "learning_rate", l.logistic.learning_rate);
  read_number(j, "l2", l.logistic.l2);
  read(j, "epochs", l.logistic.epochs);
  read_number(j, "validation_fraction", l.validation_fraction);
  l.forest.validate();
  if (!(l.validation_fraction > 0 && l.validation_fraction < 1)) {
    throw ConfigError("learner.validation_fraction must lie strictly between 0 and 1");
  }
  if (!(l.logistic.learning_rate > 0) || !(l.logistic.l2 >= 0)) {
    throw ConfigError("learner.learning_rate must be positive and learner.l2 non-negative");
  }
  return l;
}

}  // namespace

PipelineConfig pipeline_config_from_json(const json& j) {
  check_keys(j, {"seed", "window", "features", "rebalance", "learner", "search", "split"}, "config");
  PipelineConfig c;
  try {
    read(j, "seed", c.seed);
    if (j.contains("window")) {
      const auto& w = j.at("window");
      check_keys(w, {"length", "max_missing_fraction"}, "window");
      read(w, "length", c.window.length);
      read_number(w, "max_missing_fraction", c.window.max_missing_fraction);
      if (c.window.length < 1) throw ConfigError("window.length must be at least 1");
      if (!(c.window.max_missing_fraction >= 0 && c.window.max_missing_fraction <= 1)) {
        throw ConfigError("window.max_missing_fraction must be in [0, 1]");
      }
    }
    if (j.contains("features")) c.features = features_from_json(j.at("features"));
    if (j.contains("rebalance")) c.rebalance = rebalance_from_json(j.at("rebalance"));
    if (j.contains("learner")) c.learner = learner_from_json(j.at("learner"));
    if (j.contains("search") && !j.at("search").is_null()) c.learner.search = search_space_from_json(j.at("search"));
    if (j.contains("split")) {
      const auto& s = j.at("split");
      check_keys(s, {"train_fraction", "stratify"}, "split");
      read_number(s, "train_fraction", c.split.train_fraction);
      read(s, "stratify", c.split.stratify);
      c.split.validate();
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig rc;
  json settings = json::object();
  for (const auto& [key, val] : j.items()) {
    auto path_field = [&]() -> std::optional<std::filesystem::path>* {
      if (key == "panel") return &rc.paths.panel;
      if (key == "macro") return &rc.paths.macro;
      if (key == "schema") return &rc.paths.schema;
      if (key == "model") return &rc.paths.model;
      if (key == "report_dir") return &rc.paths.report_dir;
      return nullptr;
    }();
    if (path_field) {
      if (val.is_null()) continue;
      if (!val.is_string()) throw ConfigError("config path '" + key + "' must be a string");
      std::filesystem::path p = val.get<std::string>();
      *path_field = p.is_absolute() || base.empty() ? p : base / p;
    } else {
      settings[key] = val;
    }
  }
  rc.pipeline = pipeline_config_from_json(settings);
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw ConfigError("config file not found: " + path.string());
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return run_config_from_json(j, path.parent_path());
}

json pipeline_config_to_json(const PipelineConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["window"] = {{"length", c.window.length}, {"max_missing_fraction", json_number(c.window.max_missing_fraction)}};
  j["features"] = {{"variant", to_string(c.features.variant)},
                   {"scaler", to_string(c.features.scaler)},
                   {"cap", json_number(c.features.cap)},
                   {"imputation", to_string(c.features.imputation)},
                   {"variation_columns", c.features.variation_columns},
                   {"camels_columns", c.features.camels_columns}};
  if (c.rebalance) {
    j["rebalance"] = {{"enabled", true},
                      {"targets", c.rebalance->targets ? json(*c.rebalance->targets) : json(nullptr)},
                      {"k", c.rebalance->k},
                      {"allow_duplication_fallback", c.rebalance->allow_duplication_fallback}};
  } else {
    j["rebalance"] = {{"enabled", false}};
  }
  const auto& l = c.learner;
  auto forest = forest_params_to_json(l.forest);
  forest.erase("seed");
  json learner = {{"kind", to_string(l.kind)}, {"validation_fraction", json_number(l.validation_fraction)}};
  learner.update(forest);
  learner.update(logistic_params_to_json(l.logistic));
  j["learner"] = learner;
  j["search"] = l.search ? search_space_to_json(*l.search) : json(nullptr);
  j["split"] = {{"train_fraction", json_number(c.split.train_fraction)}, {"stratify", c.split.stratify}};
  return j;
}

std::string config_hash(const PipelineConfig& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(pipeline_config_to_json(config).dump())));
  return buf;
}

}  // namespace seerisk
