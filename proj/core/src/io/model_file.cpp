#include "seerisk/io/model_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace seerisk {

using nlohmann::json;

json json_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "nan") return std::nan("");
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
  }
  throw ConfigError("expected a number, got " + j.dump());
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
    if (!out) throw DataError("failed writing " + path.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

json numbers(const std::vector<double>& v) {
  auto arr = json::array();
  for (double x : v) arr.push_back(json_number(x));
  return arr;
}

std::vector<double> numbers_from(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number_from_json(x));
  return out;
}

json preprocessor_to_json(const FittedPreprocessor& p) {
  json j;
  const auto& c = p.config;
  j["config"] = {{"variant", to_string(c.variant)},
                 {"scaler", to_string(c.scaler)},
                 {"cap", json_number(c.cap)},
                 {"imputation", to_string(c.imputation)},
                 {"variation_columns", c.variation_columns},
                 {"camels_columns", c.camels_columns}};
  j["window"] = p.window;
  j["numeric_columns"] = p.numeric_columns;
  j["categorical_columns"] = p.categorical_columns;
  j["derived_columns"] = p.derived_columns;
  auto enc = json::array();
  for (const auto& e : p.encoder.columns) enc.push_back({{"column", e.column}, {"categories", e.categories}});
  j["encoder"] = enc;
  j["encoded_groups"] = p.encoded_groups;
  auto sources = json::array();
  for (const auto& s : p.numeric_sources) sources.push_back({s.derived, s.index, s.lag});
  j["numeric_sources"] = sources;
  j["impute_values"] = numbers(p.impute_values);
  j["scaler"] = {{"kind", to_string(p.scaler.kind)},
                 {"columns", p.scaler.columns},
                 {"mean", numbers(p.scaler.mean)},
                 {"stddev", numbers(p.scaler.stddev)},
                 {"min", numbers(p.scaler.min)},
                 {"max", numbers(p.scaler.max)},
                 {"constant_columns", p.scaler.constant_columns}};
  auto manifest = json::array();
  for (const auto& m : p.manifest) {
    manifest.push_back({{"name", m.name}, {"source", m.source}, {"lag", m.lag}, {"transform", m.transform},
                        {"group", m.group}});
  }
  j["manifest"] = manifest;
  j["base_variable_count"] = p.base_variable_count;
  return j;
}

FittedPreprocessor preprocessor_from_json(const json& j) {
  FittedPreprocessor p;
  p.fitted = true;
  const auto& c = j.at("config");
  p.config.variant = feature_variant_from_string(c.at("variant").get<std::string>());
  p.config.scaler = scaler_kind_from_string(c.at("scaler").get<std::string>());
  p.config.cap = number_from_json(c.at("cap"));
  p.config.imputation = imputation_policy_from_string(c.at("imputation").get<std::string>());
  p.config.variation_columns = c.at("variation_columns").get<std::vector<std::string>>();
  p.config.camels_columns = c.at("camels_columns").get<std::vector<std::string>>();
  p.window = j.at("window").get<int>();
  p.numeric_columns = j.at("numeric_columns").get<std::vector<std::string>>();
  p.categorical_columns = j.at("categorical_columns").get<std::vector<std::string>>();
  p.derived_columns = j.at("derived_columns").get<std::vector<std::string>>();
  for (const auto& e : j.at("encoder")) {
    p.encoder.columns.push_back(
        {e.at("column").get<std::string>(), e.at("categories").get<std::vector<std::string>>()});
  }
  p.encoded_groups = j.at("encoded_groups").get<std::vector<std::size_t>>();
  for (const auto& s : j.at("numeric_sources")) {
    p.numeric_sources.push_back({s.at(0).get<bool>(), s.at(1).get<std::size_t>(), s.at(2).get<int>()});
  }
  p.impute_values = numbers_from(j.at("impute_values"));
  const auto& s = j.at("scaler");
  p.scaler.kind = scaler_kind_from_string(s.at("kind").get<std::string>());
  p.scaler.columns = s.at("columns").get<std::size_t>();
  p.scaler.mean = numbers_from(s.at("mean"));
  p.scaler.stddev = numbers_from(s.at("stddev"));
  p.scaler.min = numbers_from(s.at("min"));
  p.scaler.max = numbers_from(s.at("max"));
  p.scaler.constant_columns = s.at("constant_columns").get<std::vector<std::size_t>>();
  for (const auto& m : j.at("manifest")) {
    p.manifest.push_back({m.at("name").get<std::string>(), m.at("source").get<std::string>(),
                          m.at("lag").get<int>(), m.at("transform").get<std::string>(), m.at("group").get<int>()});
  }
  p.base_variable_count = j.at("base_variable_count").get<std::size_t>();
  return p;
}

json tree_to_json(const DecisionTree& tree) {
  json feature = json::array(), threshold = json::array(), left = json::array(), right = json::array(),
       counts = json::array();
  for (const auto& n : tree.nodes()) {
    feature.push_back(n.feature);
    threshold.push_back(json_number(n.threshold));
    left.push_back(n.left);
    right.push_back(n.right);
    counts.push_back(n.counts);
  }
  return {{"feature", feature}, {"threshold", threshold}, {"left", left}, {"right", right}, {"counts", counts}};
}

DecisionTree tree_from_json(const json& j, std::size_t n_features) {
  const auto& feature = j.at("feature");
  const auto& threshold = j.at("threshold");
  const auto& left = j.at("left");
  const auto& right = j.at("right");
  const auto& counts = j.at("counts");
  const auto n = feature.size();
  if (threshold.size() != n || left.size() != n || right.size() != n || counts.size() != n) {
    throw ConfigError("tree arrays have different lengths");
  }
  std::vector<TreeNode> nodes(n);
  for (std::size_t i = 0; i < n; ++i) {
    nodes[i].feature = feature[i].get<int>();
    nodes[i].threshold = number_from_json(threshold[i]);
    nodes[i].left = left[i].get<std::int32_t>();
    nodes[i].right = right[i].get<std::int32_t>();
    nodes[i].counts = counts[i].get<ClassCounts>();
  }
  try {
    return DecisionTree(std::move(nodes), n_features);
  } catch (const DataError& e) {
    throw ConfigError(std::string("malformed tree: ") + e.what());
  }
}

json classifier_to_json(const Classifier& c) {
  json j;
  j["kind"] = to_string(c.kind());
  j["n_features"] = c.n_features();
  if (const auto* f = c.forest()) {
    auto trees = json::array();
    for (const auto& t : f->trees()) trees.push_back(tree_to_json(t));
    j["trees"] = trees;
  } else {
    const auto* m = c.logistic();
    j["params"] = logistic_params_to_json(m->params());
    auto weights = json::array();
    for (std::size_t k = 0; k < kNumClasses; ++k) {
      auto row = m->weights().row(k);
      weights.push_back(numbers(std::vector<double>(row.begin(), row.end())));
    }
    j["weights"] = weights;
    j["bias"] = numbers(std::vector<double>(m->bias().begin(), m->bias().end()));
  }
  return j;
}

Classifier classifier_from_json(const json& j) {
  auto kind = learner_kind_from_string(j.at("kind").get<std::string>());
  auto n_features = j.at("n_features").get<std::size_t>();
  if (kind == LearnerKind::random_forest) {
    std::vector<DecisionTree> trees;
    for (const auto& t : j.at("trees")) trees.push_back(tree_from_json(t, n_features));
    return Classifier(RandomForest(std::move(trees), n_features));
  }
  const auto& p = j.at("params");
  LogisticParams params{number_from_json(p.at("learning_rate")), number_from_json(p.at("l2")),
                        p.at("epochs").get<std::size_t>()};
  LogisticModel m(n_features, params);
  const auto& w = j.at("weights");
  if (w.size() != kNumClasses) throw ConfigError("logistic weights need one row per class");
  for (std::size_t k = 0; k < kNumClasses; ++k) {
    auto row = numbers_from(w[k]);
    if (row.size() != n_features) throw ConfigError("logistic weight row has the wrong width");
    std::copy(row.begin(), row.end(), m.weights().row(k).begin());
  }
  auto bias = numbers_from(j.at("bias"));
  if (bias.size() != kNumClasses) throw ConfigError("logistic bias needs one entry per class");
  std::copy(bias.begin(), bias.end(), m.bias().begin());
  return Classifier(std::move(m));
}

}  // namespace

json forest_params_to_json(const ForestParams& p) {
  return {{"n_trees", p.n_trees},
          {"max_depth", p.tree.max_depth ? json(*p.tree.max_depth) : json(nullptr)},
          {"min_samples_split", p.tree.min_samples_split},
          {"min_samples_leaf", p.tree.min_samples_leaf},
          {"features_per_split", p.tree.features_per_split.to_string()},
          {"bootstrap", p.bootstrap},
          {"seed", p.seed}};
}

json logistic_params_to_json(const LogisticParams& p) {
  return {{"learning_rate", json_number(p.learning_rate)}, {"l2", json_number(p.l2)}, {"epochs", p.epochs}};
}

json model_to_json(const ModelFile& m) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "seerisk-model";
  j["seed"] = m.seed;
  j["config_hash"] = m.config_hash;
  j["window"] = {{"length", m.window.length}, {"max_missing_fraction", json_number(m.window.max_missing_fraction)}};
  j["preprocessor"] = preprocessor_to_json(m.preprocessor);
  j["learner"] = classifier_to_json(m.classifier);
  j["training"] = m.training;
  return j;
}

ModelFile model_from_json(const json& j) {
  if (!j.is_object() || j.value("kind", "") != "seerisk-model") throw ConfigError("not a seerisk model file");
  auto version = j.at("format_version").get<int>();
  if (version != kFormatVersion) {
    throw ConfigError("unsupported model format_version " + std::to_string(version) + " (expected " +
                      std::to_string(kFormatVersion) + ")");
  }
  try {
    ModelFile m;
    m.seed = j.at("seed").get<std::uint64_t>();
    m.config_hash = j.at("config_hash").get<std::string>();
    m.window.length = j.at("window").at("length").get<int>();
    m.window.max_missing_fraction = number_from_json(j.at("window").at("max_missing_fraction"));
    m.preprocessor = preprocessor_from_json(j.at("preprocessor"));
    m.classifier = classifier_from_json(j.at("learner"));
    m.training = j.value("training", json::object());
    if (m.classifier.n_features() != m.preprocessor.manifest.size()) {
      throw ConfigError("model width " + std::to_string(m.classifier.n_features()) +
                        " does not match its manifest of " + std::to_string(m.preprocessor.manifest.size()) +
                        " columns");
    }
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const ModelFile& model) {
  write_text_file(path, model_to_json(model).dump() + "\n");
}

ModelFile load_model(const std::filesystem::path& path) {
  auto text = read_text_file(path);
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("model file " + path.string() + " is not valid JSON: " + e.what());
  }
  return model_from_json(j);
}

}  // namespace seerisk
