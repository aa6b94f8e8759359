#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "seerisk/evaluate/pipeline.hpp"

namespace seerisk {

inline constexpr int kFormatVersion = 1;

/// A fitted model together with everything needed to score raw panel
/// records: window settings and the preprocessing fitted on training rows.
struct ModelFile {
  WindowConfig window;
  FittedPreprocessor preprocessor;
  Classifier classifier;
  std::uint64_t seed = 0;
  std::string config_hash;
  /// Free-form training facts (params, histograms, row counts).
  nlohmann::json training = nlohmann::json::object();
};

nlohmann::json model_to_json(const ModelFile& model);
/// Throws ConfigError on an unsupported format version or a malformed file.
ModelFile model_from_json(const nlohmann::json& j);

void save_model(const std::filesystem::path& path, const ModelFile& model);
ModelFile load_model(const std::filesystem::path& path);

/// Numbers as JSON; NaN and infinities become the strings "nan", "inf", "-inf".
nlohmann::json json_number(double v);
double number_from_json(const nlohmann::json& j);

nlohmann::json forest_params_to_json(const ForestParams& p);
nlohmann::json logistic_params_to_json(const LogisticParams& p);

/// Writes `text` to `path` atomically enough for batch use: a sibling
/// temporary file renamed over the target. Creates parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace seerisk
