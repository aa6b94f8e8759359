#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "seerisk/evaluate/pipeline.hpp"

namespace seerisk {

struct RunPaths {
  std::optional<std::filesystem::path> panel;
  std::optional<std::filesystem::path> macro;
  std::optional<std::filesystem::path> schema;
  std::optional<std::filesystem::path> model;
  std::optional<std::filesystem::path> report_dir;
};

struct RunConfig {
  RunPaths paths;
  PipelineConfig pipeline;
};

/// Parses a run configuration. Relative paths are resolved against `base`.
/// Unknown keys and bad values throw ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base = {});
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical echo of the settings that determine results. Paths and thread
/// counts are left out so that they do not change artifacts.
nlohmann::json pipeline_config_to_json(const PipelineConfig& config);
PipelineConfig pipeline_config_from_json(const nlohmann::json& j);

/// 16 hex digits of FNV-1a over the canonical echo.
std::string config_hash(const PipelineConfig& config);

}  // namespace seerisk
