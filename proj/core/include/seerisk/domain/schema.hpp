#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

namespace seerisk {

enum class ColumnKind { identifier, period, categorical, continuous, count, target };

std::string_view to_string(ColumnKind kind);
ColumnKind column_kind_from_string(std::string_view text);

constexpr bool is_numeric(ColumnKind kind) {
  return kind == ColumnKind::continuous || kind == ColumnKind::count;
}
constexpr bool is_feature(ColumnKind kind) {
  return kind == ColumnKind::categorical || is_numeric(kind);
}

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::continuous;
  /// Allowed tokens for categorical columns; empty means open vocabulary.
  std::vector<std::string> categories;
  bool nullable = true;

  friend bool operator==(const ColumnSpec&, const ColumnSpec&) = default;
};

/// Ordered column list with exactly one identifier, period and target column.
class ColumnSchema {
 public:
  ColumnSchema() = default;
  /// Throws ConfigError when the structural invariants do not hold.
  explicit ColumnSchema(std::vector<ColumnSpec> columns);

  const std::vector<ColumnSpec>& columns() const noexcept { return columns_; }
  std::size_t size() const noexcept { return columns_.size(); }
  const ColumnSpec& operator[](std::size_t i) const { return columns_[i]; }

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;  // throws ConfigError

  std::size_t identifier_index() const noexcept { return identifier_; }
  std::size_t period_index() const noexcept { return period_; }
  std::size_t target_index() const noexcept { return target_; }

  /// Indices of categorical, continuous and count columns in schema order.
  std::vector<std::size_t> feature_indices() const;

  friend bool operator==(const ColumnSchema& a, const ColumnSchema& b) {
    return a.columns_ == b.columns_;
  }

 private:
  std::vector<ColumnSpec> columns_;
  std::size_t identifier_ = 0;
  std::size_t period_ = 0;
  std::size_t target_ = 0;
};

nlohmann::json schema_to_json(const ColumnSchema& schema);
ColumnSchema schema_from_json(const nlohmann::json& j);
ColumnSchema load_schema(const std::filesystem::path& path);

/// The built-in schema covering the supervisory variable list.
ColumnSchema default_schema();

/// (variable label, schema column) for every listed base variable; repeated
/// labels in the source list map to the same column.
const std::vector<std::pair<std::string, std::string>>& appendix_a_variables();

/// Columns whose consecutive-period variation is a listed feature.
const std::vector<std::string>& default_variation_columns();

/// Supervisory rating columns that only enter the richest feature set.
const std::vector<std::string>& default_camels_columns();

}  // namespace seerisk
